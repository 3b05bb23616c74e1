use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::analysis::{steps_to_horizon, ErrorNorm};
use crate::error::{Error, Result};
use crate::problem::{
    gen_pseudo_parabolic_2d, gen_random_split, manifest::load_manifest, Forcing, SplitProblem,
};
use crate::schemes::{SchemeKind, SchemeParams};

/// Where the problem instance comes from.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case")]
pub enum ProblemSource {
    Random {
        m: usize,
        p: usize,
        #[serde(default = "default_condition")]
        condition: f64,
    },
    #[serde(rename = "pseudo_parabolic_2d")]
    PseudoParabolic2d {
        nx: usize,
        ny: usize,
        #[serde(default = "default_kappa")]
        kappa: f64,
        #[serde(default)]
        c: f64,
    },
    Manifest {
        path: PathBuf,
    },
}

fn default_condition() -> f64 {
    10.0
}

fn default_kappa() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct ProblemSection {
    #[serde(flatten)]
    pub source: ProblemSource,
    /// Overrides the horizon of the generated or loaded problem.
    #[serde(default)]
    pub horizon: Option<f64>,
    /// Replaces the forcing with `f = 0`.
    #[serde(default)]
    pub zero_forcing: bool,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemeSection {
    pub kind: SchemeKind,
    /// Required by `run` and `check`; `converge` uses its own list.
    #[serde(default)]
    pub tau: Option<f64>,
    #[serde(default = "default_sigma")]
    pub sigma: f64,
    #[serde(default = "default_theta")]
    pub theta: f64,
    /// Defaults to `T / tau`.
    #[serde(default)]
    pub steps: Option<usize>,
}

impl SchemeSection {
    pub fn tau(&self) -> Result<f64> {
        self.tau
            .ok_or_else(|| Error::Config("[scheme] needs a tau".into()))
    }
}

fn default_sigma() -> f64 {
    0.5
}

fn default_theta() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConvergeSection {
    pub taus: Vec<f64>,
    #[serde(default = "default_band")]
    pub band: [f64; 2],
    #[serde(default)]
    pub norm: ErrorNorm,
}

fn default_band() -> [f64; 2] {
    [0.8, 1.6]
}

/// Parsed run configuration (TOML).
///
/// ```toml
/// seed = 1
///
/// [problem]
/// source = "random"      # or "pseudo_parabolic_2d", "manifest"
/// m = 8
/// p = 2
/// condition = 10.0
///
/// [scheme]
/// kind = "vector_additive"
/// tau = 0.01
/// sigma = 0.25
/// theta = 1.0
/// steps = 100
///
/// [converge]
/// taus = [0.1, 0.05, 0.025]
/// band = [0.8, 1.6]
/// norm = "b_norm"
/// ```
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub seed: u64,
    pub problem: ProblemSection,
    pub scheme: Option<SchemeSection>,
    pub converge: Option<ConvergeSection>,
    /// Directory that relative manifest paths are resolved against.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let mut cfg = Self::parse(&fs::read_to_string(path)?)?;
        cfg.base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(cfg)
    }

    pub fn build_problem(&self) -> Result<SplitProblem> {
        let section = &self.problem;
        let mut problem = match &section.source {
            ProblemSource::Random { m, p, condition } => {
                gen_random_split(self.seed, *m, *p, *condition)?
            }
            ProblemSource::PseudoParabolic2d { nx, ny, kappa, c } => {
                gen_pseudo_parabolic_2d(*nx, *ny, *kappa, *c)?
            }
            ProblemSource::Manifest { path } => load_manifest(self.base_dir.join(path))?,
        };
        if let Some(t) = section.horizon {
            problem = problem.with_horizon(t)?;
        }
        if section.zero_forcing {
            problem = problem.with_forcing(Forcing::Zero)?;
        }
        Ok(problem)
    }

    pub fn scheme(&self) -> Result<&SchemeSection> {
        self.scheme
            .as_ref()
            .ok_or_else(|| Error::Config("missing [scheme] section".into()))
    }

    pub fn scheme_params(&self) -> Result<SchemeParams> {
        let s = self.scheme()?;
        SchemeParams::new(s.kind, s.tau()?, s.sigma, s.theta)
    }

    /// Step count; `τ · steps ≤ T + τ` is enforced.
    pub fn steps(&self, problem: &SplitProblem) -> Result<usize> {
        let s = self.scheme()?;
        let tau = s.tau()?;
        let horizon = problem.horizon();
        let steps = match s.steps {
            Some(n) => n,
            None => steps_to_horizon(horizon, tau)?,
        };
        if steps == 0 {
            return Err(Error::Config("steps must be positive".into()));
        }
        if tau * steps as f64 > horizon + tau * (1.0 + 1e-12) {
            return Err(Error::Config(format!(
                "{steps} steps of {tau} overrun the horizon {horizon}"
            )));
        }
        Ok(steps)
    }

    pub fn converge(&self) -> Result<&ConvergeSection> {
        self.converge
            .as_ref()
            .ok_or_else(|| Error::Config("missing [converge] section".into()))
    }
}
