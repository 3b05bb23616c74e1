//! Problem manifests: a TOML file naming Matrix Market files for the
//! operators and plain-text files for vectors, relative to the manifest.
//!
//! ```toml
//! A = "a.mtx"
//! B_parts = ["b1.mtx", "b2.mtx"]
//! u0 = "u0.txt"
//! T = 1.0
//!
//! [forcing]
//! kind = "trig"          # or "zero"
//! constant = "f0.txt"    # optional
//!
//! [[forcing.terms]]
//! omega = 2.0
//! cos = "fc.txt"         # optional
//! sin = "fs.txt"         # optional
//! ```

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::mtx::{read_sym_matrix, read_vector, write_sym_matrix, write_vector};
use crate::linalg::StateVector;
use crate::problem::{Forcing, SplitProblem, TrigForcing, TrigTerm};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Manifest {
    #[serde(rename = "A")]
    pub a: PathBuf,
    #[serde(rename = "B_parts")]
    pub b_parts: Vec<PathBuf>,
    pub u0: PathBuf,
    #[serde(rename = "T", default = "default_horizon")]
    pub horizon: f64,
    #[serde(default)]
    pub forcing: ForcingSpec,
}

fn default_horizon() -> f64 {
    1.0
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum ForcingSpec {
    #[default]
    Zero,
    Trig {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        constant: Option<PathBuf>,
        #[serde(default)]
        terms: Vec<TermSpec>,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TermSpec {
    pub omega: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cos: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sin: Option<PathBuf>,
}

impl Manifest {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&fs::read_to_string(path.as_ref())?)
    }
}

fn load_vec(base: &Path, rel: &Option<PathBuf>, m: usize, part: &str) -> Result<StateVector> {
    match rel {
        None => Ok(StateVector::zeros(m)),
        Some(p) => {
            let v = read_vector(base.join(p)).map_err(|e| e.in_part(part))?;
            v.expect_dim(m).map_err(|e| e.in_part(part))?;
            Ok(v)
        }
    }
}

/// Reads a manifest and everything it references. Errors name the part
/// (`A`, `B_k`, `u0`, `forcing`) they come from.
pub fn load_manifest(path: impl AsRef<Path>) -> Result<SplitProblem> {
    let path = path.as_ref();
    let manifest = Manifest::read(path)?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    let a = read_sym_matrix(base.join(&manifest.a)).map_err(|e| e.in_part("A"))?;
    let m = a.dim();
    let parts = manifest
        .b_parts
        .iter()
        .enumerate()
        .map(|(k, p)| read_sym_matrix(base.join(p)).map_err(|e| e.in_part(format!("B_{}", k + 1))))
        .collect::<Result<Vec<_>>>()?;
    let u0 = read_vector(base.join(&manifest.u0)).map_err(|e| e.in_part("u0"))?;
    let forcing = match &manifest.forcing {
        ForcingSpec::Zero => Forcing::Zero,
        ForcingSpec::Trig { constant, terms } => Forcing::Trig(TrigForcing {
            constant: load_vec(base, constant, m, "forcing")?,
            terms: terms
                .iter()
                .map(|t| {
                    Ok(TrigTerm {
                        omega: t.omega,
                        cos: load_vec(base, &t.cos, m, "forcing")?,
                        sin: load_vec(base, &t.sin, m, "forcing")?,
                    })
                })
                .collect::<Result<_>>()?,
        }),
    };
    SplitProblem::new(a, parts, forcing, u0, manifest.horizon)
}

/// Writes `problem.toml` plus its matrix and vector files into `dir`.
/// Closed-form forcings are stored in trigonometric form.
pub fn write_manifest(problem: &SplitProblem, dir: impl AsRef<Path>) -> Result<PathBuf> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir)?;
    write_sym_matrix(dir.join("a.mtx"), problem.a())?;
    let mut b_parts = Vec::new();
    for (k, b) in problem.parts().iter().enumerate() {
        let name = PathBuf::from(format!("b{}.mtx", k + 1));
        write_sym_matrix(dir.join(&name), b)?;
        b_parts.push(name);
    }
    write_vector(dir.join("u0.txt"), problem.u0())?;
    let forcing = match problem.forcing() {
        Forcing::Zero => ForcingSpec::Zero,
        f => {
            let tf = f.closed_form(problem.dim())?;
            write_vector(dir.join("f0.txt"), &tf.constant)?;
            let mut terms = Vec::new();
            for (k, t) in tf.terms.iter().enumerate() {
                let c = PathBuf::from(format!("f{}_cos.txt", k + 1));
                let s = PathBuf::from(format!("f{}_sin.txt", k + 1));
                write_vector(dir.join(&c), &t.cos)?;
                write_vector(dir.join(&s), &t.sin)?;
                terms.push(TermSpec {
                    omega: t.omega,
                    cos: Some(c),
                    sin: Some(s),
                });
            }
            ForcingSpec::Trig {
                constant: Some("f0.txt".into()),
                terms,
            }
        }
    };
    let manifest = Manifest {
        a: "a.mtx".into(),
        b_parts,
        u0: "u0.txt".into(),
        horizon: problem.horizon(),
        forcing,
    };
    let text = toml::to_string(&manifest).map_err(|e| Error::Config(e.to_string()))?;
    let path = dir.join("problem.toml");
    fs::write(&path, text)?;
    Ok(path)
}
