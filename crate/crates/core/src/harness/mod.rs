//! Command-line front end: `validate`, `run`, `converge` and `check`.
//!
//! Exit codes: 0 pass, 1 check or criterion failure, 2 input or structural
//! error. All floats are written with 17 significant digits.

mod config;

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

pub use config::{ConvergeSection, ProblemSection, ProblemSource, RunConfig, SchemeSection};

use crate::analysis::{
    component_spread, convergence_study, run_scheme, ConvergenceRow, SchemeTrace,
};
use crate::error::{Error, Result};
use crate::problem::{validate_problem, SplitProblem};
use crate::schemes::{
    check_c_le_pg, check_r_nonneg, check_stability_two_level, check_stability_vector, SchemeKind,
};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

pub const TRACE_FILE: &str = "trace.csv";
pub const CONVERGENCE_FILE: &str = "convergence.csv";
pub const CHECK_FILE: &str = "check.toml";

/// Result of a command: exit code, human-readable report and written files.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub report: String,
    pub files: Vec<PathBuf>,
}

impl Outcome {
    fn verdict(passed: bool, report: String, files: Vec<PathBuf>) -> Self {
        Outcome {
            code: if passed { EXIT_PASS } else { EXIT_FAIL },
            report,
            files,
        }
    }
}

fn fmt_f(x: f64) -> String {
    format!("{x:.16e}")
}

fn problem_for(config: &RunConfig) -> Result<SplitProblem> {
    config.build_problem()
}

/// Checks `A` and every `B_α`; an asymmetric part read from disk counts as a
/// failed check rather than an input error.
pub fn cmd_validate(config: &RunConfig) -> Result<Outcome> {
    let problem = match problem_for(config) {
        Ok(p) => p,
        Err(Error::Part { part, source }) if matches!(source.root(), Error::NotSymmetric(_)) => {
            let report = format!("{part}: not symmetric ({})\nFAIL\n", source.root());
            return Ok(Outcome::verdict(false, report, Vec::new()));
        }
        Err(e) => return Err(e),
    };
    let report = validate_problem(&problem);
    let mut text = String::new();
    for v in &report.verdicts {
        let status = if v.report.symmetric && v.report.positive_definite {
            "ok"
        } else if !v.report.symmetric {
            "not symmetric"
        } else {
            "not positive definite"
        };
        let _ = writeln!(
            text,
            "{}: {} (min pivot {})",
            v.name,
            status,
            fmt_f(v.report.min_pivot)
        );
    }
    text.push_str(if report.passed() { "PASS\n" } else { "FAIL\n" });
    Ok(Outcome::verdict(report.passed(), text, Vec::new()))
}

/// Trace rows `1..=N`: step, t, `‖y_α‖_B` per component, energy, bound
/// residual (empty on the first three-level step) and component spread.
pub fn write_trace_csv(problem: &SplitProblem, trace: &SchemeTrace, path: &Path) -> Result<()> {
    let three_level = trace.params.kind.is_three_level();
    let p = trace.states[0].p();
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    let mut header = vec!["step".to_string(), "t".to_string()];
    header.extend((1..=p).map(|k| format!("bnorm_{k}")));
    header.extend(["energy", "bound_residual", "component_spread"].map(String::from));
    w.write_record(&header).map_err(csv_err)?;
    for n in 1..=trace.steps() {
        let state = &trace.states[n];
        let mut row = vec![n.to_string(), fmt_f(trace.times[n])];
        for y in state.components() {
            row.push(fmt_f(problem.b_norm_sq(y)?.max(0.0).sqrt()));
        }
        let (energy, residual) = if three_level {
            (
                trace.energies.get(n - 1),
                n.checked_sub(2).and_then(|k| trace.bound_residuals.get(k)),
            )
        } else {
            (trace.energies.get(n), trace.bound_residuals.get(n - 1))
        };
        row.push(energy.map_or_else(String::new, |&e| fmt_f(e)));
        row.push(residual.map_or_else(String::new, |&r| fmt_f(r)));
        row.push(fmt_f(component_spread(state)));
        w.write_record(&row).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

fn csv_err(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Config(format!("csv: {other:?}")),
    }
}

pub fn cmd_run(config: &RunConfig, out_dir: &Path) -> Result<Outcome> {
    let problem = problem_for(config)?;
    let params = config.scheme_params()?;
    let steps = config.steps(&problem)?;
    let trace = run_scheme(&problem, params, steps)?;
    fs::create_dir_all(out_dir)?;
    let path = out_dir.join(TRACE_FILE);
    write_trace_csv(&problem, &trace, &path)?;
    let max_residual = trace
        .bound_residuals
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    let report = format!(
        "{steps} steps written to {}\nmax bound residual {}\nfinal component spread {}\n",
        path.display(),
        fmt_f(max_residual),
        fmt_f(component_spread(trace.last()))
    );
    Ok(Outcome::verdict(true, report, vec![path]))
}

pub fn write_convergence_csv(rows: &[ConvergenceRow], path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    w.write_record(["tau", "error", "observed_order"])
        .map_err(csv_err)?;
    for r in rows {
        let order = r.observed_order.map_or_else(String::new, fmt_f);
        w.write_record([fmt_f(r.tau), fmt_f(r.error), order])
            .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

/// Passes when the final observed order lies in the band, or when the table
/// has no order at all.
pub fn cmd_converge(config: &RunConfig, out_dir: &Path) -> Result<Outcome> {
    let problem = problem_for(config)?;
    let scheme = config.scheme()?;
    let conv = config.converge()?;
    let [lo, hi] = conv.band;
    if !(lo <= hi) {
        return Err(Error::Config(format!("empty band [{lo}, {hi}]")));
    }
    let rows = convergence_study(
        &problem,
        scheme.kind,
        scheme.sigma,
        scheme.theta,
        &conv.taus,
        conv.norm,
    )?;
    fs::create_dir_all(out_dir)?;
    let path = out_dir.join(CONVERGENCE_FILE);
    write_convergence_csv(&rows, &path)?;
    let last = rows.last().and_then(|r| r.observed_order);
    let passed = last.is_none_or(|q| (lo..=hi).contains(&q));
    let mut report = String::new();
    for r in &rows {
        let order = r.observed_order.map_or_else(|| "-".to_string(), fmt_f);
        let _ = writeln!(
            report,
            "tau {} error {} order {}",
            fmt_f(r.tau),
            fmt_f(r.error),
            order
        );
    }
    let _ = writeln!(
        report,
        "band [{lo}, {hi}]: {}",
        if passed { "PASS" } else { "FAIL" }
    );
    Ok(Outcome::verdict(passed, report, vec![path]))
}

/// Stability predicates and the `R ≥ 0`, `C ≤ pG` eigen-checks, written as
/// TOML.
pub fn cmd_check(config: &RunConfig, out_dir: &Path) -> Result<Outcome> {
    let problem = problem_for(config)?;
    let params = config.scheme_params()?;
    let p = problem.p();
    let two_level = check_stability_two_level(params.sigma);
    let vector = check_stability_vector(params.theta, params.sigma, p);
    let r = check_r_nonneg(&problem, params.theta, params.sigma, params.tau)?;
    let c = check_c_le_pg(&problem)?;
    let passed = c.passed
        && match params.kind {
            SchemeKind::TwoLevel => two_level,
            SchemeKind::VectorAdditive | SchemeKind::VectorSequential => vector && r.passed,
        };
    let kind = match params.kind {
        SchemeKind::TwoLevel => "two_level",
        SchemeKind::VectorAdditive => "vector_additive",
        SchemeKind::VectorSequential => "vector_sequential",
    };
    let mut s = String::new();
    let _ = writeln!(
        s,
        "[instance]\nm = {}\np = {p}\nscheme = \"{kind}\"",
        problem.dim()
    );
    let _ = writeln!(
        s,
        "tau = {}\nsigma = {}\ntheta = {}\n",
        fmt_f(params.tau),
        fmt_f(params.sigma),
        fmt_f(params.theta)
    );
    let _ = writeln!(
        s,
        "[stability]\ntwo_level = {two_level}\nvector = {vector}\n"
    );
    let _ = writeln!(
        s,
        "[r_nonneg]\nmin_eig = {}\nnorm = {}\npassed = {}\n",
        fmt_f(r.min_eig),
        fmt_f(r.norm),
        r.passed
    );
    let _ = writeln!(
        s,
        "[c_le_pg]\nmin_eig = {}\ng_norm = {}\npassed = {}\n",
        fmt_f(c.min_eig),
        fmt_f(c.norm),
        c.passed
    );
    let _ = writeln!(s, "[summary]\npassed = {passed}");
    fs::create_dir_all(out_dir)?;
    let path = out_dir.join(CHECK_FILE);
    fs::write(&path, &s)?;
    Ok(Outcome::verdict(passed, s, vec![path]))
}

#[derive(Debug, Parser)]
#[command(
    name = "vsplit",
    about = "Vector additive splitting schemes for B du/dt + A u = f"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check symmetry and definiteness of A and every B_k.
    Validate(CommonArgs),
    /// Run a scheme and write trace.csv.
    Run(CommonArgs),
    /// Convergence table against the exact solution.
    Converge(CommonArgs),
    /// Stability predicates and operator eigen-checks.
    Check(CommonArgs),
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    #[arg(long)]
    pub config: PathBuf,
    /// Overrides the seed in the config.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    #[arg(long)]
    pub quiet: bool,
}

type CommandFn = fn(&RunConfig, &Path) -> Result<Outcome>;

/// Parses `args` (including the program name) and runs the command;
/// returns the exit code.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                EXIT_INPUT
            } else {
                EXIT_PASS
            };
        }
    };
    let (args, cmd): (&CommonArgs, CommandFn) = match &cli.command {
        Command::Validate(a) => (a, |c, _| cmd_validate(c)),
        Command::Run(a) => (a, cmd_run),
        Command::Converge(a) => (a, cmd_converge),
        Command::Check(a) => (a, cmd_check),
    };
    let outcome = RunConfig::read(&args.config).and_then(|mut config| {
        if let Some(seed) = args.seed {
            config.seed = seed;
        }
        cmd(&config, &args.out)
    });
    match outcome {
        Ok(o) => {
            if !args.quiet {
                print!("{}", o.report);
            }
            o.code
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INPUT
        }
    }
}
