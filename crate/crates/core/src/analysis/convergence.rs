//! Temporal convergence tables against the exact solution.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{run_scheme, ExactSolver};
use crate::error::{Error, Result};
use crate::linalg::StateVector;
use crate::problem::SplitProblem;
use crate::schemes::{SchemeKind, SchemeParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorNorm {
    #[default]
    BNorm,
    Euclidean,
}

impl ErrorNorm {
    pub fn measure(self, problem: &SplitProblem, e: &StateVector) -> Result<f64> {
        match self {
            ErrorNorm::BNorm => Ok(problem.b_norm_sq(e)?.max(0.0).sqrt()),
            ErrorNorm::Euclidean => Ok(e.norm()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub tau: f64,
    pub error: f64,
    /// `ln(e_prev/e) / ln(τ_prev/τ)`; `log2(e_prev/e)` for halving.
    pub observed_order: Option<f64>,
}

/// Attaches observed orders to `(τ, error)` pairs.
pub fn convergence_table(taus: &[f64], errors: &[f64]) -> Vec<ConvergenceRow> {
    let mut rows = Vec::with_capacity(taus.len());
    for k in 0..taus.len() {
        let observed_order = (k > 0 && errors[k] > 0.0 && errors[k - 1] > 0.0)
            .then(|| (errors[k - 1] / errors[k]).ln() / (taus[k - 1] / taus[k]).ln());
        rows.push(ConvergenceRow {
            tau: taus[k],
            error: errors[k],
            observed_order,
        });
    }
    rows
}

/// Order over the whole table, `ln(e_first/e_last) / ln(τ_first/τ_last)`;
/// `None` for a single row or a zero error at either end.
pub fn span_order(rows: &[ConvergenceRow]) -> Option<f64> {
    let (first, last) = (rows.first()?, rows.last()?);
    (rows.len() > 1 && first.error > 0.0 && last.error > 0.0)
        .then(|| (first.error / last.error).ln() / (first.tau / last.tau).ln())
}

/// Number of steps of size `tau` that land on the horizon.
pub fn steps_to_horizon(horizon: f64, tau: f64) -> Result<usize> {
    let n = (horizon / tau).round();
    if n < 1.0 || (n * tau - horizon).abs() > 1e-9 * horizon {
        return Err(Error::InvalidParameter(format!(
            "tau = {tau} does not divide the horizon {horizon}"
        )));
    }
    Ok(n as usize)
}

/// Error at the horizon of component 1 (or the scalar state) against
/// `reference`, for each `τ` in a strictly decreasing list.
pub fn convergence_study_against(
    problem: &SplitProblem,
    kind: SchemeKind,
    sigma: f64,
    theta: f64,
    taus: &[f64],
    norm: ErrorNorm,
    reference: &StateVector,
) -> Result<Vec<ConvergenceRow>> {
    if taus.is_empty() {
        return Err(Error::InvalidParameter("empty tau list".into()));
    }
    if taus.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::InvalidParameter(
            "tau list must be strictly decreasing".into(),
        ));
    }
    let errors = taus
        .par_iter()
        .map(|&tau| {
            let params = SchemeParams::new(kind, tau, sigma, theta)?;
            let steps = steps_to_horizon(problem.horizon(), tau)?;
            let trace = run_scheme(problem, params, steps)?;
            norm.measure(problem, &trace.last().component(0).sub(reference))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(convergence_table(taus, &errors))
}

pub fn convergence_study(
    problem: &SplitProblem,
    kind: SchemeKind,
    sigma: f64,
    theta: f64,
    taus: &[f64],
    norm: ErrorNorm,
) -> Result<Vec<ConvergenceRow>> {
    let reference = ExactSolver::new(problem)?.eval(problem.horizon());
    convergence_study_against(problem, kind, sigma, theta, taus, norm, &reference)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::gen_random_split;

    #[test]
    fn table_orders() {
        let rows = convergence_table(&[0.1, 0.05, 0.025], &[4.0, 1.0, 0.25]);
        assert_eq!(rows[0].observed_order, None);
        assert!((rows[1].observed_order.unwrap() - 2.0).abs() < 1e-14);
        assert!((rows[2].observed_order.unwrap() - 2.0).abs() < 1e-14);
        let zero = convergence_table(&[0.1, 0.05], &[0.0, 0.0]);
        assert!(zero
            .iter()
            .all(|r| r.error == 0.0 && r.observed_order.is_none()));
        assert!((span_order(&rows).unwrap() - 2.0).abs() < 1e-12);
        assert_eq!(span_order(&zero), None);
        let wobbly = convergence_table(&[0.4, 0.2, 0.1], &[1.0, 1.0, 0.25]);
        assert!((span_order(&wobbly).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn discrete_solution_as_its_own_reference() {
        let p = gen_random_split(5, 4, 2, 10.0).unwrap();
        let params = SchemeParams::new(SchemeKind::TwoLevel, 0.1, 1.0, 0.0).unwrap();
        let own = run_scheme(&p, params, 10)
            .unwrap()
            .last()
            .component(0)
            .clone();
        let rows = convergence_study_against(
            &p,
            SchemeKind::TwoLevel,
            1.0,
            0.0,
            &[0.1],
            ErrorNorm::BNorm,
            &own,
        )
        .unwrap();
        assert_eq!(rows[0].error, 0.0);
    }

    #[test]
    fn rejects_bad_tau_lists() {
        let p = gen_random_split(5, 3, 1, 10.0).unwrap();
        let run = |taus: &[f64]| {
            convergence_study(&p, SchemeKind::TwoLevel, 0.5, 0.0, taus, ErrorNorm::BNorm)
        };
        assert!(run(&[]).is_err());
        assert!(run(&[0.1, 0.2]).is_err());
        assert!(run(&[0.3]).is_err());
    }

    #[test]
    fn implicit_euler_error_decreases_monotonically() {
        let p = gen_random_split(8, 6, 2, 10.0).unwrap();
        let rows = convergence_study(
            &p,
            SchemeKind::TwoLevel,
            1.0,
            0.0,
            &[0.1, 0.05, 0.025, 0.0125],
            ErrorNorm::BNorm,
        )
        .unwrap();
        assert!(rows.windows(2).all(|w| w[1].error < w[0].error), "{rows:?}");
    }
}
