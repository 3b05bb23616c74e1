//! Scheme runs and the discrete a-priori bound monitors.

use crate::error::{Error, Result};
use crate::linalg::StateVector;
use crate::problem::{apply_block_d, apply_block_r, BlockState, SplitProblem};
use crate::schemes::{
    bootstrap_first_level, SchemeKind, SchemeParams, SequentialStepper, TwoLevelStepper,
    VectorAdditiveStepper, VectorStepper,
};

/// Absolute slack of the bound monitors.
pub const BOUND_TOL_ABS: f64 = 1e-10;
/// Slack relative to the initial energy.
pub const BOUND_TOL_REL: f64 = 1e-10;

/// Levels of one run.
///
/// `states[n]` is the level at `times[n]`; `forcings[n]` is the sample used
/// to go from level `n` to `n + 1` (for three-level runs `forcings[0]` is
/// the bootstrap step's). Two-level runs store single-component blocks.
/// `energies` and `bound_residuals` are filled by [`run_scheme`]: for
/// two-level runs `energies[n] = ‖y^n‖²_B`, for three-level runs
/// `energies[n − 1] = E_n` (`n ≥ 1`) and `bound_residuals[n − 1]` compares
/// `E_{n+1}` with `E_n`.
#[derive(Debug, Clone)]
pub struct SchemeTrace {
    pub params: SchemeParams,
    pub times: Vec<f64>,
    pub states: Vec<BlockState>,
    pub forcings: Vec<StateVector>,
    pub energies: Vec<f64>,
    pub bound_residuals: Vec<f64>,
}

impl SchemeTrace {
    pub fn steps(&self) -> usize {
        self.states.len() - 1
    }

    pub fn last(&self) -> &BlockState {
        self.states.last().expect("trace holds the initial level")
    }
}

fn run_levels(problem: &SplitProblem, params: SchemeParams, steps: usize) -> Result<SchemeTrace> {
    if steps == 0 {
        return Err(Error::InvalidParameter(
            "at least one step is required".into(),
        ));
    }
    let tau = params.tau;
    let mut trace = SchemeTrace {
        params,
        times: vec![0.0],
        states: Vec::with_capacity(steps + 1),
        forcings: Vec::with_capacity(steps),
        energies: Vec::new(),
        bound_residuals: Vec::new(),
    };
    match params.kind {
        SchemeKind::TwoLevel => {
            let stepper = TwoLevelStepper::new(problem, params.sigma, tau)?;
            let mut y = problem.u0().clone();
            trace.states.push(BlockState::replicate(&y, 1));
            for n in 0..steps {
                let t = n as f64 * tau;
                let phi = stepper.forcing(t);
                y = stepper.step_with(&y, &phi)?;
                trace.forcings.push(phi);
                trace.times.push((n + 1) as f64 * tau);
                trace.states.push(BlockState::replicate(&y, 1));
            }
        }
        SchemeKind::VectorAdditive => {
            let stepper = VectorAdditiveStepper::new(problem, params.theta, params.sigma, tau)?;
            run_three_level(problem, &stepper, steps, &mut trace)?;
        }
        SchemeKind::VectorSequential => {
            let stepper = SequentialStepper::new(problem, params.sigma, tau)?;
            run_three_level(problem, &stepper, steps, &mut trace)?;
        }
    }
    Ok(trace)
}

fn run_three_level(
    problem: &SplitProblem,
    stepper: &dyn VectorStepper,
    steps: usize,
    trace: &mut SchemeTrace,
) -> Result<()> {
    let tau = stepper.tau();
    let mut levels = bootstrap_first_level(problem, tau)?;
    trace.states.push(levels.previous.clone());
    trace.forcings.push(problem.forcing_at(0.5 * tau));
    trace.times.push(tau);
    trace.states.push(levels.current.clone());
    for n in 1..steps {
        let phi = problem.forcing_at(levels.t);
        let next = stepper.step(&levels, &phi)?;
        trace.forcings.push(phi);
        trace.times.push((n + 1) as f64 * tau);
        trace.states.push(next.clone());
        levels = levels.advance(next, tau);
    }
    Ok(())
}

/// Runs `steps` steps and fills the energy and bound-residual columns.
pub fn run_scheme(
    problem: &SplitProblem,
    params: SchemeParams,
    steps: usize,
) -> Result<SchemeTrace> {
    let mut trace = run_levels(problem, params, steps)?;
    let report = if params.kind.is_three_level() {
        check_bound_22(problem, &trace)?
    } else {
        check_bound_16(problem, &trace)?
    };
    trace.energies = report.energies;
    trace.bound_residuals = report.residuals;
    Ok(trace)
}

/// `E = (D v, v) + (1/τ)(R w, w)` with `v = (y^n + y^{n−1})/2`, `w = y^n − y^{n−1}`.
pub fn energy_e(
    problem: &SplitProblem,
    theta: f64,
    sigma: f64,
    tau: f64,
    current: &BlockState,
    previous: &BlockState,
) -> Result<f64> {
    problem.check_block(current)?;
    problem.check_block(previous)?;
    let v = BlockState::lincomb(0.5, current, 0.5, previous);
    let w = current.sub(previous);
    let dv = apply_block_d(problem, &v)?;
    let rw = apply_block_r(problem, theta, sigma, tau, &w)?;
    Ok(dv.inner(&v) + rw.inner(&w) / tau)
}

/// Per-step monitor output.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    /// The monitored functional per level.
    pub energies: Vec<f64>,
    /// Per-step `energy_{n+1} − energy_n − (τ/2)(A⁻¹φ^n, φ^n)`.
    pub residuals: Vec<f64>,
    /// `energy_n − energy_first − (τ/2) Σ_k (A⁻¹φ^k, φ^k)`, the summed form.
    pub cumulative_residuals: Vec<f64>,
    pub tolerance: f64,
}

impl BoundReport {
    pub fn passed(&self) -> bool {
        self.residuals
            .iter()
            .chain(&self.cumulative_residuals)
            .all(|&r| r <= self.tolerance)
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    fn from_energies(
        problem: &SplitProblem,
        energies: Vec<f64>,
        phis: &[StateVector],
        tau: f64,
    ) -> Result<Self> {
        let mut residuals = Vec::with_capacity(phis.len());
        let mut cumulative_residuals = Vec::with_capacity(phis.len());
        let mut budget = 0.0;
        for (n, phi) in phis.iter().enumerate() {
            let source = 0.5 * tau * problem.a_inv_norm_sq(phi)?;
            budget += source;
            residuals.push(energies[n + 1] - energies[n] - source);
            cumulative_residuals.push(energies[n + 1] - energies[0] - budget);
        }
        let tolerance = BOUND_TOL_ABS + BOUND_TOL_REL * energies[0].abs();
        Ok(BoundReport {
            energies,
            residuals,
            cumulative_residuals,
            tolerance,
        })
    }
}

/// `‖y^{n+1}‖²_B ≤ ‖y^n‖²_B + (τ/2)‖φ^n‖²_{A⁻¹}` on a two-level trace.
pub fn check_bound_16(problem: &SplitProblem, trace: &SchemeTrace) -> Result<BoundReport> {
    if trace.params.kind != SchemeKind::TwoLevel {
        return Err(Error::InvalidParameter(
            "the B-norm monitor applies to two-level traces".into(),
        ));
    }
    let energies = trace
        .states
        .iter()
        .map(|y| problem.b_norm_sq(y.component(0)))
        .collect::<Result<Vec<_>>>()?;
    BoundReport::from_energies(problem, energies, &trace.forcings, trace.params.tau)
}

/// `E_{n+1} ≤ E_n + (τ/2)(A⁻¹φ^n, φ^n)` on a three-level trace, for `n ≥ 1`.
pub fn check_bound_22(problem: &SplitProblem, trace: &SchemeTrace) -> Result<BoundReport> {
    let params = trace.params;
    if !params.kind.is_three_level() {
        return Err(Error::InvalidParameter(
            "the energy monitor applies to three-level traces".into(),
        ));
    }
    let energies = trace
        .states
        .windows(2)
        .map(|w| {
            energy_e(
                problem,
                params.theta,
                params.sigma,
                params.tau,
                &w[1],
                &w[0],
            )
        })
        .collect::<Result<Vec<_>>>()?;
    BoundReport::from_energies(problem, energies, &trace.forcings[1..], params.tau)
}

/// `max_α ‖y_α − y_1‖`
pub fn component_spread(y: &BlockState) -> f64 {
    let first = y.component(0);
    y.components()
        .iter()
        .map(|c| c.sub(first).norm())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::SymMatrix;
    use crate::problem::{gen_random_split, Forcing};

    #[test]
    fn spread_examples() {
        let y = BlockState::replicate(&StateVector::new(vec![1.0, 2.0]), 3);
        assert_eq!(component_spread(&y), 0.0);
        let y = BlockState::new(vec![
            StateVector::new(vec![1.0, 0.0]),
            StateVector::new(vec![0.0, 1.0]),
        ])
        .unwrap();
        assert!((component_spread(&y) - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn energy_trivial_cases() {
        let p = gen_random_split(1, 4, 2, 10.0).unwrap();
        let z = BlockState::zeros(2, 4);
        assert_eq!(energy_e(&p, 1.0, 0.25, 0.1, &z, &z).unwrap(), 0.0);
        let y = BlockState::new(vec![p.u0().clone(), p.u0().scaled(-0.5)]).unwrap();
        let e = energy_e(&p, 1.0, 0.25, 0.1, &y, &y).unwrap();
        let dy = apply_block_d(&p, &y).unwrap().inner(&y);
        assert!((e - dy).abs() < 1e-13 * dy);
    }

    #[test]
    fn zero_problem_has_zero_residuals() {
        let p = gen_random_split(2, 3, 2, 10.0)
            .unwrap()
            .with_forcing(Forcing::Zero)
            .unwrap()
            .with_u0(StateVector::zeros(3))
            .unwrap();
        let two = run_scheme(
            &p,
            SchemeParams::new(SchemeKind::TwoLevel, 0.1, 0.5, 0.0).unwrap(),
            5,
        )
        .unwrap();
        assert!(two.bound_residuals.iter().all(|&r| r == 0.0));
        let vec = run_scheme(
            &p,
            SchemeParams::new(SchemeKind::VectorAdditive, 0.1, 0.25, 1.0).unwrap(),
            5,
        )
        .unwrap();
        assert!(vec.energies.iter().all(|&e| e == 0.0));
        assert!(vec.bound_residuals.iter().all(|&r| r == 0.0));
    }

    #[test]
    fn stationary_two_level_residual_is_minus_source() {
        // A y = f, y(0) = y: the state stays put and only the source term remains
        let p = gen_random_split(9, 5, 2, 10.0).unwrap();
        let y = p.u0().clone();
        let f = p.a().apply(&y).unwrap();
        let q = p.with_forcing(Forcing::constant(f.clone())).unwrap();
        let tau = 0.05;
        let trace = run_scheme(
            &q,
            SchemeParams::new(SchemeKind::TwoLevel, tau, 0.5, 0.0).unwrap(),
            10,
        )
        .unwrap();
        let source = 0.5 * tau * q.a_inv_norm_sq(&f).unwrap();
        let report = check_bound_16(&q, &trace).unwrap();
        for r in &report.residuals {
            assert!(
                (r + source).abs() < 1e-11 * (1.0 + source),
                "{r} vs {}",
                -source
            );
        }
        assert!(report.passed());
    }

    #[test]
    fn trace_layout() {
        let p = gen_random_split(4, 3, 3, 10.0).unwrap();
        let t = run_scheme(
            &p,
            SchemeParams::new(SchemeKind::VectorAdditive, 0.1, 0.25, 1.5).unwrap(),
            10,
        )
        .unwrap();
        assert_eq!(t.states.len(), 11);
        assert_eq!(t.forcings.len(), 10);
        assert_eq!(t.energies.len(), 10);
        assert_eq!(t.bound_residuals.len(), 9);
        assert!((t.times[10] - 1.0).abs() < 1e-12);
        let s = run_scheme(
            &p,
            SchemeParams::new(SchemeKind::TwoLevel, 0.1, 1.0, 0.0).unwrap(),
            10,
        )
        .unwrap();
        assert_eq!(s.energies.len(), 11);
        assert_eq!(s.bound_residuals.len(), 10);
        assert!(check_bound_22(&p, &s).is_err());
        assert!(check_bound_16(&p, &t).is_err());
    }

    #[test]
    fn explicit_scalar_decay_has_unit_energy_step() {
        let p = SplitProblem::new(
            SymMatrix::identity(1),
            vec![SymMatrix::identity(1)],
            Forcing::Zero,
            StateVector::new(vec![1.0]),
            1.0,
        )
        .unwrap();
        // σ = 1, τ = 1: y halves every step, ‖y‖² quarters
        let t = run_scheme(
            &p,
            SchemeParams::new(SchemeKind::TwoLevel, 1.0, 1.0, 0.0).unwrap(),
            3,
        )
        .unwrap();
        assert_eq!(t.energies, vec![1.0, 0.25, 0.0625, 0.015625]);
    }
}
