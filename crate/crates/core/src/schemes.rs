//! Time steppers: the two-level weighted scheme for `B y_t + A y^σ = φ`, the
//! three-level vector additive scheme with independent per-component solves
//! `(θ B_α + στ A) y_α^{n+1} = χ_α^n`, its sequential variant, the dense
//! monolithic oracle, and the stability predicates.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{min_eig_sym, Cholesky, DenseMatrix, StateVector, SymMatrix};
use crate::problem::{
    assemble_block_dense, check_permutation, BlockOperator, BlockState, SplitProblem,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SchemeKind {
    TwoLevel,
    VectorAdditive,
    VectorSequential,
}

impl SchemeKind {
    pub fn is_three_level(self) -> bool {
        !matches!(self, SchemeKind::TwoLevel)
    }
}

/// Step size and weights. `theta` is ignored by the two-level and sequential schemes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeParams {
    pub kind: SchemeKind,
    pub tau: f64,
    pub sigma: f64,
    pub theta: f64,
}

impl SchemeParams {
    pub fn new(kind: SchemeKind, tau: f64, sigma: f64, theta: f64) -> Result<Self> {
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "tau must be positive, got {tau}"
            )));
        }
        if !(sigma >= 0.0 && sigma.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "sigma must be finite and non-negative, got {sigma}"
            )));
        }
        if !(theta >= 0.0 && theta.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "theta must be finite and non-negative, got {theta}"
            )));
        }
        Ok(SchemeParams {
            kind,
            tau,
            sigma,
            theta,
        })
    }
}

/// The two most recent levels `(y^n, y^{n-1})` of a three-level scheme, at `t^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelPair {
    pub current: BlockState,
    pub previous: BlockState,
    pub t: f64,
}

impl LevelPair {
    pub fn new(current: BlockState, previous: BlockState, t: f64) -> Result<Self> {
        if current.p() != previous.p() || current.dim() != previous.dim() {
            return Err(Error::DimensionMismatch {
                expected: current.p() * current.dim(),
                found: previous.p() * previous.dim(),
            });
        }
        Ok(LevelPair {
            current,
            previous,
            t,
        })
    }

    /// Shifts in a new top level at `t + tau`.
    pub fn advance(self, next: BlockState, tau: f64) -> LevelPair {
        LevelPair {
            previous: self.current,
            current: next,
            t: self.t + tau,
        }
    }
}

/// `f(σ t^{n+1} + (1 − σ) t^n)`
pub fn forcing_sample(problem: &SplitProblem, sigma: f64, t_n: f64, tau: f64) -> StateVector {
    problem.forcing_at(t_n + sigma * tau)
}

/// Unconditional stability of the two-level scheme in `H_B`.
pub fn check_stability_two_level(sigma: f64) -> bool {
    sigma >= 0.5
}

/// Sufficient condition for `R ≥ 0` and stability of the vector additive scheme.
pub fn check_stability_vector(theta: f64, sigma: f64, p: usize) -> bool {
    sigma >= 0.25 && theta >= p as f64 / 2.0
}

fn factor_pencil(
    left: &SymMatrix,
    left_scale: f64,
    a: &SymMatrix,
    a_scale: f64,
) -> Result<Cholesky> {
    left.lincomb(left_scale, a, a_scale)?.cholesky()
}

/// Two-level scheme with the factor of `B + στA` cached.
#[derive(Debug, Clone)]
pub struct TwoLevelStepper<'a> {
    problem: &'a SplitProblem,
    sigma: f64,
    tau: f64,
    factor: Cholesky,
}

impl<'a> TwoLevelStepper<'a> {
    pub fn new(problem: &'a SplitProblem, sigma: f64, tau: f64) -> Result<Self> {
        SchemeParams::new(SchemeKind::TwoLevel, tau, sigma, 0.0)?;
        let factor = factor_pencil(problem.b(), 1.0, problem.a(), sigma * tau)?;
        Ok(TwoLevelStepper {
            problem,
            sigma,
            tau,
            factor,
        })
    }

    /// Forcing sample used for the step from `t_n`.
    pub fn forcing(&self, t_n: f64) -> StateVector {
        forcing_sample(self.problem, self.sigma, t_n, self.tau)
    }

    /// Solves `(B + στA) y^{n+1} = B y^n − τ(1 − σ) A y^n + τ φ^n`.
    pub fn step_with(&self, y: &StateVector, phi: &StateVector) -> Result<StateVector> {
        let p = self.problem;
        y.expect_dim(p.dim())?;
        phi.expect_dim(p.dim())?;
        let mut rhs = p.b().apply(y)?;
        rhs.axpy(-self.tau * (1.0 - self.sigma), &p.a().apply(y)?);
        rhs.axpy(self.tau, phi);
        self.factor.solve(&rhs)
    }

    pub fn step(&self, y: &StateVector, t_n: f64) -> Result<StateVector> {
        self.step_with(y, &self.forcing(t_n))
    }
}

pub fn step_two_level(
    problem: &SplitProblem,
    sigma: f64,
    tau: f64,
    y: &StateVector,
    t_n: f64,
) -> Result<StateVector> {
    TwoLevelStepper::new(problem, sigma, tau)?.step(y, t_n)
}

/// Relative residual of the two-level scheme for a computed step.
pub fn two_level_residual(
    problem: &SplitProblem,
    sigma: f64,
    tau: f64,
    y: &StateVector,
    next: &StateVector,
    phi: &StateVector,
) -> Result<f64> {
    let b_diff = problem.b().apply(&next.sub(y))?;
    let a_weighted = problem
        .a()
        .apply(&StateVector::lincomb(sigma, next, 1.0 - sigma, y))?
        .scaled(tau);
    let tau_phi = phi.scaled(tau);
    let r = b_diff.add(&a_weighted).sub(&tau_phi);
    Ok(r.norm() / (b_diff.norm() + a_weighted.norm() + tau_phi.norm()).max(f64::MIN_POSITIVE))
}

/// First two levels: `Y_0` replicates `u0`, `Y_1` replicates one σ = ½
/// two-level step with the full `B`.
pub fn bootstrap_first_level(problem: &SplitProblem, tau: f64) -> Result<LevelPair> {
    let p = problem.p();
    let y1 = step_two_level(problem, 0.5, tau, problem.u0(), 0.0)?;
    LevelPair::new(
        BlockState::replicate(&y1, p),
        BlockState::replicate(problem.u0(), p),
        tau,
    )
}

fn check_levels(problem: &SplitProblem, levels: &LevelPair, phi: &StateVector) -> Result<()> {
    problem.check_block(&levels.current)?;
    problem.check_block(&levels.previous)?;
    phi.expect_dim(problem.dim())
}

/// `χ_α^n = τφ + θB_α y_α^n − (1−θ)B_α(y_α^n − y_α^{n−1})
///          − Σ_{β≠α} B_β(y_β^n − y_β^{n−1}) − τA((1−2σ)y_α^n + σy_α^{n−1})`
pub fn rhs_component(
    problem: &SplitProblem,
    theta: f64,
    sigma: f64,
    tau: f64,
    alpha: usize,
    levels: &LevelPair,
    phi: &StateVector,
) -> Result<StateVector> {
    check_levels(problem, levels, phi)?;
    if alpha >= problem.p() {
        return Err(Error::InvalidParameter(format!(
            "component {alpha} out of range"
        )));
    }
    let mut others = StateVector::zeros(problem.dim());
    for (beta, b) in problem.parts().iter().enumerate() {
        if beta != alpha {
            let d = levels
                .current
                .component(beta)
                .sub(levels.previous.component(beta));
            others.axpy(1.0, &b.apply(&d)?);
        }
    }
    rhs_from_others(problem, theta, sigma, tau, alpha, levels, phi, &others)
}

#[allow(clippy::too_many_arguments)]
fn rhs_from_others(
    problem: &SplitProblem,
    theta: f64,
    sigma: f64,
    tau: f64,
    alpha: usize,
    levels: &LevelPair,
    phi: &StateVector,
    others: &StateVector,
) -> Result<StateVector> {
    let b = &problem.parts()[alpha];
    let yn = levels.current.component(alpha);
    let ynm1 = levels.previous.component(alpha);
    let mut chi = phi.scaled(tau);
    chi.axpy(theta, &b.apply(yn)?);
    chi.axpy(-(1.0 - theta), &b.apply(&yn.sub(ynm1))?);
    chi.axpy(-1.0, others);
    let weighted = StateVector::lincomb(1.0 - 2.0 * sigma, yn, sigma, ynm1);
    chi.axpy(-tau, &problem.a().apply(&weighted)?);
    Ok(chi)
}

/// Common interface of the three-level steppers.
pub trait VectorStepper {
    fn problem(&self) -> &SplitProblem;
    fn tau(&self) -> f64;
    /// `y^{n+1}` from `(y^n, y^{n−1})` and the forcing sample `φ^n`.
    fn step(&self, levels: &LevelPair, phi: &StateVector) -> Result<BlockState>;
}

/// Vector additive scheme with cached factors of `θB_α + στA`.
#[derive(Debug, Clone)]
pub struct VectorAdditiveStepper<'a> {
    problem: &'a SplitProblem,
    theta: f64,
    sigma: f64,
    tau: f64,
    factors: Vec<Cholesky>,
}

impl<'a> VectorAdditiveStepper<'a> {
    pub fn new(problem: &'a SplitProblem, theta: f64, sigma: f64, tau: f64) -> Result<Self> {
        SchemeParams::new(SchemeKind::VectorAdditive, tau, sigma, theta)?;
        let factors = problem
            .parts()
            .iter()
            .enumerate()
            .map(|(k, b)| {
                factor_pencil(b, theta, problem.a(), sigma * tau)
                    .map_err(|e| e.in_part(format!("theta*B_{} + sigma*tau*A", k + 1)))
            })
            .collect::<Result<_>>()?;
        Ok(VectorAdditiveStepper {
            problem,
            theta,
            sigma,
            tau,
            factors,
        })
    }

    fn others_sum(&self, levels: &LevelPair) -> Result<(StateVector, Vec<StateVector>)> {
        // Σ_β B_β(y_β^n − y_β^{n−1}) and the individual terms
        let p = self.problem;
        let mut total = StateVector::zeros(p.dim());
        let mut terms = Vec::with_capacity(p.p());
        for (beta, b) in p.parts().iter().enumerate() {
            let d = levels
                .current
                .component(beta)
                .sub(levels.previous.component(beta));
            let bd = b.apply(&d)?;
            total.axpy(1.0, &bd);
            terms.push(bd);
        }
        Ok((total, terms))
    }

    fn solve_component(
        &self,
        alpha: usize,
        levels: &LevelPair,
        phi: &StateVector,
        total: &StateVector,
        terms: &[StateVector],
    ) -> Result<StateVector> {
        let others = total.sub(&terms[alpha]);
        let chi = rhs_from_others(
            self.problem,
            self.theta,
            self.sigma,
            self.tau,
            alpha,
            levels,
            phi,
            &others,
        )?;
        self.factors[alpha].solve(&chi)
    }

    /// Evaluates the components in the given order; the result does not
    /// depend on it.
    pub fn step_in_order(
        &self,
        levels: &LevelPair,
        phi: &StateVector,
        order: &[usize],
    ) -> Result<BlockState> {
        check_levels(self.problem, levels, phi)?;
        check_permutation(order, self.problem.p())?;
        let (total, terms) = self.others_sum(levels)?;
        let mut out: Vec<Option<StateVector>> = vec![None; self.problem.p()];
        for &alpha in order {
            out[alpha] = Some(self.solve_component(alpha, levels, phi, &total, &terms)?);
        }
        BlockState::new(
            out.into_iter()
                .map(|c| c.expect("every component solved"))
                .collect(),
        )
    }

    /// Component solves distributed over the rayon pool.
    pub fn step_parallel(&self, levels: &LevelPair, phi: &StateVector) -> Result<BlockState> {
        check_levels(self.problem, levels, phi)?;
        let (total, terms) = self.others_sum(levels)?;
        let comps = (0..self.problem.p())
            .into_par_iter()
            .map(|alpha| self.solve_component(alpha, levels, phi, &total, &terms))
            .collect::<Result<Vec<_>>>()?;
        BlockState::new(comps)
    }
}

impl VectorStepper for VectorAdditiveStepper<'_> {
    fn problem(&self) -> &SplitProblem {
        self.problem
    }

    fn tau(&self) -> f64 {
        self.tau
    }

    fn step(&self, levels: &LevelPair, phi: &StateVector) -> Result<BlockState> {
        let order: Vec<usize> = (0..self.problem.p()).collect();
        self.step_in_order(levels, phi, &order)
    }
}

pub fn step_vector_additive(
    problem: &SplitProblem,
    theta: f64,
    sigma: f64,
    tau: f64,
    levels: &LevelPair,
    phi: &StateVector,
) -> Result<BlockState> {
    VectorAdditiveStepper::new(problem, theta, sigma, tau)?.step(levels, phi)
}

/// Per-component relative residuals of the vector additive scheme (scaled by τ).
pub fn vector_additive_residuals(
    problem: &SplitProblem,
    theta: f64,
    sigma: f64,
    tau: f64,
    levels: &LevelPair,
    next: &BlockState,
    phi: &StateVector,
) -> Result<Vec<f64>> {
    check_levels(problem, levels, phi)?;
    problem.check_block(next)?;
    let (yn, ynm1) = (&levels.current, &levels.previous);
    (0..problem.p())
        .map(|alpha| {
            let b = &problem.parts()[alpha];
            let mut terms = vec![
                b.apply(&next.component(alpha).sub(yn.component(alpha)))?
                    .scaled(theta),
                b.apply(&yn.component(alpha).sub(ynm1.component(alpha)))?
                    .scaled(1.0 - theta),
            ];
            for (beta, bb) in problem.parts().iter().enumerate() {
                if beta != alpha {
                    terms.push(bb.apply(&yn.component(beta).sub(ynm1.component(beta)))?);
                }
            }
            let weighted = StateVector::lincomb(
                sigma,
                next.component(alpha),
                1.0,
                &StateVector::lincomb(
                    1.0 - 2.0 * sigma,
                    yn.component(alpha),
                    sigma,
                    ynm1.component(alpha),
                ),
            );
            terms.push(problem.a().apply(&weighted)?.scaled(tau));
            terms.push(phi.scaled(-tau));
            Ok(relative_sum(&terms))
        })
        .collect()
}

fn relative_sum(terms: &[StateVector]) -> f64 {
    let mut r = StateVector::zeros(terms[0].dim());
    let mut scale = 0.0;
    for t in terms {
        r.axpy(1.0, t);
        scale += t.norm();
    }
    r.norm() / scale.max(f64::MIN_POSITIVE)
}

/// Solves the vector form
/// `θG(y^{n+1} − 2y^n + y^{n−1})/τ + C(y^n − y^{n−1})/τ + D(σy^{n+1} + (1−2σ)y^n + σy^{n−1}) = g^n`,
/// `g_α^n = B_α A⁻¹ φ^n`, as one dense `(p·m)`-dimensional system.
pub fn step_monolithic_oracle(
    problem: &SplitProblem,
    theta: f64,
    sigma: f64,
    tau: f64,
    levels: &LevelPair,
    phi: &StateVector,
) -> Result<BlockState> {
    SchemeParams::new(SchemeKind::VectorAdditive, tau, sigma, theta)?;
    check_levels(problem, levels, phi)?;
    let (p, m) = (problem.p(), problem.dim());
    let c = assemble_block_dense(problem, BlockOperator::C)?;
    let d = assemble_block_dense(problem, BlockOperator::D)?;
    let g = assemble_block_dense(problem, BlockOperator::G)?;

    let yn = levels.current.flatten();
    let ynm1 = levels.previous.flatten();
    let a_inv_phi = problem.solve_a(phi)?;
    let mut rhs = Vec::with_capacity(p * m);
    for b in problem.parts() {
        rhs.extend(b.apply(&a_inv_phi)?.iter().copied());
    }
    let combo = |a: f64, x: &[f64], b: f64, y: &[f64]| -> Vec<f64> {
        x.iter().zip(y).map(|(u, v)| a * u + b * v).collect()
    };
    let g_term = g.apply(&StateVector::new(combo(2.0, &yn, -1.0, &ynm1)))?;
    let c_term = c.apply(&StateVector::new(combo(1.0, &yn, -1.0, &ynm1)))?;
    let d_term = d.apply(&StateVector::new(combo(
        1.0 - 2.0 * sigma,
        &yn,
        sigma,
        &ynm1,
    )))?;
    for i in 0..p * m {
        rhs[i] += theta / tau * g_term[i] - c_term[i] / tau - d_term[i];
    }
    let system: DenseMatrix = g.as_dense().lincomb(theta / tau, d.as_dense(), sigma)?;
    let flat = system.lu_solve(&rhs)?;
    BlockState::from_flat(p, m, &flat)
}

/// Sequential variant: components in order `α = 1..p`, each using the
/// already updated `y_β^{n+1}` for `β < α`:
/// `Σ_{β≤α} B_β(y_β^{n+1} − y_β^n)/τ + Σ_{β>α} B_β(y_β^n − y_β^{n−1})/τ
///  + A(σy_α^{n+1} + (1−2σ)y_α^n + σy_α^{n−1}) = φ^n`.
#[derive(Debug, Clone)]
pub struct SequentialStepper<'a> {
    problem: &'a SplitProblem,
    sigma: f64,
    tau: f64,
    factors: Vec<Cholesky>,
}

impl<'a> SequentialStepper<'a> {
    pub fn new(problem: &'a SplitProblem, sigma: f64, tau: f64) -> Result<Self> {
        SchemeParams::new(SchemeKind::VectorSequential, tau, sigma, 1.0)?;
        let factors = problem
            .parts()
            .iter()
            .enumerate()
            .map(|(k, b)| {
                factor_pencil(b, 1.0, problem.a(), sigma * tau)
                    .map_err(|e| e.in_part(format!("B_{} + sigma*tau*A", k + 1)))
            })
            .collect::<Result<_>>()?;
        Ok(SequentialStepper {
            problem,
            sigma,
            tau,
            factors,
        })
    }
}

impl VectorStepper for SequentialStepper<'_> {
    fn problem(&self) -> &SplitProblem {
        self.problem
    }

    fn tau(&self) -> f64 {
        self.tau
    }

    fn step(&self, levels: &LevelPair, phi: &StateVector) -> Result<BlockState> {
        let pr = self.problem;
        check_levels(pr, levels, phi)?;
        let (yn, ynm1) = (&levels.current, &levels.previous);
        // lagged differences B_β(y_β^n − y_β^{n−1})
        let lagged = pr
            .parts()
            .iter()
            .enumerate()
            .map(|(beta, b)| b.apply(&yn.component(beta).sub(ynm1.component(beta))))
            .collect::<Result<Vec<_>>>()?;
        let mut upper = StateVector::zeros(pr.dim()); // Σ_{β<α} B_β(y_β^{n+1} − y_β^n)
        let mut out = Vec::with_capacity(pr.p());
        for alpha in 0..pr.p() {
            let b = &pr.parts()[alpha];
            let mut rhs = phi.scaled(self.tau);
            rhs.axpy(1.0, &b.apply(yn.component(alpha))?);
            rhs.axpy(-1.0, &upper);
            for l in &lagged[alpha + 1..] {
                rhs.axpy(-1.0, l);
            }
            let weighted = StateVector::lincomb(
                1.0 - 2.0 * self.sigma,
                yn.component(alpha),
                self.sigma,
                ynm1.component(alpha),
            );
            rhs.axpy(-self.tau, &pr.a().apply(&weighted)?);
            let y = self.factors[alpha].solve(&rhs)?;
            upper.axpy(1.0, &b.apply(&y.sub(yn.component(alpha)))?);
            out.push(y);
        }
        BlockState::new(out)
    }
}

pub fn step_vector_sequential(
    problem: &SplitProblem,
    sigma: f64,
    tau: f64,
    levels: &LevelPair,
    phi: &StateVector,
) -> Result<BlockState> {
    SequentialStepper::new(problem, sigma, tau)?.step(levels, phi)
}

/// Per-component relative residuals of the sequential scheme (scaled by τ).
pub fn sequential_residuals(
    problem: &SplitProblem,
    sigma: f64,
    tau: f64,
    levels: &LevelPair,
    next: &BlockState,
    phi: &StateVector,
) -> Result<Vec<f64>> {
    check_levels(problem, levels, phi)?;
    problem.check_block(next)?;
    let (yn, ynm1) = (&levels.current, &levels.previous);
    (0..problem.p())
        .map(|alpha| {
            let mut terms = Vec::new();
            for (beta, b) in problem.parts().iter().enumerate() {
                let d = if beta <= alpha {
                    next.component(beta).sub(yn.component(beta))
                } else {
                    yn.component(beta).sub(ynm1.component(beta))
                };
                terms.push(b.apply(&d)?);
            }
            let weighted = StateVector::lincomb(
                sigma,
                next.component(alpha),
                1.0,
                &StateVector::lincomb(
                    1.0 - 2.0 * sigma,
                    yn.component(alpha),
                    sigma,
                    ynm1.component(alpha),
                ),
            );
            terms.push(problem.a().apply(&weighted)?.scaled(tau));
            terms.push(phi.scaled(-tau));
            Ok(relative_sum(&terms))
        })
        .collect()
}

/// Smallest eigenvalue of an assembled operator and the verdict against
/// `−tol · ‖·‖`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenCheck {
    pub min_eig: f64,
    pub norm: f64,
    pub passed: bool,
}

/// Relative tolerance for the eigenvalue verifiers.
pub const EIGEN_TOLERANCE: f64 = 1e-10;

/// `R = θG − ½C + τ(σ − ¼)D ≥ 0`
pub fn check_r_nonneg(
    problem: &SplitProblem,
    theta: f64,
    sigma: f64,
    tau: f64,
) -> Result<EigenCheck> {
    let r = assemble_block_dense(problem, BlockOperator::R { theta, sigma, tau })?;
    let min_eig = min_eig_sym(&r);
    let norm = r.norm();
    Ok(EigenCheck {
        min_eig,
        norm,
        passed: min_eig >= -EIGEN_TOLERANCE * norm,
    })
}

/// `C ≤ pG`, i.e. `pG − C ≥ 0`; `norm` is `‖G‖`.
pub fn check_c_le_pg(problem: &SplitProblem) -> Result<EigenCheck> {
    let c = assemble_block_dense(problem, BlockOperator::C)?;
    let g = assemble_block_dense(problem, BlockOperator::G)?;
    let diff = g.lincomb(problem.p() as f64, &c, -1.0)?;
    let min_eig = min_eig_sym(&diff);
    let norm = g.norm();
    Ok(EigenCheck {
        min_eig,
        norm,
        passed: min_eig >= -EIGEN_TOLERANCE * norm,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{gen_random_split, Forcing};

    fn scalar_problem(p: usize, forcing: Forcing, u0: f64) -> SplitProblem {
        SplitProblem::new(
            SymMatrix::identity(1),
            vec![SymMatrix::identity(1); p],
            forcing,
            StateVector::new(vec![u0]),
            1.0,
        )
        .unwrap()
    }

    fn ones_levels(p: usize) -> LevelPair {
        let one = StateVector::new(vec![1.0]);
        LevelPair::new(
            BlockState::replicate(&one, p),
            BlockState::replicate(&one, p),
            1.0,
        )
        .unwrap()
    }

    #[test]
    fn forcing_sample_points() {
        let p = scalar_problem(1, Forcing::custom(|t| StateVector::new(vec![t])), 0.0);
        assert_eq!(forcing_sample(&p, 0.0, 0.3, 0.1)[0], 0.3);
        assert!((forcing_sample(&p, 1.0, 0.3, 0.1)[0] - 0.4).abs() < 1e-15);
        assert_eq!(forcing_sample(&p, 0.5, 0.0, 1.0)[0], 0.5);
        let c = scalar_problem(1, Forcing::constant(StateVector::new(vec![2.5])), 0.0);
        for s in [0.0, 0.3, 1.0] {
            assert_eq!(forcing_sample(&c, s, 0.7, 0.2)[0], 2.5);
        }
    }

    #[test]
    fn scalar_two_level_steps() {
        let p = scalar_problem(1, Forcing::Zero, 1.0);
        let one = StateVector::new(vec![1.0]);
        assert_eq!(step_two_level(&p, 1.0, 1.0, &one, 0.0).unwrap()[0], 0.5);
        assert_eq!(step_two_level(&p, 0.0, 1.0, &one, 0.0).unwrap()[0], 0.0);
        assert!(step_two_level(&p, -0.1, 1.0, &one, 0.0).is_err());
    }

    #[test]
    fn stability_predicates() {
        assert!(check_stability_two_level(0.5));
        assert!(!check_stability_two_level(0.49));
        assert!(check_stability_two_level(1.0));
        assert!(check_stability_vector(1.0, 0.25, 2));
        assert!(!check_stability_vector(0.9, 0.5, 2));
        assert!(check_stability_vector(0.5, 0.25, 1));
        assert!(!check_stability_vector(2.0, 0.2, 2));
    }

    #[test]
    fn bootstrap_is_crank_nicolson_replicated() {
        let p = scalar_problem(1, Forcing::Zero, 1.0);
        let lv = bootstrap_first_level(&p, 1.0).unwrap();
        assert!((lv.current.component(0)[0] - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(lv.previous.component(0)[0], 1.0);

        // three parts summing to B = 3: (3 - ½)/(3 + ½)
        let p3 = scalar_problem(3, Forcing::Zero, 1.0);
        let lv3 = bootstrap_first_level(&p3, 1.0).unwrap();
        assert_eq!(lv3.current.p(), 3);
        for c in lv3.current.components() {
            assert_eq!(c, lv3.current.component(0));
            assert!((c[0] - 5.0 / 7.0).abs() < 1e-15);
        }
        let z = scalar_problem(2, Forcing::Zero, 0.0);
        let lz = bootstrap_first_level(&z, 0.5).unwrap();
        assert_eq!(lz.current, BlockState::zeros(2, 1));
    }

    #[test]
    fn rhs_component_examples() {
        let p = scalar_problem(2, Forcing::Zero, 1.0);
        let zero = StateVector::zeros(1);
        let chi = rhs_component(&p, 1.0, 0.5, 1.0, 0, &ones_levels(2), &zero).unwrap();
        assert!((chi[0] - 0.5).abs() < 1e-15);

        // equal levels, σ = 0: θB_α y − τA y
        let r = gen_random_split(2, 4, 2, 10.0).unwrap();
        let y = BlockState::replicate(r.u0(), 2);
        let lv = LevelPair::new(y.clone(), y, 0.0).unwrap();
        let chi = rhs_component(&r, 0.7, 0.0, 0.2, 1, &lv, &StateVector::zeros(4)).unwrap();
        let expect = StateVector::lincomb(
            0.7,
            &r.parts()[1].apply(r.u0()).unwrap(),
            -0.2,
            &r.a().apply(r.u0()).unwrap(),
        );
        assert!(chi.sub(&expect).norm() < 1e-13);
    }

    #[test]
    fn additive_units_example() {
        let p = scalar_problem(2, Forcing::Zero, 1.0);
        let next = step_vector_additive(&p, 1.0, 0.5, 1.0, &ones_levels(2), &StateVector::zeros(1))
            .unwrap();
        for c in next.components() {
            assert!((c[0] - 1.0 / 3.0).abs() < 1e-15);
        }
        let oracle =
            step_monolithic_oracle(&p, 1.0, 0.5, 1.0, &ones_levels(2), &StateVector::zeros(1))
                .unwrap();
        assert!(next.sub(&oracle).norm() < 1e-14);
    }

    #[test]
    fn sequential_units_example() {
        let p = scalar_problem(2, Forcing::Zero, 1.0);
        let next =
            step_vector_sequential(&p, 0.5, 1.0, &ones_levels(2), &StateVector::zeros(1)).unwrap();
        assert!((next.component(0)[0] - 1.0 / 3.0).abs() < 1e-15);
        assert!((next.component(1)[0] - 7.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn stationary_state_is_fixed_point() {
        // φ = A y makes a constant y with equal components a solution
        let r = gen_random_split(6, 5, 3, 10.0).unwrap();
        let y = r.u0().clone();
        let phi = r.a().apply(&y).unwrap();
        let lv = LevelPair::new(
            BlockState::replicate(&y, 3),
            BlockState::replicate(&y, 3),
            0.0,
        )
        .unwrap();
        let next = step_vector_additive(&r, 1.5, 0.25, 0.1, &lv, &phi).unwrap();
        assert!(next.sub(&lv.current).norm() < 1e-12 * y.norm());
        let seq = step_vector_sequential(&r, 0.25, 0.1, &lv, &phi).unwrap();
        assert!(seq.sub(&lv.current).norm() < 1e-12 * y.norm());
    }

    #[test]
    fn indefinite_component_matrix_is_rejected() {
        let r = gen_random_split(6, 3, 2, 10.0).unwrap();
        // θ = 0 and σ = 0 leave the zero matrix
        let e = VectorAdditiveStepper::new(&r, 0.0, 0.0, 0.1).unwrap_err();
        assert!(matches!(e.root(), Error::NotPositiveDefinite { .. }));
        assert!(VectorAdditiveStepper::new(&r, -1.0, 0.5, 0.1).is_err());
    }

    #[test]
    fn r_check_single_part_boundary() {
        let r = gen_random_split(12, 6, 1, 10.0).unwrap();
        let chk = check_r_nonneg(&r, 0.5, 0.25, 0.1).unwrap();
        assert!(chk.min_eig.abs() <= 1e-10 * chk.norm.max(1.0), "{chk:?}");
        assert!(chk.passed);
    }

    #[test]
    fn r_check_negative_when_theta_zero() {
        let r = gen_random_split(13, 5, 2, 10.0).unwrap();
        let chk = check_r_nonneg(&r, 0.0, 0.25, 0.1).unwrap();
        assert!(chk.min_eig < 0.0);
        assert!(!chk.passed);
    }
}
