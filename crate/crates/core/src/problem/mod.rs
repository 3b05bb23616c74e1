//! The split evolution problem `B du/dt + A u = f`, `B = Σ B_α`, its vector
//! space `H^p` and the block operators built from it.

mod blocks;
mod forcing;
mod generate;
pub mod manifest;

pub use blocks::{
    apply_block_c, apply_block_d, apply_block_g, apply_block_r, assemble_block_dense,
    assemble_block_dense_capped, BlockOperator, DEFAULT_ASSEMBLY_CAP,
};
pub use forcing::{CustomForcing, Forcing, Manufactured, ScalarTrig, TrigForcing, TrigTerm};
pub use generate::{
    gen_pseudo_parabolic_2d, gen_random_split, random_spd, second_difference,
    PSEUDO_PARABOLIC_PROFILE,
};

use crate::error::{Error, Result};
use crate::linalg::{
    spd_check, Cholesky, SpdReport, StateVector, SymMatrix, DEFINITENESS_TOLERANCE,
};

/// Problem instance `(A, [B_1..B_p], f, u0, T)`.
///
/// Construction checks structure only (dimensions, `p ≥ 1`, `T > 0`).
/// Definiteness is reported by [`validate_problem`]; operations that need
/// `A⁻¹` or `B⁻¹` fail with [`Error::NotPositiveDefinite`] when it is absent.
#[derive(Debug, Clone)]
pub struct SplitProblem {
    a: SymMatrix,
    parts: Vec<SymMatrix>,
    b: SymMatrix,
    forcing: Forcing,
    u0: StateVector,
    horizon: f64,
    a_factor: Option<Cholesky>,
    b_factor: Option<Cholesky>,
}

impl SplitProblem {
    pub fn new(
        a: SymMatrix,
        parts: Vec<SymMatrix>,
        forcing: Forcing,
        u0: StateVector,
        horizon: f64,
    ) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidParameter(
                "at least one part B_1 is required".into(),
            ));
        }
        if !(horizon > 0.0 && horizon.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "horizon must be positive, got {horizon}"
            )));
        }
        let m = a.dim();
        for (k, b) in parts.iter().enumerate() {
            if b.dim() != m {
                return Err(Error::DimensionMismatch {
                    expected: m,
                    found: b.dim(),
                }
                .in_part(format!("B_{}", k + 1)));
            }
        }
        u0.expect_dim(m).map_err(|e| e.in_part("u0"))?;
        if !u0.is_finite() {
            return Err(Error::InvalidParameter("u0 has non-finite entries".into()));
        }
        forcing.check_dim(m).map_err(|e| e.in_part("forcing"))?;
        let b = SymMatrix::sum(&parts)?;
        let a_factor = a.cholesky().ok();
        let b_factor = b.cholesky().ok();
        Ok(SplitProblem {
            a,
            parts,
            b,
            forcing,
            u0,
            horizon,
            a_factor,
            b_factor,
        })
    }

    pub fn a(&self) -> &SymMatrix {
        &self.a
    }

    pub fn parts(&self) -> &[SymMatrix] {
        &self.parts
    }

    /// The assembled `B = Σ B_α`.
    pub fn b(&self) -> &SymMatrix {
        &self.b
    }

    pub fn p(&self) -> usize {
        self.parts.len()
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }

    pub fn forcing(&self) -> &Forcing {
        &self.forcing
    }

    pub fn u0(&self) -> &StateVector {
        &self.u0
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn with_forcing(&self, forcing: Forcing) -> Result<SplitProblem> {
        forcing.check_dim(self.dim())?;
        Ok(SplitProblem {
            forcing,
            ..self.clone()
        })
    }

    pub fn with_u0(&self, u0: StateVector) -> Result<SplitProblem> {
        u0.expect_dim(self.dim())?;
        Ok(SplitProblem { u0, ..self.clone() })
    }

    pub fn with_horizon(&self, horizon: f64) -> Result<SplitProblem> {
        if !(horizon > 0.0 && horizon.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "horizon must be positive, got {horizon}"
            )));
        }
        Ok(SplitProblem {
            horizon,
            ..self.clone()
        })
    }

    /// Same problem with the parts reordered: new part `k` is old part `order[k]`.
    pub fn permuted(&self, order: &[usize]) -> Result<SplitProblem> {
        check_permutation(order, self.p())?;
        let parts = order.iter().map(|&k| self.parts[k].clone()).collect();
        SplitProblem::new(
            self.a.clone(),
            parts,
            self.forcing.clone(),
            self.u0.clone(),
            self.horizon,
        )
    }

    pub fn forcing_at(&self, t: f64) -> StateVector {
        self.forcing.eval(t, self.dim())
    }

    pub fn a_factor(&self) -> Result<&Cholesky> {
        self.a_factor
            .as_ref()
            .ok_or_else(|| not_pd(&self.a).in_part("A"))
    }

    pub fn b_factor(&self) -> Result<&Cholesky> {
        self.b_factor
            .as_ref()
            .ok_or_else(|| not_pd(&self.b).in_part("B"))
    }

    /// `A⁻¹ x` through the cached factor.
    pub fn solve_a(&self, x: &StateVector) -> Result<StateVector> {
        x.expect_dim(self.dim())?;
        self.a_factor()?.solve(x)
    }

    /// `(A⁻¹ x, x)`
    pub fn a_inv_norm_sq(&self, x: &StateVector) -> Result<f64> {
        Ok(self.solve_a(x)?.dot(x))
    }

    /// `‖x‖²_B = (B x, x)`
    pub fn b_norm_sq(&self, x: &StateVector) -> Result<f64> {
        x.expect_dim(self.dim())?;
        Ok(self.b.apply(x)?.dot(x))
    }

    /// `Σ_α B_α x`
    pub fn apply_b(&self, x: &StateVector) -> Result<StateVector> {
        x.expect_dim(self.dim())?;
        let mut out = StateVector::zeros(self.dim());
        for part in &self.parts {
            out.axpy(1.0, &part.apply(x)?);
        }
        Ok(out)
    }

    /// `Σ_β B_β u_β`
    pub fn weighted_sum(&self, u: &BlockState) -> Result<StateVector> {
        self.check_block(u)?;
        let mut out = StateVector::zeros(self.dim());
        for (part, comp) in self.parts.iter().zip(u.components()) {
            out.axpy(1.0, &part.apply(comp)?);
        }
        Ok(out)
    }

    pub(crate) fn check_block(&self, u: &BlockState) -> Result<()> {
        if u.p() != self.p() {
            return Err(Error::DimensionMismatch {
                expected: self.p(),
                found: u.p(),
            });
        }
        if u.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: u.dim(),
            });
        }
        Ok(())
    }
}

fn not_pd(m: &SymMatrix) -> Error {
    let r = spd_check(m, DEFINITENESS_TOLERANCE);
    Error::NotPositiveDefinite {
        row: 0,
        pivot: r.min_pivot,
    }
}

pub(crate) fn check_permutation(order: &[usize], p: usize) -> Result<()> {
    let mut seen = vec![false; p];
    if order.len() != p {
        return Err(Error::InvalidParameter(format!(
            "permutation of length {} for p = {p}",
            order.len()
        )));
    }
    for &k in order {
        if k >= p || seen[k] {
            return Err(Error::InvalidParameter(format!(
                "{order:?} is not a permutation of 0..{p}"
            )));
        }
        seen[k] = true;
    }
    Ok(())
}

/// Element `(u_1, …, u_p)` of `H^p` with scalar product `Σ (u_α, v_α)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockState {
    components: Vec<StateVector>,
}

impl BlockState {
    pub fn new(components: Vec<StateVector>) -> Result<Self> {
        let first = components.first().ok_or_else(|| {
            Error::InvalidParameter("block state needs at least one component".into())
        })?;
        let m = first.dim();
        for c in &components {
            c.expect_dim(m)?;
        }
        Ok(BlockState { components })
    }

    /// Every component equal to `u`.
    pub fn replicate(u: &StateVector, p: usize) -> Self {
        BlockState {
            components: vec![u.clone(); p.max(1)],
        }
    }

    pub fn zeros(p: usize, m: usize) -> Self {
        Self::replicate(&StateVector::zeros(m), p)
    }

    pub fn from_flat(p: usize, m: usize, flat: &[f64]) -> Result<Self> {
        if flat.len() != p * m {
            return Err(Error::DimensionMismatch {
                expected: p * m,
                found: flat.len(),
            });
        }
        Self::new(flat.chunks(m).map(StateVector::from).collect())
    }

    pub fn flatten(&self) -> Vec<f64> {
        self.components
            .iter()
            .flat_map(|c| c.iter().copied())
            .collect()
    }

    pub fn p(&self) -> usize {
        self.components.len()
    }

    pub fn dim(&self) -> usize {
        self.components[0].dim()
    }

    pub fn components(&self) -> &[StateVector] {
        &self.components
    }

    pub fn component(&self, alpha: usize) -> &StateVector {
        &self.components[alpha]
    }

    pub fn into_components(self) -> Vec<StateVector> {
        self.components
    }

    pub fn inner(&self, other: &BlockState) -> f64 {
        self.components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a.dot(b))
            .sum()
    }

    pub fn norm(&self) -> f64 {
        self.inner(self).sqrt()
    }

    pub fn lincomb(a: f64, x: &BlockState, b: f64, y: &BlockState) -> BlockState {
        BlockState {
            components: x
                .components
                .iter()
                .zip(&y.components)
                .map(|(u, v)| StateVector::lincomb(a, u, b, v))
                .collect(),
        }
    }

    pub fn sub(&self, other: &BlockState) -> BlockState {
        Self::lincomb(1.0, self, -1.0, other)
    }

    /// Component `k` of the result is component `order[k]` of `self`.
    pub fn permuted(&self, order: &[usize]) -> BlockState {
        BlockState {
            components: order.iter().map(|&k| self.components[k].clone()).collect(),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.components.iter().all(StateVector::is_finite)
    }
}

/// Verdict for one operator of the problem.
#[derive(Debug, Clone, PartialEq)]
pub struct PartVerdict {
    pub name: String,
    pub report: SpdReport,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub verdicts: Vec<PartVerdict>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.verdicts
            .iter()
            .all(|v| v.report.symmetric && v.report.positive_definite)
    }

    pub fn failures(&self) -> impl Iterator<Item = &PartVerdict> {
        self.verdicts
            .iter()
            .filter(|v| !(v.report.symmetric && v.report.positive_definite))
    }
}

/// Symmetry and definiteness of `A` and of every `B_α`.
pub fn validate_problem(problem: &SplitProblem) -> ValidationReport {
    let mut verdicts = vec![PartVerdict {
        name: "A".into(),
        report: spd_check(problem.a(), DEFINITENESS_TOLERANCE),
    }];
    for (k, part) in problem.parts().iter().enumerate() {
        verdicts.push(PartVerdict {
            name: format!("B_{}", k + 1),
            report: spd_check(part, DEFINITENESS_TOLERANCE),
        });
    }
    ValidationReport { verdicts }
}
