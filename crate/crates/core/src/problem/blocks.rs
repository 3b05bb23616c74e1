//! Block operators on `H^p`:
//!
//! * `C_{αβ} = B_α A⁻¹ B_β`
//! * `D_{αβ} = B_α δ_{αβ}`
//! * `G_{αβ} = B_α A⁻¹ B_α δ_{αβ}`
//! * `R = θ G − ½ C + τ(σ − ¼) D`
//!
//! `A⁻¹` is applied through the problem's cached factor and never formed.

use crate::error::{Error, Result};
use crate::linalg::{DenseMatrix, StateVector, SymMatrix};
use crate::problem::{BlockState, SplitProblem};

/// Largest `p·m` that [`assemble_block_dense`] accepts.
pub const DEFAULT_ASSEMBLY_CAP: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BlockOperator {
    C,
    D,
    G,
    R { theta: f64, sigma: f64, tau: f64 },
}

pub fn apply_block_c(problem: &SplitProblem, u: &BlockState) -> Result<BlockState> {
    let s = problem.weighted_sum(u)?;
    let z = problem.solve_a(&s)?;
    let out = problem
        .parts()
        .iter()
        .map(|b| b.apply(&z))
        .collect::<Result<Vec<_>>>()?;
    BlockState::new(out)
}

pub fn apply_block_d(problem: &SplitProblem, u: &BlockState) -> Result<BlockState> {
    problem.check_block(u)?;
    let out = problem
        .parts()
        .iter()
        .zip(u.components())
        .map(|(b, c)| b.apply(c))
        .collect::<Result<Vec<_>>>()?;
    BlockState::new(out)
}

pub fn apply_block_g(problem: &SplitProblem, u: &BlockState) -> Result<BlockState> {
    problem.check_block(u)?;
    let out = problem
        .parts()
        .iter()
        .zip(u.components())
        .map(|(b, c)| b.apply(&problem.solve_a(&b.apply(c)?)?))
        .collect::<Result<Vec<_>>>()?;
    BlockState::new(out)
}

pub fn apply_block_r(
    problem: &SplitProblem,
    theta: f64,
    sigma: f64,
    tau: f64,
    u: &BlockState,
) -> Result<BlockState> {
    if !(tau > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "tau must be positive, got {tau}"
        )));
    }
    let g = apply_block_g(problem, u)?;
    let c = apply_block_c(problem, u)?;
    let d = apply_block_d(problem, u)?;
    let gc = BlockState::lincomb(theta, &g, -0.5, &c);
    Ok(BlockState::lincomb(1.0, &gc, tau * (sigma - 0.25), &d))
}

pub fn assemble_block_dense(problem: &SplitProblem, which: BlockOperator) -> Result<SymMatrix> {
    assemble_block_dense_capped(problem, which, DEFAULT_ASSEMBLY_CAP)
}

/// Dense symmetric `(p·m) × (p·m)` matrix of a block operator, acting on
/// flattened [`BlockState`]s.
pub fn assemble_block_dense_capped(
    problem: &SplitProblem,
    which: BlockOperator,
    cap: usize,
) -> Result<SymMatrix> {
    let p = problem.p();
    let m = problem.dim();
    let size = p * m;
    if size > cap {
        return Err(Error::CapExceeded { size, cap });
    }
    let mut out = DenseMatrix::zeros(size, size);
    let mut put = |alpha: usize, beta: usize, block: &DenseMatrix, scale: f64| {
        for i in 0..m {
            for j in 0..m {
                out[(alpha * m + i, beta * m + j)] += scale * block[(i, j)];
            }
        }
    };

    let needs_inverse = !matches!(which, BlockOperator::D);
    // A⁻¹ B_β, column by column
    let a_inv_b: Vec<DenseMatrix> = if needs_inverse {
        let factor = problem.a_factor()?;
        problem
            .parts()
            .iter()
            .map(|b| {
                let mut cols = DenseMatrix::zeros(m, m);
                for j in 0..m {
                    let col = StateVector::from_fn(m, |i| b.get(i, j));
                    let x = factor.solve(&col)?;
                    for i in 0..m {
                        cols[(i, j)] = x[i];
                    }
                }
                Ok(cols)
            })
            .collect::<Result<_>>()?
    } else {
        Vec::new()
    };

    let (c_scale, g_scale, d_scale) = match which {
        BlockOperator::C => (1.0, 0.0, 0.0),
        BlockOperator::D => (0.0, 0.0, 1.0),
        BlockOperator::G => (0.0, 1.0, 0.0),
        BlockOperator::R { theta, sigma, tau } => {
            if !(tau > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "tau must be positive, got {tau}"
                )));
            }
            (-0.5, theta, tau * (sigma - 0.25))
        }
    };

    for alpha in 0..p {
        let b_alpha = problem.parts()[alpha].as_dense();
        if d_scale != 0.0 {
            put(alpha, alpha, b_alpha, d_scale);
        }
        if c_scale != 0.0 || g_scale != 0.0 {
            for beta in 0..p {
                let scale = c_scale + if alpha == beta { g_scale } else { 0.0 };
                if scale != 0.0 {
                    put(alpha, beta, &b_alpha.matmul(&a_inv_b[beta])?, scale);
                }
            }
        }
    }
    SymMatrix::from_dense(out)
}
