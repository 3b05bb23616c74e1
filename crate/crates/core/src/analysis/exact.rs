//! Reference solution of `B du/dt + A u = f`, `u(0) = u0`, through the
//! generalized eigenproblem `A q = λ B q` with `B`-orthonormal `q_k`.
//! Each modal coefficient solves `c' + λc = (f(t), q_k)` exactly for the
//! trigonometric forcings.

use crate::error::Result;
use crate::linalg::{DenseMatrix, StateVector, SymMatrix, SymmetricEigen};
use crate::problem::{ScalarTrig, SplitProblem};

#[derive(Debug, Clone)]
pub struct ExactSolver {
    lambdas: Vec<f64>,
    modes: Vec<StateVector>,
    initial: Vec<f64>,
    forcing: Vec<ScalarTrig>,
}

impl ExactSolver {
    pub fn new(problem: &SplitProblem) -> Result<Self> {
        let m = problem.dim();
        let forcing = problem.forcing().closed_form(m)?;
        let l = problem.b_factor()?;
        // S = L⁻¹ A L⁻ᵀ
        let mut s = DenseMatrix::zeros(m, m);
        for j in 0..m {
            let e = StateVector::from_fn(m, |i| if i == j { 1.0 } else { 0.0 });
            let col = l.solve_lower(&problem.a().apply(&l.solve_upper(&e)?)?)?;
            for i in 0..m {
                s[(i, j)] = col[i];
            }
        }
        let eig = SymmetricEigen::new(&SymMatrix::from_dense(s)?);
        let modes = (0..m)
            .map(|k| l.solve_upper(&eig.column(k)))
            .collect::<Result<Vec<_>>>()?;
        let bu0 = problem.b().apply(problem.u0())?;
        let initial = modes.iter().map(|q| bu0.dot(q)).collect();
        let forcing = modes.iter().map(|q| forcing.project(q)).collect();
        Ok(ExactSolver {
            lambdas: eig.values,
            modes,
            initial,
            forcing,
        })
    }

    /// Generalized eigenvalues of `(A, B)`, ascending.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.lambdas
    }

    pub fn eval(&self, t: f64) -> StateVector {
        let m = self.modes.len();
        let mut u = StateVector::zeros(m);
        for k in 0..m {
            let lam = self.lambdas[k];
            let h = &self.forcing[k];
            let particular = |t: f64| -> f64 {
                let mut v = h.constant / lam;
                for &(w, a, b) in &h.terms {
                    let den = lam * lam + w * w;
                    let pc = (lam * a - w * b) / den;
                    let ps = (lam * b + w * a) / den;
                    v += pc * (w * t).cos() + ps * (w * t).sin();
                }
                v
            };
            let c = if t == 0.0 {
                self.initial[k]
            } else {
                particular(t) + (-lam * t).exp() * (self.initial[k] - particular(0.0))
            };
            u.axpy(c, &self.modes[k]);
        }
        u
    }
}

/// `u(t)`; requires a closed-form forcing.
pub fn exact_solution(problem: &SplitProblem, t: f64) -> Result<StateVector> {
    if t == 0.0 {
        return Ok(problem.u0().clone());
    }
    Ok(ExactSolver::new(problem)?.eval(t))
}
