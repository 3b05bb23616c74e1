use crate::error::{Error, Result};
use crate::linalg::{StateVector, SymMatrix};

/// Square-root-free symmetric factorization `M = L D Lᵀ` with unit lower
/// triangular `L` and positive diagonal `D`.
#[derive(Debug, Clone)]
pub struct Cholesky {
    n: usize,
    // row-major, strictly lower part used
    l: Vec<f64>,
    d: Vec<f64>,
}

impl Cholesky {
    pub fn factor(m: &SymMatrix, tol: f64) -> Result<Self> {
        Self::pivots(m, tol).map(|(c, _)| c)
    }

    /// Factorizes and returns the smallest pivot `d_k`.
    pub(crate) fn pivots(m: &SymMatrix, tol: f64) -> Result<(Self, f64)> {
        let n = m.dim();
        let threshold = tol * m.max_diagonal().max(0.0);
        let mut l = vec![0.0; n * n];
        let mut d = vec![0.0; n];
        // scratch: row j of L times D
        let mut ld = vec![0.0; n];
        let mut min_pivot = f64::INFINITY;
        for j in 0..n {
            let mut dj = m.get(j, j);
            for k in 0..j {
                ld[k] = l[j * n + k] * d[k];
                dj -= l[j * n + k] * ld[k];
            }
            min_pivot = min_pivot.min(dj);
            if !(dj > threshold) || dj <= 0.0 {
                return Err(Error::NotPositiveDefinite { row: j, pivot: dj });
            }
            d[j] = dj;
            l[j * n + j] = 1.0;
            for i in (j + 1)..n {
                let mut s = m.get(i, j);
                for k in 0..j {
                    s -= l[i * n + k] * ld[k];
                }
                l[i * n + j] = s / dj;
            }
        }
        Ok((Cholesky { n, l, d }, min_pivot))
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn pivot(&self, k: usize) -> f64 {
        self.d[k]
    }

    fn check(&self, b: &[f64]) -> Result<()> {
        if b.len() == self.n {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.n,
                found: b.len(),
            })
        }
    }

    fn forward(&self, y: &mut [f64]) {
        let n = self.n;
        for i in 0..n {
            let row = &self.l[i * n..i * n + i];
            let s: f64 = row.iter().zip(&y[..i]).map(|(a, b)| a * b).sum();
            y[i] -= s;
        }
    }

    fn backward(&self, x: &mut [f64]) {
        let n = self.n;
        for i in (0..n).rev() {
            let mut s = x[i];
            for k in (i + 1)..n {
                s -= self.l[k * n + i] * x[k];
            }
            x[i] = s;
        }
    }

    /// `(L D^{1/2})⁻¹ b`
    pub fn solve_lower(&self, b: &[f64]) -> Result<StateVector> {
        self.check(b)?;
        let mut y = b.to_vec();
        self.forward(&mut y);
        for (v, d) in y.iter_mut().zip(&self.d) {
            *v /= d.sqrt();
        }
        Ok(StateVector::new(y))
    }

    /// `(L D^{1/2})⁻ᵀ b`
    pub fn solve_upper(&self, b: &[f64]) -> Result<StateVector> {
        self.check(b)?;
        let mut x: Vec<f64> = b.iter().zip(&self.d).map(|(v, d)| v / d.sqrt()).collect();
        self.backward(&mut x);
        Ok(StateVector::new(x))
    }

    pub fn solve(&self, b: &StateVector) -> Result<StateVector> {
        self.check(b)?;
        let mut x = b.to_vec();
        self.forward(&mut x);
        for (v, d) in x.iter_mut().zip(&self.d) {
            *v /= d;
        }
        self.backward(&mut x);
        Ok(StateVector::new(x))
    }
}
