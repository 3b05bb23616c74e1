use crate::error::{Error, Result};
use crate::linalg::{Cholesky, DenseMatrix, StateVector};

/// Relative asymmetry above which construction is refused.
pub const SYMMETRY_TOLERANCE: f64 = 1e-10;

/// Default pivot threshold for definiteness, relative to the largest diagonal entry.
pub const DEFINITENESS_TOLERANCE: f64 = 1e-12;

/// Dense symmetric operator. Houses `A`, `B`, the parts `B_α` and assembled
/// block operators. Definiteness is a query ([`spd_check`]), not an invariant.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    inner: DenseMatrix,
}

impl SymMatrix {
    /// Symmetrizes `(M + Mᵀ)/2`; rejects non-finite entries and relative
    /// asymmetry above [`SYMMETRY_TOLERANCE`].
    pub fn from_dense(m: DenseMatrix) -> Result<Self> {
        if m.rows() != m.cols() {
            return Err(Error::NotSquare {
                rows: m.rows(),
                cols: m.cols(),
            });
        }
        if m.rows() == 0 {
            return Err(Error::InvalidParameter(
                "matrix dimension must be positive".into(),
            ));
        }
        m.check_finite()?;
        let asym = m.relative_asymmetry();
        if asym > SYMMETRY_TOLERANCE {
            return Err(Error::NotSymmetric(asym));
        }
        let n = m.rows();
        let inner = DenseMatrix::from_fn(n, n, |i, j| 0.5 * (m[(i, j)] + m[(j, i)]));
        Ok(SymMatrix { inner })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        Self::from_dense(DenseMatrix::from_rows(rows)?)
    }

    pub fn identity(n: usize) -> Self {
        SymMatrix {
            inner: DenseMatrix::identity(n),
        }
    }

    pub fn diag(d: &[f64]) -> Result<Self> {
        let n = d.len();
        Self::from_dense(DenseMatrix::from_fn(
            n,
            n,
            |i, j| if i == j { d[i] } else { 0.0 },
        ))
    }

    pub fn dim(&self) -> usize {
        self.inner.rows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.inner[(i, j)]
    }

    pub fn as_dense(&self) -> &DenseMatrix {
        &self.inner
    }

    pub fn max_diagonal(&self) -> f64 {
        (0..self.dim())
            .map(|i| self.get(i, i))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn apply(&self, x: &StateVector) -> Result<StateVector> {
        self.inner.matvec(x)
    }

    /// `a * self + b * other`
    pub fn lincomb(&self, a: f64, other: &SymMatrix, b: f64) -> Result<SymMatrix> {
        Ok(SymMatrix {
            inner: self.inner.lincomb(a, &other.inner, b)?,
        })
    }

    pub fn sum<'a>(parts: impl IntoIterator<Item = &'a SymMatrix>) -> Result<SymMatrix> {
        let mut it = parts.into_iter();
        let first = it
            .next()
            .ok_or_else(|| Error::InvalidParameter("empty sum".into()))?
            .clone();
        it.try_fold(first, |acc, m| acc.lincomb(1.0, m, 1.0))
    }

    /// Largest absolute row sum; bounds the spectral radius.
    pub fn norm(&self) -> f64 {
        self.inner.norm_inf()
    }

    pub fn is_spd(&self) -> bool {
        spd_check(self, DEFINITENESS_TOLERANCE).positive_definite
    }

    pub fn cholesky(&self) -> Result<Cholesky> {
        Cholesky::factor(self, DEFINITENESS_TOLERANCE)
    }
}

/// Outcome of a definiteness test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpdReport {
    pub symmetric: bool,
    pub positive_definite: bool,
    /// Smallest pivot reached; the failing pivot when factorization stops early.
    pub min_pivot: f64,
}

/// Runs a symmetric factorization; positive definite iff every pivot exceeds
/// `tol * max_diagonal`.
pub fn spd_check(m: &SymMatrix, tol: f64) -> SpdReport {
    let (ok, min_pivot) = match Cholesky::pivots(m, tol) {
        Ok((_, min)) => (true, min),
        Err(Error::NotPositiveDefinite { pivot, .. }) => (false, pivot),
        Err(_) => (false, f64::NAN),
    };
    SpdReport {
        symmetric: true,
        positive_definite: ok,
        min_pivot,
    }
}

/// `(M x, y)`
pub fn m_inner(m: &SymMatrix, x: &StateVector, y: &StateVector) -> Result<f64> {
    x.expect_dim(m.dim())?;
    y.expect_dim(m.dim())?;
    Ok(m.apply(x)?.dot(y))
}

/// Solves `M x = b` for SPD `M`. Callers that solve repeatedly with one
/// matrix should keep the [`Cholesky`] factor instead.
pub fn solve_spd(m: &SymMatrix, b: &StateVector) -> Result<StateVector> {
    m.cholesky()?.solve(b)
}
