//! Symmetric eigendecomposition, delegated to `nalgebra`.

use nalgebra::DMatrix;

use crate::linalg::{DenseMatrix, SymMatrix};

/// Eigenvalues in ascending order with orthonormal eigenvectors as columns.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    pub values: Vec<f64>,
    pub vectors: DenseMatrix,
}

impl SymmetricEigen {
    pub fn new(s: &SymMatrix) -> Self {
        let n = s.dim();
        let eig = DMatrix::from_row_slice(n, n, s.as_dense().as_slice()).symmetric_eigen();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
        let vectors = DenseMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
        SymmetricEigen { values, vectors }
    }

    pub fn column(&self, k: usize) -> Vec<f64> {
        (0..self.vectors.rows())
            .map(|i| self.vectors[(i, k)])
            .collect()
    }
}

/// Smallest eigenvalue of a symmetric matrix.
pub fn min_eig_sym(s: &SymMatrix) -> f64 {
    SymmetricEigen::new(s).values[0]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn min_eig_examples() {
        assert!((min_eig_sym(&SymMatrix::identity(4)) - 1.0).abs() < 1e-15);
        let d = SymMatrix::diag(&[2.0, -3.0]).unwrap();
        assert!((min_eig_sym(&d) + 3.0).abs() < 1e-15);
        // roots of (2 - x)^2 - 1 are 1 and 3
        let m = SymMatrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let eig = SymmetricEigen::new(&m);
        assert!((eig.values[0] - 1.0).abs() < 1e-14);
        assert!((eig.values[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn one_by_one() {
        let m = SymMatrix::diag(&[-7.5]).unwrap();
        let eig = SymmetricEigen::new(&m);
        assert_eq!(eig.values, vec![-7.5]);
        assert_eq!(eig.vectors[(0, 0)].abs(), 1.0);
    }

    #[test]
    fn reconstructs_tridiagonal_laplacian() {
        // eigenvalues of tridiag(-1, 2, -1) are 2 - 2cos(kπ/(n+1))
        let n = 9;
        let m = SymMatrix::from_dense(DenseMatrix::from_fn(n, n, |i, j| {
            if i == j {
                2.0
            } else if i.abs_diff(j) == 1 {
                -1.0
            } else {
                0.0
            }
        }))
        .unwrap();
        let eig = SymmetricEigen::new(&m);
        for (k, lam) in eig.values.iter().enumerate() {
            let exact = 2.0 - 2.0 * ((k + 1) as f64 * std::f64::consts::PI / (n + 1) as f64).cos();
            assert!((lam - exact).abs() < 1e-13, "{lam} vs {exact}");
        }
        // M q = λ q
        for k in 0..n {
            let q = eig.column(k);
            let mq = m.as_dense().matvec(&q).unwrap();
            for i in 0..n {
                assert!((mq[i] - eig.values[k] * q[i]).abs() < 1e-13);
            }
        }
    }
}
