//! Dense symmetric linear algebra: definiteness checks, Cholesky solves,
//! weighted inner products and symmetric eigenvalues.

mod cholesky;
mod dense;
pub mod eigen;
pub mod mtx;
mod sym;
mod vector;

pub use cholesky::Cholesky;
pub use dense::DenseMatrix;
pub use eigen::{min_eig_sym, SymmetricEigen};
pub use sym::{
    m_inner, solve_spd, spd_check, SpdReport, SymMatrix, DEFINITENESS_TOLERANCE, SYMMETRY_TOLERANCE,
};
pub use vector::StateVector;
