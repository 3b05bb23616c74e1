//! Additive operator-difference schemes for `B du/dt + A u = f` with the
//! operator at the time derivative split as `B = Σ_α B_α`.
//!
//! The crate is organized bottom-up:
//!
//! * [`linalg`]: dense symmetric algebra (Cholesky, eigenvalues, Matrix Market).
//! * [`problem`]: the split problem, the space `H^p`, block operators and generators.
//! * [`schemes`]: two-level, vector additive and sequential steppers.
//! * [`analysis`]: reference solutions, energy monitors and convergence studies.
//! * [`harness`]: the `vsplit` command-line front end.

// NaN-rejecting guards are written as negated comparisons on purpose.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod analysis;
pub mod error;
pub mod harness;
pub mod linalg;
pub mod problem;
pub mod schemes;

pub use error::{Error, Result};
pub use linalg::{StateVector, SymMatrix};
pub use problem::{BlockState, SplitProblem};
