//! Reference solutions, energy functional, a-priori bound monitors,
//! component spread and convergence studies.

mod convergence;
mod exact;
mod trace;
mod vector_ode;

pub use convergence::{
    convergence_study, convergence_study_against, convergence_table, span_order, steps_to_horizon,
    ConvergenceRow, ErrorNorm,
};
pub use exact::{exact_solution, ExactSolver};
pub use trace::{
    check_bound_16, check_bound_22, component_spread, energy_e, run_scheme, BoundReport,
    SchemeTrace, BOUND_TOL_ABS, BOUND_TOL_REL,
};
pub use vector_ode::{integrate_vector_system, VectorOdeRun};
