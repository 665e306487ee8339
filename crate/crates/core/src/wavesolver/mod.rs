//! Periodic free-boundary solver on the mapped strip, nonexistence sweeps
//! and the bifurcation positive control.

mod continuation;
mod dispersion;
mod newton;
mod state;
mod sweep;
mod system;

use thiserror::Error;

pub use continuation::{bifurcation_seed, continue_branch, BranchPoint, ContinuationReport, ContinuationSettings};
pub use dispersion::{dispersion_profile, dispersion_sigma, find_bifurcation_points, DispersionProfile};
pub use newton::{newton_solve, Constraint, NewtonParams, NewtonSolution, SolveOptions};
pub use state::WaveState;
pub use sweep::{
    nonexistence_sweep, SweepCase, SweepReport, SweepSettings, FLAT_TOL, VERDICT_CONSISTENT, VERDICT_INCONSISTENT,
    VERDICT_NOT_APPLICABLE,
};
pub use system::{bernoulli_field, pde_field, residual, ResidualNorms};

pub(crate) use newton::solve_sparse;
pub(crate) use system::stencil;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WaveError {
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("Newton iteration diverged: {0}")]
    NewtonDiverged(String),
    #[error("surface collapse: {0}")]
    SurfaceCollapse(String),
    #[error("singular Jacobian: {0}")]
    SingularJacobian(String),
    #[error("ODE failure: {0}")]
    Ode(String),
}
