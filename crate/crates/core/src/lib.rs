//! Steady water waves on shear flows with a still free surface.
//!
//! The crate builds the x-independent stream solutions of the steady
//! free-boundary problem, checks the hypotheses under which such flows
//! support no small-amplitude waves, probes that statement with a Newton
//! solver for periodic waves, and evaluates the perturbation norms that
//! control the argument.

pub mod diagnostics;
pub mod hypotheses;
pub mod ode;
pub mod special;
pub mod stream;
pub mod vorticity;
pub mod wavesolver;

pub use hypotheses::{check_theorem1, HypothesisReport};
pub use stream::{
    compute_s0, monotone_interval_lower, solve_cauchy, still_depth_family, still_depth_h0,
    StreamProfile, StreamSolution,
};
pub use vorticity::{make_distribution, FamilySpec, VorticityDistribution};
