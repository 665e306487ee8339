//! Height-pinned continuation from a root of the dispersion function.
//!
//! At fixed period 2π/k the flat state stays a solution for every r, so plain
//! Newton started near it falls back to flat. Pinning η(0) − η(L/2) = H and
//! releasing r selects the bifurcating branch instead.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::dispersion::dispersion_profile;
use super::newton::{newton_solve, Constraint, NewtonParams, SolveOptions};
use super::state::WaveState;
use super::system::ResidualNorms;
use super::WaveError;
use crate::stream::StreamSolution;
use crate::vorticity::VorticityDistribution;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ContinuationSettings {
    pub nx: usize,
    pub ny: usize,
    /// Crest-to-trough heights, solved in order, each from the previous state.
    pub heights: Vec<f64>,
    pub newton: NewtonParams,
}

impl Default for ContinuationSettings {
    fn default() -> Self {
        Self {
            nx: 64,
            ny: 32,
            heights: vec![0.002, 0.005, 0.01, 0.02],
            newton: NewtonParams::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BranchPoint {
    pub height: f64,
    pub r: f64,
    pub max_deviation: f64,
    pub iterations: usize,
    pub residual: ResidualNorms,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContinuationReport {
    pub k_star: f64,
    pub period: f64,
    pub h: f64,
    pub points: Vec<BranchPoint>,
    pub final_state: WaveState,
}

/// Flat state plus the linear mode at wavenumber k scaled to height H:
/// η = h + (H/2) cos kx and ψ = U − U_y(h)(H/2) f(y)/f(h) cos kx.
pub fn bifurcation_seed(
    sol: &StreamSolution,
    dist: &VorticityDistribution,
    k: f64,
    height: f64,
    nx: usize,
    ny: usize,
) -> Result<WaveState, WaveError> {
    if !(k > 0.0) {
        return Err(WaveError::InvalidState(format!("wavenumber {k} must be positive")));
    }
    let period = 2.0 * PI / k;
    let half = 0.5 * height;
    let eta: Vec<f64> = (0..nx)
        .map(|i| sol.h + half * (k * i as f64 * period / nx as f64).cos())
        .collect();
    let y_end = eta.iter().cloned().fold(sol.h, f64::max);
    let mode = dispersion_profile(sol, dist, k, y_end)?;
    let fh = mode.f(sol.h).0;
    let amp = -sol.surface_speed * half / fh;
    let mut state = WaveState::sampled(period, nx, ny, eta, sol.head(), |x, y| {
        sol.u(y) + amp * mode.f(y).0 * (k * x).cos()
    })?;
    state.impose_dirichlet();
    Ok(state)
}

pub fn continue_branch(
    sol: &StreamSolution,
    dist: &VorticityDistribution,
    k_star: f64,
    settings: &ContinuationSettings,
) -> Result<ContinuationReport, WaveError> {
    let first = *settings
        .heights
        .first()
        .ok_or_else(|| WaveError::InvalidState("continuation needs at least one height".into()))?;
    let mut state = bifurcation_seed(sol, dist, k_star, first, settings.nx, settings.ny)?;
    let mut points = Vec::with_capacity(settings.heights.len());
    for &height in &settings.heights {
        let options = SolveOptions {
            constraint: Constraint::Height(height),
            symmetric: true,
        };
        let out = newton_solve(&state, dist, &settings.newton, &options)?;
        points.push(BranchPoint {
            height,
            r: out.state.r,
            max_deviation: out.state.max_deviation(sol.h),
            iterations: out.iterations,
            residual: out.residual,
        });
        state = out.state;
    }
    Ok(ContinuationReport {
        k_star,
        period: 2.0 * PI / k_star,
        h: sol.h,
        points,
        final_state: state,
    })
}
