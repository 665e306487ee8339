//! Nonexistence sweep: perturb a still flat state, solve at 3r = 2h, and
//! check whether Newton falls back to the flat state.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::newton::{newton_solve, NewtonParams, SolveOptions};
use super::state::WaveState;
use super::WaveError;
use crate::hypotheses::check_theorem1;
use crate::stream::StreamSolution;
use crate::vorticity::VorticityDistribution;

pub const VERDICT_CONSISTENT: &str = "consistent with Theorem 1";
pub const VERDICT_NOT_APPLICABLE: &str = "theorem not applicable";
pub const VERDICT_INCONSISTENT: &str = "inconsistent with Theorem 1";

/// Returning within this distance of the discrete flat surface counts as flat.
pub const FLAT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepSettings {
    pub nx: usize,
    pub ny: usize,
    /// Slope cap B: every perturbation must satisfy 2πa/L ≤ B.
    #[serde(rename = "B_cap")]
    pub b_cap: f64,
    /// Amplitudes must stay below this stand-in for the theorem's ε.
    pub epsilon_proxy: f64,
    pub newton: NewtonParams,
}

impl Default for SweepSettings {
    fn default() -> Self {
        Self {
            nx: 64,
            ny: 32,
            b_cap: 1.0,
            epsilon_proxy: 0.1,
            newton: NewtonParams::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepCase {
    pub amplitude: f64,
    pub wavelength: f64,
    pub converged_to_flat: bool,
    /// max|h − η| of the Newton output; absent when the solve failed.
    pub final_max_zeta: Option<f64>,
    pub newton_iterations: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub cases: Vec<SweepCase>,
    pub verdict: String,
}

/// Flat reference on the given grid: the analytic flat state polished by
/// Newton, so that discretisation error does not count as a wave.
fn discrete_flat(
    sol: &StreamSolution,
    dist: &VorticityDistribution,
    period: f64,
    settings: &SweepSettings,
) -> Result<f64, WaveError> {
    let mut flat = WaveState::flat(sol, period, settings.nx, settings.ny)?;
    flat.r = 2.0 * sol.h / 3.0;
    let out = newton_solve(&flat, dist, &settings.newton, &SolveOptions::default())?;
    Ok(out.state.mean_depth())
}

fn run_case(
    sol: &StreamSolution,
    dist: &VorticityDistribution,
    amplitude: f64,
    wavelength: f64,
    settings: &SweepSettings,
) -> SweepCase {
    let mut case = SweepCase {
        amplitude,
        wavelength,
        converged_to_flat: false,
        final_max_zeta: None,
        newton_iterations: 0,
        error: None,
    };
    if amplitude == 0.0 {
        case.converged_to_flat = true;
        case.final_max_zeta = Some(0.0);
        return case;
    }
    let attempt = || -> Result<(usize, f64, f64), WaveError> {
        let h_ref = discrete_flat(sol, dist, wavelength, settings)?;
        let mut start = WaveState::stretched(sol, wavelength, settings.nx, settings.ny, amplitude)?;
        start.r = 2.0 * sol.h / 3.0;
        let out = newton_solve(&start, dist, &settings.newton, &SolveOptions::default())?;
        Ok((out.iterations, out.state.max_deviation(h_ref), out.state.max_deviation(sol.h)))
    };
    match attempt() {
        Ok((iters, from_ref, from_h)) => {
            case.newton_iterations = iters;
            case.final_max_zeta = Some(from_h);
            case.converged_to_flat = from_ref < FLAT_TOL;
        }
        Err(e) => case.error = Some(e.to_string()),
    }
    case
}

/// Runs every (a, L) pair, a outer and L inner; cases run in parallel but
/// the report order is fixed. When the theorem's hypotheses fail the cases
/// are still run, but the verdict makes no claim.
pub fn nonexistence_sweep(
    sol: &StreamSolution,
    dist: &VorticityDistribution,
    amplitudes: &[f64],
    wavelengths: &[f64],
    settings: &SweepSettings,
) -> Result<SweepReport, WaveError> {
    if !sol.still {
        return Err(WaveError::InvalidState(format!(
            "reference flow at depth {} is not still (U_y(h) = {:e})",
            sol.h, sol.surface_speed
        )));
    }
    for &a in amplitudes {
        if !(a >= 0.0) || a >= settings.epsilon_proxy {
            return Err(WaveError::InvalidState(format!(
                "amplitude {a} outside [0, epsilon_proxy = {})",
                settings.epsilon_proxy
            )));
        }
        for &l in wavelengths {
            if !(l > 0.0) {
                return Err(WaveError::InvalidState(format!("wavelength {l} must be positive")));
            }
            let slope = 2.0 * PI * a / l;
            if slope > settings.b_cap {
                return Err(WaveError::InvalidState(format!(
                    "perturbation a = {a}, L = {l} has slope {slope} above B = {}",
                    settings.b_cap
                )));
            }
        }
    }
    let grid: Vec<(f64, f64)> = amplitudes
        .iter()
        .flat_map(|&a| wavelengths.iter().map(move |&l| (a, l)))
        .collect();
    let cases: Vec<SweepCase> = grid
        .par_iter()
        .map(|&(a, l)| run_case(sol, dist, a, l, settings))
        .collect();

    let verdict = match check_theorem1(dist, sol, settings.b_cap) {
        h if !h.applicable => VERDICT_NOT_APPLICABLE,
        _ if cases.iter().all(|c| c.converged_to_flat) => VERDICT_CONSISTENT,
        _ => VERDICT_INCONSISTENT,
    };
    Ok(SweepReport {
        cases,
        verdict: verdict.to_string(),
    })
}
