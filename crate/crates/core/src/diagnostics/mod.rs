//! Perturbation fields about a still flow and the norm functionals of the
//! nonexistence argument, evaluated on discrete states.

mod bernoulli;
mod energy;
mod fields;
mod linearized;
mod norms;
mod quad;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::stream::StreamSolution;
use crate::vorticity::VorticityDistribution;
use crate::wavesolver::WaveState;

pub use bernoulli::{bernoulli_check, bernoulli_check_squared};
pub use energy::{default_delta, lemma2_rhs, periodic_weight, weighted_energy, weighted_energy_of};
pub use fields::{perturbation_fields, PerturbationFields};
pub use linearized::{quartic_scaling_probe, solve_linearized_w, LinearizedSolution, ScalingProbe};
pub use norms::{normal_derivative, trace_norm, windowed_norm, windowed_sup};
pub use quad::{gauss_legendre, TrigInterpolant};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DiagnosticsError {
    #[error("mean depth {mean} of the state is inconsistent with h = {h}")]
    DepthMismatch { mean: f64, h: f64 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsReport {
    pub t: f64,
    pub delta: f64,
    pub lemma2_lhs: f64,
    pub lemma2_rhs: f64,
    /// lhs / rhs; absent when rhs vanishes.
    pub ratio: Option<f64>,
    /// ‖∂_nφ‖_{L²(t, t+1)} on the surface.
    pub trace_norm: f64,
    /// ‖ζ‖_{L^p(t, t+1)} keyed by p.
    pub windowed_norms: BTreeMap<String, f64>,
    pub bernoulli_residual: f64,
    pub bernoulli_residual_squared: f64,
    pub slope_sup: f64,
    pub amp_sup: f64,
}

/// All functionals for one state against its still reference flow; δ
/// defaults to [`default_delta`].
pub fn diagnose(
    state: &WaveState,
    sol: &StreamSolution,
    dist: &VorticityDistribution,
    t: f64,
    delta: Option<f64>,
) -> Result<DiagnosticsReport, DiagnosticsError> {
    let delta = match delta {
        Some(d) => d,
        None => default_delta(dist.sup_derivative(), sol.h)?,
    };
    let fields = perturbation_fields(state, sol)?;
    let lhs = weighted_energy(&fields, delta, t)?;
    let rhs = lemma2_rhs(&fields.zeta, fields.period, delta, t)?;
    let mut windowed_norms = BTreeMap::new();
    for p in [1u32, 2] {
        windowed_norms.insert(p.to_string(), windowed_norm(&fields.zeta, fields.period, t, p)?);
    }
    Ok(DiagnosticsReport {
        t,
        delta,
        lemma2_lhs: lhs,
        lemma2_rhs: rhs,
        ratio: (rhs > 0.0).then(|| lhs / rhs),
        trace_norm: trace_norm(&fields.phi, state, t)?,
        windowed_norms,
        bernoulli_residual: bernoulli_check(state, sol)?,
        bernoulli_residual_squared: bernoulli_check_squared(state, sol)?,
        slope_sup: fields.slope_sup,
        amp_sup: fields.amp_sup,
    })
}
