use serde::{Deserialize, Serialize};

use super::DiagnosticsError;
use crate::stream::StreamSolution;
use crate::wavesolver::WaveState;

/// φ = ψ − U, ζ = h − η, u = [1 − U(h − ζ)]·y/(h − ζ), w = φ − u on the
/// mapped grid of the originating state (same index layout as `psi`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerturbationFields {
    pub phi: Vec<f64>,
    pub zeta: Vec<f64>,
    pub u: Vec<f64>,
    pub w: Vec<f64>,
    pub slope_sup: f64,
    pub amp_sup: f64,
    pub eta: Vec<f64>,
    #[serde(rename = "period_L")]
    pub period: f64,
    pub nx: usize,
    pub ny: usize,
    pub h: f64,
}

/// Centred periodic differences of nodal values.
pub(crate) fn periodic_derivative(values: &[f64], period: f64) -> Vec<f64> {
    let n = values.len();
    let dx = period / n as f64;
    (0..n)
        .map(|i| (values[(i + 1) % n] - values[(i + n - 1) % n]) / (2.0 * dx))
        .collect()
}

pub fn perturbation_fields(state: &WaveState, sol: &StreamSolution) -> Result<PerturbationFields, DiagnosticsError> {
    let mean = state.mean_depth();
    if (mean - sol.h).abs() > 0.5 * sol.h {
        return Err(DiagnosticsError::DepthMismatch { mean, h: sol.h });
    }
    let (nx, ny) = (state.nx, state.ny);
    let zeta: Vec<f64> = state.eta.iter().map(|e| sol.h - e).collect();
    let surface_gap: Vec<f64> = state.eta.iter().map(|&e| 1.0 - sol.u(e)).collect();

    let mut phi = vec![0.0; nx * (ny + 1)];
    let mut u = vec![0.0; nx * (ny + 1)];
    let mut w = vec![0.0; nx * (ny + 1)];
    for j in 0..=ny {
        let q = state.q(j);
        for i in 0..nx {
            let k = j * nx + i;
            phi[k] = state.psi[k] - sol.u(q * state.eta[i]);
            u[k] = surface_gap[i] * q;
            w[k] = phi[k] - u[k];
        }
    }
    let slope_sup = periodic_derivative(&zeta, state.period)
        .iter()
        .fold(0.0f64, |m, v| m.max(v.abs()));
    let amp_sup = zeta.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    Ok(PerturbationFields {
        phi,
        zeta,
        u,
        w,
        slope_sup,
        amp_sup,
        eta: state.eta.clone(),
        period: state.period,
        nx,
        ny,
        h: sol.h,
    })
}
