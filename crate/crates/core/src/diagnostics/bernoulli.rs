//! Surface identity for still reference flows (3r = 2h):
//!
//!   ζ^{1/2} = 2^{−1/2} |∂_nφ + U_y(y)/(1 + ζ_x²)^{1/2}|  on y = h − ζ.

use super::fields::perturbation_fields;
use super::norms::normal_derivative;
use super::DiagnosticsError;
use crate::stream::StreamSolution;
use crate::wavesolver::WaveState;

/// (ζ, ∂_nφ + U_y/(1 + ζ_x²)^{1/2}) per surface node.
fn surface_terms(state: &WaveState, sol: &StreamSolution) -> Result<Vec<(f64, f64)>, DiagnosticsError> {
    if !sol.still {
        return Err(DiagnosticsError::InvalidInput(format!(
            "reference flow is not still (U_y(h) = {:e})",
            sol.surface_speed
        )));
    }
    let fields = perturbation_fields(state, sol)?;
    let dn_phi = normal_derivative(&fields.phi, state)?;
    let nx = state.nx;
    let dx = state.dx();
    Ok((0..nx)
        .map(|i| {
            let zx = (fields.zeta[(i + 1) % nx] - fields.zeta[(i + nx - 1) % nx]) / (2.0 * dx);
            let uy = sol.profile.eval(state.eta[i]).1;
            (fields.zeta[i], dn_phi[i] + uy / (1.0 + zx * zx).sqrt())
        })
        .collect())
}

/// sup_x |ζ^{1/2} − 2^{−1/2}|∂_nφ + U_y/(1 + ζ_x²)^{1/2}||.
pub fn bernoulli_check(state: &WaveState, sol: &StreamSolution) -> Result<f64, DiagnosticsError> {
    Ok(surface_terms(state, sol)?
        .iter()
        .map(|&(z, s)| (z.max(0.0).sqrt() - s.abs() / 2f64.sqrt()).abs())
        .fold(0.0, f64::max))
}

/// The same identity squared, sup_x |ζ − ½(…)²|. Unlike the root form it is
/// Lipschitz in the Bernoulli defect, so it inherits the solver tolerance
/// near flat states.
pub fn bernoulli_check_squared(state: &WaveState, sol: &StreamSolution) -> Result<f64, DiagnosticsError> {
    Ok(surface_terms(state, sol)?
        .iter()
        .map(|&(z, s)| (z - 0.5 * s * s).abs())
        .fold(0.0, f64::max))
}
