//! Weighted integrals ∫ e^{−δ|t−x|}(…) dx over the whole line for periodic
//! data. Summing the weight over all periods gives, with s = (x − t) mod L,
//!
//!   W(x) = (e^{−δs} + e^{−δ(L−s)}) / (1 − e^{−δL}),
//!
//! which is the limit of truncating the weight at any relative level; the
//! only kink is at x ≡ t, where cells are split.

use super::fields::{periodic_derivative, PerturbationFields};
use super::quad::{gauss_legendre, integrate_panel};
use super::DiagnosticsError;

const CELL_NODES: usize = 3;

fn check_delta(delta: f64) -> Result<(), DiagnosticsError> {
    if delta > 0.0 && delta.is_finite() {
        Ok(())
    } else {
        Err(DiagnosticsError::InvalidInput(format!("delta = {delta} must be positive")))
    }
}

pub fn periodic_weight(x: f64, t: f64, delta: f64, period: f64) -> f64 {
    let s = (x - t).rem_euclid(period);
    ((-delta * s).exp() + (-delta * (period - s)).exp()) / (1.0 - (-delta * period).exp())
}

/// Sub-intervals of [lo, hi] with the kink of the weight removed.
fn split_at_anchor(lo: f64, hi: f64, t: f64, period: f64) -> Vec<(f64, f64)> {
    let k = ((lo - t) / period).ceil();
    let anchor = t + k * period;
    if anchor > lo && anchor < hi {
        vec![(lo, anchor), (anchor, hi)]
    } else {
        vec![(lo, hi)]
    }
}

/// ∫_D e^{−δ|t−x|}(v² + |∇v|²) dx dy for a field on the mapped grid of
/// (η, period): bilinear in each (X, q) cell, η linear in X, chain-rule
/// derivatives w_x = V_X − qη′V_q/η, w_y = V_q/η and area element η dX dq.
pub fn weighted_energy_of(
    field: &[f64],
    eta: &[f64],
    period: f64,
    ny: usize,
    delta: f64,
    t: f64,
) -> Result<f64, DiagnosticsError> {
    check_delta(delta)?;
    let nx = eta.len();
    if field.len() != nx * (ny + 1) {
        return Err(DiagnosticsError::InvalidInput(format!(
            "field has {} values, grid needs {}",
            field.len(),
            nx * (ny + 1)
        )));
    }
    let rule = gauss_legendre(CELL_NODES);
    let (dx, dq) = (period / nx as f64, 1.0 / ny as f64);
    let v = |i: usize, j: usize| field[j * nx + i];
    let mut total = 0.0;
    for i in 0..nx {
        let ip = (i + 1) % nx;
        let x0 = i as f64 * dx;
        let (e0, e1) = (eta[i], eta[ip]);
        let slope = (e1 - e0) / dx;
        for j in 0..ny {
            let (v00, v10, v01, v11) = (v(i, j), v(ip, j), v(i, j + 1), v(ip, j + 1));
            let q0 = j as f64 * dq;
            let cell_x = |x: f64| {
                let xi = (x - x0) / dx;
                let e = e0 + slope * (x - x0);
                let inner = |q: f64| {
                    let nu = (q - q0) / dq;
                    let val = (1.0 - xi) * (1.0 - nu) * v00 + xi * (1.0 - nu) * v10 + (1.0 - xi) * nu * v01 + xi * nu * v11;
                    let vx = ((1.0 - nu) * (v10 - v00) + nu * (v11 - v01)) / dx;
                    let vq = ((1.0 - xi) * (v01 - v00) + xi * (v11 - v10)) / dq;
                    let wx = vx - q * slope * vq / e;
                    let wy = vq / e;
                    (val * val + wx * wx + wy * wy) * e
                };
                integrate_panel(&rule, q0, q0 + dq, inner) * periodic_weight(x, t, delta, period)
            };
            for (lo, hi) in split_at_anchor(x0, x0 + dx, t, period) {
                total += integrate_panel(&rule, lo, hi, cell_x);
            }
        }
    }
    Ok(total)
}

/// Weighted energy of w, ∫ e^{−δ|t−x|}(w² + |∇w|²) over the fluid domain.
pub fn weighted_energy(fields: &PerturbationFields, delta: f64, t: f64) -> Result<f64, DiagnosticsError> {
    weighted_energy_of(&fields.w, &fields.eta, fields.period, fields.ny, delta, t)
}

/// ∫ e^{−δ|t−x|} ζ²(ζ² + ζ_x²) dx with centred ζ_x and the integrand
/// interpolated linearly between nodes.
pub fn lemma2_rhs(zeta: &[f64], period: f64, delta: f64, t: f64) -> Result<f64, DiagnosticsError> {
    check_delta(delta)?;
    let nx = zeta.len();
    if nx == 0 || !(period > 0.0) {
        return Err(DiagnosticsError::InvalidInput("empty data or non-positive period".into()));
    }
    let zx = periodic_derivative(zeta, period);
    let g: Vec<f64> = zeta.iter().zip(&zx).map(|(z, d)| z * z * (z * z + d * d)).collect();
    let rule = gauss_legendre(CELL_NODES);
    let dx = period / nx as f64;
    let mut total = 0.0;
    for i in 0..nx {
        let x0 = i as f64 * dx;
        let (g0, g1) = (g[i], g[(i + 1) % nx]);
        let f = |x: f64| (g0 + (g1 - g0) * (x - x0) / dx) * periodic_weight(x, t, delta, period);
        for (lo, hi) in split_at_anchor(x0, x0 + dx, t, period) {
            total += integrate_panel(&rule, lo, hi, f);
        }
    }
    Ok(total)
}

/// Default rate: half the largest δ with (π/h)² − μ − δ²(5 + (π/h)²) > 0.
pub fn default_delta(mu: f64, h: f64) -> Result<f64, DiagnosticsError> {
    let lam = (std::f64::consts::PI / h).powi(2);
    if !(lam - mu > 0.0) {
        return Err(DiagnosticsError::InvalidInput(format!(
            "mu = {mu} is not below (pi/h)^2 = {lam}; no admissible delta"
        )));
    }
    Ok(0.5 * ((lam - mu) / (5.0 + lam)).sqrt())
}
