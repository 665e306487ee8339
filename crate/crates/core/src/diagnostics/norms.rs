//! ‖·‖_{L^p(t, t+1)} of periodic surface data and the surface trace of the
//! normal derivative.

use super::quad::{gauss_legendre, integrate_panel, TrigInterpolant};
use super::DiagnosticsError;
use crate::wavesolver::WaveState;

const PANEL_NODES: usize = 10;
const ROOT_XTOL: f64 = 1e-14;

fn check_p(p: u32) -> Result<(), DiagnosticsError> {
    if p == 1 || p == 2 {
        Ok(())
    } else {
        Err(DiagnosticsError::InvalidInput(format!("window norm exponent {p} must be 1 or 2")))
    }
}

fn panels(interp: &TrigInterpolant, period: f64) -> usize {
    // a few panels per shortest resolved wavelength over a unit window
    let per_unit = 4.0 * interp.modes() as f64 / period;
    (per_unit.ceil() as usize).max(16)
}

fn window_integral(interp: &TrigInterpolant, period: f64, t: f64, p: u32) -> f64 {
    let rule = gauss_legendre(PANEL_NODES);
    let n = panels(interp, period);
    let width = 1.0 / n as f64;
    let f = |x: f64| interp.eval(x);
    let mut total = 0.0;
    for k in 0..n {
        let (lo, hi) = (t + k as f64 * width, t + (k + 1) as f64 * width);
        if p == 2 {
            total += integrate_panel(&rule, lo, hi, |x| f(x).powi(2));
            continue;
        }
        // |ζ| has a kink at each sign change; split the panel there
        let mut cuts = vec![lo];
        let m = 8;
        let mut prev = f(lo);
        for s in 1..=m {
            let x = lo + (hi - lo) * s as f64 / m as f64;
            let v = f(x);
            if prev * v < 0.0 {
                let (mut a, mut b, mut fa) = (x - (hi - lo) / m as f64, x, prev);
                while b - a > ROOT_XTOL {
                    let mid = 0.5 * (a + b);
                    let fm = f(mid);
                    if (fm < 0.0) == (fa < 0.0) {
                        a = mid;
                        fa = fm;
                    } else {
                        b = mid;
                    }
                }
                cuts.push(0.5 * (a + b));
            }
            prev = v;
        }
        cuts.push(hi);
        for w in cuts.windows(2) {
            total += integrate_panel(&rule, w[0], w[1], |x| f(x).abs());
        }
    }
    total
}

/// ‖ζ‖_{L^p(t, t+1)} of the periodic trigonometric interpolant of nodal
/// values on [0, period).
pub fn windowed_norm(zeta: &[f64], period: f64, t: f64, p: u32) -> Result<f64, DiagnosticsError> {
    check_p(p)?;
    if zeta.is_empty() || !(period > 0.0) {
        return Err(DiagnosticsError::InvalidInput("empty data or non-positive period".into()));
    }
    let interp = TrigInterpolant::new(zeta, period);
    let v = window_integral(&interp, period, t, p);
    Ok(if p == 2 { v.max(0.0).sqrt() } else { v })
}

/// sup over t of [`windowed_norm`]: a scan over one period refined by golden
/// section around the best sample.
pub fn windowed_sup(zeta: &[f64], period: f64, p: u32) -> Result<f64, DiagnosticsError> {
    check_p(p)?;
    let interp = TrigInterpolant::new(zeta, period);
    let g = |t: f64| window_integral(&interp, period, t, p);
    let n = 4 * zeta.len().max(16);
    let step = period / n as f64;
    let (mut best_t, mut best) = (0.0, g(0.0));
    for k in 1..n {
        let t = k as f64 * step;
        let v = g(t);
        if v > best {
            best = v;
            best_t = t;
        }
    }
    let ratio = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut b) = (best_t - step, best_t + step);
    let (mut c, mut d) = (b - ratio * (b - a), a + ratio * (b - a));
    let (mut fc, mut fd) = (g(c), g(d));
    while b - a > 1e-10 {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = g(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = g(d);
        }
    }
    let v = best.max(fc).max(fd);
    Ok(if p == 2 { v.sqrt() } else { v })
}

/// ∂_n v on q = 1 with n = (−η_x, 1)/√(1 + η_x²), from a one-sided
/// second-order Ψ_q and a centred Ψ_X along the top row.
pub fn normal_derivative(field: &[f64], state: &WaveState) -> Result<Vec<f64>, DiagnosticsError> {
    let (nx, ny) = (state.nx, state.ny);
    if field.len() != nx * (ny + 1) {
        return Err(DiagnosticsError::InvalidInput(format!(
            "field has {} values, grid needs {}",
            field.len(),
            nx * (ny + 1)
        )));
    }
    let (dx, dq) = (state.dx(), state.dq());
    let v = |i: usize, j: usize| field[j * nx + i];
    Ok((0..nx)
        .map(|i| {
            let (ip, im) = ((i + 1) % nx, (i + nx - 1) % nx);
            let e = state.eta[i];
            let ep = (state.eta[ip] - state.eta[im]) / (2.0 * dx);
            let vq = (3.0 * v(i, ny) - 4.0 * v(i, ny - 1) + v(i, ny - 2)) / (2.0 * dq);
            let vx = (v(ip, ny) - v(im, ny)) / (2.0 * dx) - ep * vq / e;
            let vy = vq / e;
            (-ep * vx + vy) / (1.0 + ep * ep).sqrt()
        })
        .collect())
}

/// ‖∂_n v|_{y=η}‖_{L²(t, t+1)}.
pub fn trace_norm(field: &[f64], state: &WaveState, t: f64) -> Result<f64, DiagnosticsError> {
    let dn = normal_derivative(field, state)?;
    windowed_norm(&dn, state.period, t, 2)
}
