//! Dispersion function of the linearised problem about a stream solution:
//!
//!   f″ + (ω′(U) − k²) f = 0,  f(0) = 0,  f′(0) = 1,
//!   σ(k) = U_y(h)² f′(h) − (1 + U_y(h)·U_yy(h)) f(h),  U_yy(h) = −ω(1).

use crate::ode::{self, Tolerances, Trajectory};
use crate::stream::StreamSolution;
use crate::vorticity::VorticityDistribution;

use super::WaveError;

const SCAN_INTERVALS: usize = 256;
const ROOT_TOL: f64 = 1e-12;

fn tight() -> Tolerances {
    Tolerances {
        rtol: 1e-12,
        atol: 1e-14,
    }
}

/// Solution of the joint system (U, U′, f, f′) on [0, y_end].
pub struct DispersionProfile {
    k: f64,
    traj: Trajectory<4>,
}

impl DispersionProfile {
    pub fn k(&self) -> f64 {
        self.k
    }

    /// (f, f′) at y.
    pub fn f(&self, y: f64) -> (f64, f64) {
        self.traj.eval_pair(y, 2)
    }

    pub fn y_end(&self) -> f64 {
        self.traj.last_t()
    }
}

pub fn dispersion_profile(
    sol: &StreamSolution,
    dist: &VorticityDistribution,
    k: f64,
    y_end: f64,
) -> Result<DispersionProfile, WaveError> {
    if !(k >= 0.0) {
        return Err(WaveError::InvalidState(format!("wavenumber {k} must be non-negative")));
    }
    let k2 = k * k;
    let rhs = |_: f64, v: &[f64; 4]| [v[1], -dist.omega(v[0]), v[3], (k2 - dist.derivative(v[0])) * v[2]];
    let (traj, _) = ode::integrate(
        rhs,
        0.0,
        [0.0, sol.profile.s(), 0.0, 1.0],
        y_end,
        tight(),
        None::<fn(f64, &[f64; 4]) -> f64>,
    )
    .map_err(|e| WaveError::Ode(e.to_string()))?;
    Ok(DispersionProfile { k, traj })
}

pub fn dispersion_sigma(sol: &StreamSolution, dist: &VorticityDistribution, k: f64) -> Result<f64, WaveError> {
    let prof = dispersion_profile(sol, dist, k, sol.h)?;
    let (f, fp) = prof.f(sol.h);
    let uy = sol.surface_speed;
    let uyy = -dist.omega(1.0);
    Ok(uy * uy * fp - (1.0 + uy * uyy) * f)
}

/// Roots of σ on [k_min, k_max] by a uniform bracketing scan and bisection.
pub fn find_bifurcation_points(
    sol: &StreamSolution,
    dist: &VorticityDistribution,
    k_min: f64,
    k_max: f64,
) -> Result<Vec<f64>, WaveError> {
    if !(k_min < k_max) {
        return Ok(Vec::new());
    }
    let sigma = |k: f64| dispersion_sigma(sol, dist, k);
    let ks: Vec<f64> = (0..=SCAN_INTERVALS)
        .map(|i| k_min + (k_max - k_min) * i as f64 / SCAN_INTERVALS as f64)
        .collect();
    let vals = ks.iter().map(|&k| sigma(k)).collect::<Result<Vec<_>, _>>()?;
    let mut roots = Vec::new();
    for n in 0..SCAN_INTERVALS {
        let (a, b) = (vals[n], vals[n + 1]);
        if a == 0.0 {
            roots.push(ks[n]);
        } else if a * b < 0.0 {
            let (mut lo, mut hi, mut flo) = (ks[n], ks[n + 1], a);
            while hi - lo > ROOT_TOL {
                let mid = 0.5 * (lo + hi);
                let fm = sigma(mid)?;
                if fm == 0.0 {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if (fm < 0.0) == (flo < 0.0) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            roots.push(0.5 * (lo + hi));
        }
    }
    if vals[SCAN_INTERVALS] == 0.0 {
        roots.push(k_max);
    }
    Ok(roots)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn negative_unit() -> (VorticityDistribution, StreamSolution) {
        let d = VorticityDistribution::constant(-1.0).unwrap();
        let sol = StreamSolution::at_depth(&d, 0.0, 2f64.sqrt(), None).unwrap();
        (d, sol)
    }

    /// k·σ(k) in closed form for U = y²/2, h = √2.
    fn closed(k: f64) -> f64 {
        let r2 = 2f64.sqrt();
        2.0 * k * (r2 * k).cosh() - (1.0 + r2) * (r2 * k).sinh()
    }

    #[test]
    fn sigma_at_zero() {
        let (d, sol) = negative_unit();
        assert_abs_diff_eq!(dispersion_sigma(&sol, &d, 0.0).unwrap(), -2f64.sqrt(), epsilon = 1e-10);
    }

    #[test]
    fn sigma_matches_closed_form() {
        let (d, sol) = negative_unit();
        for k in [0.3, 1.0, 1.7, 3.0] {
            let v = dispersion_sigma(&sol, &d, k).unwrap();
            assert_abs_diff_eq!(k * v, closed(k), epsilon = 1e-9 * closed(k).abs().max(1.0));
        }
    }

    #[test]
    fn single_root_for_negative_constant() {
        let (d, sol) = negative_unit();
        let roots = find_bifurcation_points(&sol, &d, 0.0, 5.0).unwrap();
        assert_eq!(roots.len(), 1);
        assert!((roots[0] - 1.10).abs() < 0.01);
        assert!(closed(roots[0]).abs() < 1e-9);
    }

    #[test]
    fn still_flow_has_no_roots() {
        let d = VorticityDistribution::constant(2.0).unwrap();
        let sol = StreamSolution::at_depth(&d, 2.0, 1.0, None).unwrap();
        assert!(find_bifurcation_points(&sol, &d, 0.0, 10.0).unwrap().is_empty());
        for k in [0.0, 1.0, 5.0] {
            // σ = −f(h; k) ≤ −f(h; 0) = −h
            assert!(dispersion_sigma(&sol, &d, k).unwrap() <= -1.0 + 1e-12);
        }
    }

    #[test]
    fn empty_interval() {
        let (d, sol) = negative_unit();
        assert!(find_bifurcation_points(&sol, &d, 1.0, 1.0).unwrap().is_empty());
    }
}
