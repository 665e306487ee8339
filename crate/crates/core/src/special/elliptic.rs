//! F(φ\α) = ∫₀^φ dθ / √(1 − sin²α · sin²θ) by descending Landen (AGM) steps.

use std::f64::consts::{FRAC_PI_2, PI};

use super::SpecialError;

const MAX_ITER: usize = 40;

/// Incomplete elliptic integral of the first kind in the modular-angle
/// convention. Both angles are in radians.
pub fn elliptic_f(phi: f64, alpha: f64) -> Result<f64, SpecialError> {
    // small slack so that FRAC_PI_2 computed from degrees is accepted
    let slack = 4.0 * f64::EPSILON;
    if !(phi >= 0.0 && phi <= FRAC_PI_2 + slack) {
        return Err(SpecialError::OutOfDomain(format!("phi = {phi} outside [0, pi/2]")));
    }
    if !(alpha >= 0.0 && alpha < FRAC_PI_2) {
        return Err(SpecialError::OutOfDomain(format!("alpha = {alpha} outside [0, pi/2)")));
    }
    if alpha == 0.0 || phi == 0.0 {
        return Ok(phi);
    }

    let mut a = 1.0f64;
    let mut b = alpha.cos();
    let mut c = alpha.sin();
    let mut angle = phi;
    let mut scale = 1.0f64;
    for _ in 0..MAX_ITER {
        if c.abs() <= f64::EPSILON * a {
            break;
        }
        // tan(φ_{n+1} − φ_n) = (b_n / a_n) tan φ_n, on the continuous branch
        let turns = (angle / PI).round();
        let reduced = angle - turns * PI;
        angle += (b / a * reduced.tan()).atan() + turns * PI;
        let next_a = 0.5 * (a + b);
        c = 0.5 * (a - b);
        b = (a * b).sqrt();
        a = next_a;
        scale *= 2.0;
    }
    Ok(angle / (scale * a))
}

/// [`elliptic_f`] with both angles given in degrees.
pub fn elliptic_f_degrees(phi_deg: f64, alpha_deg: f64) -> Result<f64, SpecialError> {
    elliptic_f(phi_deg.to_radians(), alpha_deg.to_radians())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    /// Composite Simpson oracle, independent of the Landen descent.
    fn simpson_oracle(phi: f64, alpha: f64) -> f64 {
        let m = alpha.sin().powi(2);
        let n = 20_000;
        let h = phi / n as f64;
        let f = |t: f64| 1.0 / (1.0 - m * t.sin().powi(2)).sqrt();
        let mut s = f(0.0) + f(phi);
        for i in 1..n {
            s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(i as f64 * h);
        }
        s * h / 3.0
    }

    fn agm_complete(alpha: f64) -> f64 {
        let (mut a, mut b) = (1.0f64, alpha.cos());
        while (a - b).abs() > 1e-16 {
            let na = 0.5 * (a + b);
            b = (a * b).sqrt();
            a = na;
        }
        PI / (2.0 * a)
    }

    #[test]
    fn zero_modulus() {
        for phi in [0.0, 0.3, 1.0, FRAC_PI_2] {
            assert_eq!(elliptic_f(phi, 0.0).unwrap(), phi);
        }
    }

    #[test]
    fn complete_integral_matches_agm() {
        let alpha = 75f64.to_radians();
        let k = elliptic_f(FRAC_PI_2, alpha).unwrap();
        assert_relative_eq!(k, agm_complete(alpha), max_relative = 1e-13);
        assert!((k - 2.7681).abs() < 1e-4);
    }

    #[test]
    fn incomplete_matches_quadrature() {
        for &(phi, alpha_deg) in &[(0.2, 10.0), (1.0, 45.0), (1.4, 75.0), (1.5, 89.0), (0.7, 60.0)] {
            let alpha = f64::to_radians(alpha_deg);
            let v = elliptic_f(phi, alpha).unwrap();
            assert_relative_eq!(v, simpson_oracle(phi, alpha), max_relative = 1e-12);
        }
    }

    #[test]
    fn cubic_reduction_angle() {
        let s3 = 3f64.sqrt();
        let phi0 = ((s3 - 1.0) / (s3 + 1.0)).acos();
        let v = elliptic_f(phi0, 75f64.to_radians()).unwrap();
        assert_relative_eq!(v, simpson_oracle(phi0, 75f64.to_radians()), max_relative = 1e-12);
        // 3^{1/4}·∫₀¹ (1−τ³)^{-1/2} dτ
        assert!((v - 3f64.powf(0.25) * 1.402_182_1).abs() < 1e-6);
        assert!((v - 1.8455).abs() < 2e-4);
    }

    #[test]
    fn degrees_wrapper() {
        let a = elliptic_f_degrees(90.0, 75.0).unwrap();
        let b = elliptic_f(FRAC_PI_2, 75f64.to_radians()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn domain_errors() {
        assert!(elliptic_f(-0.1, 0.5).is_err());
        assert!(elliptic_f(1.0, FRAC_PI_2).is_err());
        assert!(elliptic_f(2.0, 0.5).is_err());
        assert!(elliptic_f(f64::NAN, 0.5).is_err());
    }

    #[test]
    fn strictly_increasing_in_both_arguments() {
        let grid: Vec<f64> = (1..40).map(|i| i as f64 * FRAC_PI_2 / 40.0).collect();
        for &alpha in &grid {
            let vals: Vec<f64> = grid.iter().map(|&p| elliptic_f(p, alpha).unwrap()).collect();
            assert!(vals.windows(2).all(|w| w[1] > w[0]));
        }
        for &phi in &grid {
            let vals: Vec<f64> = grid.iter().map(|&a| elliptic_f(phi, a).unwrap()).collect();
            assert!(vals.windows(2).all(|w| w[1] > w[0]));
        }
    }
}
