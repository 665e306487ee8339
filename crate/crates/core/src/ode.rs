//! Adaptive Dormand–Prince 5(4) integration with event stopping.
//!
//! The integrator keeps every accepted node together with the right-hand
//! side there. Systems written as (value, derivative) pairs get quintic
//! Hermite dense output, since the second derivative is the right-hand side
//! of the derivative component.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OdeError {
    #[error("integrator cannot meet tolerance: {0}")]
    StepFailure(String),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub rtol: f64,
    pub atol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { rtol: 1e-10, atol: 1e-12 }
    }
}

const MAX_STEPS: usize = 2_000_000;

const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
// fifth-order weights minus embedded fourth-order weights
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Accepted integration nodes, ordered along the direction of integration.
#[derive(Debug, Clone)]
pub struct Trajectory<const N: usize> {
    pub t: Vec<f64>,
    pub y: Vec<[f64; N]>,
    pub dy: Vec<[f64; N]>,
}

impl<const N: usize> Trajectory<N> {
    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn first_t(&self) -> f64 {
        self.t[0]
    }

    pub fn last_t(&self) -> f64 {
        *self.t.last().expect("trajectory has nodes")
    }

    /// Segment index whose closed interval contains `at`; clamps outside.
    pub fn segment(&self, at: f64) -> usize {
        let n = self.t.len();
        if n < 2 {
            return 0;
        }
        let forward = self.t[n - 1] >= self.t[0];
        let p = if forward {
            self.t.partition_point(|&s| s <= at)
        } else {
            self.t.partition_point(|&s| s >= at)
        };
        p.saturating_sub(1).min(n - 2)
    }

    /// Quintic Hermite value and derivative of component `c`, whose
    /// derivative is stored in component `c + 1`.
    pub fn eval_pair(&self, at: f64, c: usize) -> (f64, f64) {
        if self.t.len() == 1 {
            return (self.y[0][c], self.y[0][c + 1]);
        }
        let k = self.segment(at);
        hermite5(
            self.t[k],
            self.t[k + 1],
            [self.y[k][c], self.y[k][c + 1], self.dy[k][c + 1]],
            [self.y[k + 1][c], self.y[k + 1][c + 1], self.dy[k + 1][c + 1]],
            at,
        )
    }
}

/// Quintic Hermite interpolation on [t0, t1] from (value, first, second)
/// derivatives at both ends; returns value and first derivative at `at`.
pub fn hermite5(t0: f64, t1: f64, left: [f64; 3], right: [f64; 3], at: f64) -> (f64, f64) {
    let h = t1 - t0;
    let s = (at - t0) / h;
    let (s2, s3) = (s * s, s * s * s);
    let (s4, s5) = (s3 * s, s3 * s2);
    let h0 = 1.0 - 10.0 * s3 + 15.0 * s4 - 6.0 * s5;
    let h1 = s - 6.0 * s3 + 8.0 * s4 - 3.0 * s5;
    let h2 = 0.5 * (s2 - 3.0 * s3 + 3.0 * s4 - s5);
    let h3 = 0.5 * (s3 - 2.0 * s4 + s5);
    let h4 = -4.0 * s3 + 7.0 * s4 - 3.0 * s5;
    let h5 = 10.0 * s3 - 15.0 * s4 + 6.0 * s5;
    let d0 = -30.0 * s2 + 60.0 * s3 - 30.0 * s4;
    let d1 = 1.0 - 18.0 * s2 + 32.0 * s3 - 15.0 * s4;
    let d2 = 0.5 * (2.0 * s - 9.0 * s2 + 12.0 * s3 - 5.0 * s4);
    let d3 = 0.5 * (3.0 * s2 - 8.0 * s3 + 5.0 * s4);
    let d4 = -12.0 * s2 + 28.0 * s3 - 15.0 * s4;
    let d5 = 30.0 * s2 - 60.0 * s3 + 30.0 * s4;
    let value = h0 * left[0]
        + h1 * h * left[1]
        + h2 * h * h * left[2]
        + h3 * h * h * right[2]
        + h4 * h * right[1]
        + h5 * right[0];
    let deriv = (d0 * left[0]
        + d1 * h * left[1]
        + d2 * h * h * left[2]
        + d3 * h * h * right[2]
        + d4 * h * right[1]
        + d5 * right[0])
        / h;
    (value, deriv)
}

/// Integrates y′ = f(t, y) from `t0` to `t_end` (either direction).
///
/// When `event` is given, integration stops at the end of the first step
/// across which the event function changes sign; the returned flag is then
/// `true` and the crossing lies inside the last segment. A zero of the
/// event function at `t0` does not count.
pub fn integrate<const N: usize, F, G>(
    rhs: F,
    t0: f64,
    y0: [f64; N],
    t_end: f64,
    tol: Tolerances,
    event: Option<G>,
) -> Result<(Trajectory<N>, bool), OdeError>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
    G: Fn(f64, &[f64; N]) -> f64,
{
    let span = t_end - t0;
    let dir = span.signum();
    let mut traj = Trajectory {
        t: vec![t0],
        y: vec![y0],
        dy: vec![rhs(t0, &y0)],
    };
    if span == 0.0 {
        return Ok((traj, false));
    }

    let mut t = t0;
    let mut y = y0;
    let mut k1 = traj.dy[0];
    let mut h = dir * (span.abs() * 1e-3).min(0.01);
    let mut g_prev = event.as_ref().map(|g| g(t0, &y0)).unwrap_or(0.0);
    let mut steps = 0usize;

    while (t_end - t) * dir > 0.0 {
        steps += 1;
        if steps > MAX_STEPS {
            return Err(OdeError::StepFailure(format!("more than {MAX_STEPS} steps")));
        }
        if (t + h - t_end) * dir > 0.0 {
            h = t_end - t;
        }
        let mut k = [[0.0; N]; 7];
        k[0] = k1;
        for s in 1..7 {
            let mut ys = y;
            for (i, v) in ys.iter_mut().enumerate() {
                for (j, kj) in k.iter().enumerate().take(s) {
                    *v += h * A[s][j] * kj[i];
                }
            }
            k[s] = rhs(t + C[s] * h, &ys);
        }
        // FSAL: stage 7 is evaluated at the fifth-order solution
        let mut y_new = y;
        for (i, v) in y_new.iter_mut().enumerate() {
            for (j, kj) in k.iter().enumerate().take(6) {
                *v += h * A[6][j] * kj[i];
            }
        }
        let mut err = 0.0;
        for i in 0..N {
            let e: f64 = (0..7).map(|j| E[j] * k[j][i]).sum::<f64>() * h;
            let sc = tol.atol + tol.rtol * y[i].abs().max(y_new[i].abs());
            err += (e / sc).powi(2);
        }
        let err = (err / N as f64).sqrt();
        if !err.is_finite() {
            return Err(OdeError::StepFailure(format!("non-finite state near t = {t}")));
        }
        if err <= 1.0 {
            let t_new = if h == t_end - t { t_end } else { t + h };
            t = t_new;
            y = y_new;
            k1 = k[6];
            traj.t.push(t);
            traj.y.push(y);
            traj.dy.push(k1);
            if let Some(g) = event.as_ref() {
                let gv = g(t, &y);
                let crossed = (g_prev != 0.0 && gv == 0.0) || g_prev * gv < 0.0;
                if crossed {
                    return Ok((traj, true));
                }
                if gv != 0.0 {
                    g_prev = gv;
                }
            }
        }
        let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        h *= factor;
        if h.abs() < 1e-14 * t.abs().max(1.0) {
            return Err(OdeError::StepFailure(format!("step size underflow at t = {t}")));
        }
    }
    Ok((traj, false))
}

/// Bisection on a bracket [lo, hi] with f(lo)·f(hi) ≤ 0.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, xtol: f64) -> f64 {
    let mut flo = f(lo);
    if flo == 0.0 {
        return lo;
    }
    if f(hi) == 0.0 {
        return hi;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (hi - lo).abs() <= xtol || mid == lo || mid == hi {
            return mid;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    type NoEvent = fn(f64, &[f64; 2]) -> f64;

    #[test]
    fn harmonic_oscillator() {
        let (traj, hit) = integrate(
            |_, y: &[f64; 2]| [y[1], -y[0]],
            0.0,
            [0.0, 1.0],
            10.0,
            Tolerances::default(),
            None::<NoEvent>,
        )
        .unwrap();
        assert!(!hit);
        assert_eq!(traj.last_t(), 10.0);
        for (t, y) in traj.t.iter().zip(&traj.y) {
            assert_abs_diff_eq!(y[0], t.sin(), epsilon = 1e-9);
        }
        // dense output between nodes
        for i in 0..200 {
            let t = 0.05 * i as f64;
            let (v, d) = traj.eval_pair(t, 0);
            assert_abs_diff_eq!(v, t.sin(), epsilon = 1e-9);
            assert_abs_diff_eq!(d, t.cos(), epsilon = 1e-8);
        }
    }

    #[test]
    fn backward_with_event() {
        let (traj, hit) = integrate(
            |_, y: &[f64; 2]| [y[1], -y[0]],
            0.0,
            [0.0, 1.0],
            -10.0,
            Tolerances::default(),
            Some(|_: f64, y: &[f64; 2]| y[1]),
        )
        .unwrap();
        assert!(hit);
        let k = traj.len() - 2;
        let root = bisect(|t| traj.eval_pair(t, 0).1, traj.t[k], traj.t[k + 1], 1e-15);
        assert_abs_diff_eq!(root, -std::f64::consts::FRAC_PI_2, epsilon = 1e-10);
    }

    #[test]
    fn hermite_reproduces_quintic() {
        let p = |t: f64| 1.0 + t - 2.0 * t.powi(2) + 0.5 * t.powi(3) - t.powi(4) + 0.3 * t.powi(5);
        let dp = |t: f64| 1.0 - 4.0 * t + 1.5 * t.powi(2) - 4.0 * t.powi(3) + 1.5 * t.powi(4);
        let ddp = |t: f64| -4.0 + 3.0 * t - 12.0 * t.powi(2) + 6.0 * t.powi(3);
        let (a, b) = (0.3, 1.7);
        for i in 0..=10 {
            let t = a + (b - a) * i as f64 / 10.0;
            let (v, d) = hermite5(a, b, [p(a), dp(a), ddp(a)], [p(b), dp(b), ddp(b)], t);
            assert_abs_diff_eq!(v, p(t), epsilon = 1e-12);
            assert_abs_diff_eq!(d, dp(t), epsilon = 1e-11);
        }
    }
}
