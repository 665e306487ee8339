//! Gauss–Legendre rules and the periodic trigonometric interpolant used by
//! the window functionals.

use std::f64::consts::PI;

/// n-point Gauss–Legendre nodes and weights on [−1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for k in 0..n {
        let mut x = (PI * (k as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for m in 2..=n {
                let p2 = ((2 * m - 1) as f64 * x * p1 - (m - 1) as f64 * p0) / m as f64;
                p0 = p1;
                p1 = p2;
            }
            // p1 = P_n(x), p0 = P_{n−1}(x)
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[k] = x;
        weights[k] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

/// ∫_lo^hi f by `rule` mapped onto the interval.
pub fn integrate_panel(rule: &(Vec<f64>, Vec<f64>), lo: f64, hi: f64, f: impl Fn(f64) -> f64) -> f64 {
    let (c, half) = (0.5 * (lo + hi), 0.5 * (hi - lo));
    rule.0
        .iter()
        .zip(&rule.1)
        .map(|(&x, &w)| w * f(c + half * x))
        .sum::<f64>()
        * half
}

/// Real trigonometric interpolant of equispaced samples on [0, L).
pub struct TrigInterpolant {
    period: f64,
    mean: f64,
    cos: Vec<f64>,
    sin: Vec<f64>,
    /// Coefficient of the cos(nπx/L) mode, present for even n only.
    nyquist: f64,
}

impl TrigInterpolant {
    pub fn new(values: &[f64], period: f64) -> Self {
        let n = values.len();
        let mean = values.iter().sum::<f64>() / n as f64;
        let m_max = (n - 1) / 2;
        let mut cos = Vec::with_capacity(m_max);
        let mut sin = Vec::with_capacity(m_max);
        for m in 1..=m_max {
            let (mut c, mut s) = (0.0, 0.0);
            for (i, &v) in values.iter().enumerate() {
                let th = 2.0 * PI * (m * i) as f64 / n as f64;
                c += v * th.cos();
                s += v * th.sin();
            }
            cos.push(2.0 * c / n as f64);
            sin.push(2.0 * s / n as f64);
        }
        let nyquist = if n % 2 == 0 {
            values
                .iter()
                .enumerate()
                .map(|(i, &v)| if i % 2 == 0 { v } else { -v })
                .sum::<f64>()
                / n as f64
        } else {
            0.0
        };
        Self {
            period,
            mean,
            cos,
            sin,
            nyquist,
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let th = 2.0 * PI * x / self.period;
        let mut v = self.mean;
        for (m, (c, s)) in self.cos.iter().zip(&self.sin).enumerate() {
            let a = (m + 1) as f64 * th;
            v += c * a.cos() + s * a.sin();
        }
        if self.nyquist != 0.0 {
            let m = (self.cos.len() + 1) as f64;
            v += self.nyquist * (m * th).cos();
        }
        v
    }

    /// Number of modes, used to size quadrature panels.
    pub fn modes(&self) -> usize {
        self.cos.len() + 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn legendre_rule_exactness() {
        let rule = gauss_legendre(8);
        assert_abs_diff_eq!(rule.1.iter().sum::<f64>(), 2.0, epsilon = 1e-14);
        // degree 15 is integrated exactly
        let v = integrate_panel(&rule, 0.0, 1.0, |x| x.powi(15));
        assert_abs_diff_eq!(v, 1.0 / 16.0, epsilon = 1e-15);
        let v = integrate_panel(&gauss_legendre(3), -1.0, 2.0, |x| x.powi(4) - x);
        assert_abs_diff_eq!(v, (32.0 + 1.0) / 5.0 - 1.5, epsilon = 1e-13);
    }

    #[test]
    fn interpolant_reproduces_modes() {
        let l = 3.0;
        for n in [8usize, 9] {
            let f = |x: f64| 0.3 + (2.0 * PI * x / l).cos() - 0.5 * (6.0 * PI * x / l).sin();
            let vals: Vec<f64> = (0..n).map(|i| f(i as f64 * l / n as f64)).collect();
            let t = TrigInterpolant::new(&vals, l);
            for x in [0.1, 0.77, 2.9, -1.3] {
                assert_abs_diff_eq!(t.eval(x), f(x), epsilon = 1e-12);
            }
            for (i, v) in vals.iter().enumerate() {
                assert_abs_diff_eq!(t.eval(i as f64 * l / n as f64), *v, epsilon = 1e-12);
            }
        }
    }
}
