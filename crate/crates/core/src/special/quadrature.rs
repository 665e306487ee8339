//! Adaptive Gauss–Kronrod quadrature with algebraic endpoint singularities.
//!
//! An integrand g(x)·(x−a)^α·(b−x)^β with α, β ∈ (−1, 0] is split at the
//! midpoint. On each half touching a singular endpoint the substitution
//! x − a = s^p, p = 1/(1+α) turns the weight into the constant p, leaving a
//! bounded integrand that is handed to a globally adaptive G7–K15 rule.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::SpecialError;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];

// Gauss weights for XGK[1], XGK[3], XGK[5] and the centre.
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

const MAX_SEGMENTS: usize = 20_000;
/// Ratio of transformed-integrand magnitudes between the innermost and
/// outermost probe points above which the integral is declared divergent.
const GROWTH_LIMIT: f64 = 1.0e3;

/// g(x)·(x−a)^left_exponent·(b−x)^right_exponent.
pub struct SingularIntegrandSpec<F> {
    pub smooth_part: F,
    pub left_exponent: f64,
    pub right_exponent: f64,
}

impl<F: Fn(f64) -> f64> SingularIntegrandSpec<F> {
    pub fn new(smooth_part: F, left_exponent: f64, right_exponent: f64) -> Self {
        Self {
            smooth_part,
            left_exponent,
            right_exponent,
        }
    }
}

/// ∫_a^b of the integrand described by `spec`, to absolute error `tol`.
pub fn singular_quadrature<F: Fn(f64) -> f64>(
    spec: &SingularIntegrandSpec<F>,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<f64, SpecialError> {
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(SpecialError::OutOfDomain(format!(
            "quadrature interval [{a}, {b}] is empty or unbounded"
        )));
    }
    if !(tol > 0.0) {
        return Err(SpecialError::OutOfDomain(format!("tolerance {tol} must be positive")));
    }
    for e in [spec.left_exponent, spec.right_exponent] {
        if !(e > -1.0 && e <= 0.0) {
            return Err(SpecialError::OutOfDomain(format!(
                "endpoint exponent {e} outside (-1, 0]"
            )));
        }
    }

    let (alpha, beta) = (spec.left_exponent, spec.right_exponent);
    let g = &spec.smooth_part;
    let mid = 0.5 * (a + b);
    let weight = |x: f64| -> f64 {
        let mut w = 1.0;
        if alpha != 0.0 {
            w *= (x - a).powf(alpha);
        }
        if beta != 0.0 {
            w *= (b - x).powf(beta);
        }
        w
    };

    let left = if alpha < 0.0 {
        let p = 1.0 / (1.0 + alpha);
        let s_max = (mid - a).powf(1.0 / p);
        let f = |s: f64| {
            let x = a + s.powf(p);
            let tail = if beta != 0.0 { (b - x).powf(beta) } else { 1.0 };
            p * g(x) * tail
        };
        probe_growth(&f, s_max, |s| a + s.powf(p) == a)?;
        adaptive_gk(&f, 0.0, s_max, 0.5 * tol)?
    } else {
        adaptive_gk(&|x: f64| g(x) * weight(x), a, mid, 0.5 * tol)?
    };

    let right = if beta < 0.0 {
        let p = 1.0 / (1.0 + beta);
        let s_max = (b - mid).powf(1.0 / p);
        let f = |s: f64| {
            let x = b - s.powf(p);
            let head = if alpha != 0.0 { (x - a).powf(alpha) } else { 1.0 };
            p * g(x) * head
        };
        probe_growth(&f, s_max, |s| b - s.powf(p) == b)?;
        adaptive_gk(&f, 0.0, s_max, 0.5 * tol)?
    } else {
        adaptive_gk(&|x: f64| g(x) * weight(x), mid, b, 0.5 * tol)?
    };

    Ok(left + right)
}

/// Samples the transformed integrand towards s = 0 and rejects growth that
/// signals a stronger singularity than the declared exponent.
fn probe_growth<F, D>(f: &F, s_max: f64, degenerate: D) -> Result<(), SpecialError>
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> bool,
{
    let mut samples = Vec::new();
    for k in 1..=7 {
        let s = s_max * 10f64.powi(-k);
        if degenerate(s) {
            break;
        }
        let v = f(s);
        if !v.is_finite() {
            return Err(SpecialError::NonIntegrable(format!(
                "integrand is not finite at distance {s:e} from the singular endpoint"
            )));
        }
        samples.push(v.abs());
    }
    if let (Some(&outer), Some(&inner)) = (samples.first(), samples.last()) {
        let growing = samples.windows(2).all(|w| w[1] >= w[0]);
        if growing && inner > GROWTH_LIMIT * outer.max(f64::MIN_POSITIVE) {
            return Err(SpecialError::NonIntegrable(format!(
                "transformed integrand grows from {outer:e} to {inner:e} near the endpoint"
            )));
        }
    }
    Ok(())
}

struct Segment {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// One G7–K15 panel: (Kronrod value, |Kronrod − Gauss|).
pub(crate) fn gauss_kronrod_15<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> (f64, f64) {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = f(center);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for (j, (&x, &w)) in XGK.iter().zip(WGK.iter()).take(7).enumerate() {
        let pair = f(center - half * x) + f(center + half * x);
        kronrod += w * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

/// Globally adaptive bisection driven by the largest local error.
pub(crate) fn adaptive_gk<F: Fn(f64) -> f64>(
    f: &F,
    lo: f64,
    hi: f64,
    tol: f64,
) -> Result<f64, SpecialError> {
    let mut heap = BinaryHeap::new();
    let (value, error) = gauss_kronrod_15(f, lo, hi);
    let mut total_value = value;
    let mut total_error = error;
    heap.push(Segment { lo, hi, value, error });

    while total_error > tol {
        if !total_value.is_finite() {
            return Err(SpecialError::NonIntegrable("non-finite partial sum".into()));
        }
        if heap.len() >= MAX_SEGMENTS {
            return Err(SpecialError::NonIntegrable(format!(
                "no convergence after {MAX_SEGMENTS} segments (error estimate {total_error:e})"
            )));
        }
        let worst = heap.pop().expect("heap never empties");
        let mid = 0.5 * (worst.lo + worst.hi);
        if mid <= worst.lo || mid >= worst.hi {
            // Interval can no longer be split in double precision.
            return Err(SpecialError::NonIntegrable(format!(
                "segment width underflow near {mid:e}"
            )));
        }
        let (v1, e1) = gauss_kronrod_15(f, worst.lo, mid);
        let (v2, e2) = gauss_kronrod_15(f, mid, worst.hi);
        total_value += v1 + v2 - worst.value;
        total_error += e1 + e2 - worst.error;
        heap.push(Segment { lo: worst.lo, hi: mid, value: v1, error: e1 });
        heap.push(Segment { lo: mid, hi: worst.hi, value: v2, error: e2 });
    }
    if !total_value.is_finite() {
        return Err(SpecialError::NonIntegrable("non-finite integral".into()));
    }
    // Re-sum to shed the drift of the running updates.
    Ok(heap.iter().map(|s| s.value).sum())
}
