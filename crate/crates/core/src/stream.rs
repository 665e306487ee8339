//! Stream solutions: x-independent flows (U(y), h) with U″ + ω(U) = 0,
//! U(0) = 0, U(h) = 1, and the still-surface family with U_y(h) = 0.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ode::{self, OdeError, Tolerances, Trajectory};
use crate::special::{singular_quadrature, SingularIntegrandSpec, SpecialError};
use crate::vorticity::VorticityDistribution;

/// |2Ω(1) − s₀²| below this counts as a still-surface maximiser at τ = 1.
pub const STILLNESS_TOL: f64 = 1e-10;
/// |U_y(h)| below this marks a stream solution as still.
pub const SURFACE_SPEED_TOL: f64 = 1e-7;
/// |U(h) − 1| allowed for a validated stream solution.
pub const SURFACE_VALUE_TOL: f64 = 1e-8;
/// Turning-point search horizon for y₋, in units of h₀.
pub const DEFAULT_HORIZON_FACTOR: f64 = 100.0;

const SCAN_POINTS: usize = 4000;
const QUAD_TOL: f64 = 1e-13;
/// Stored profiles are integrated past the default tolerances: the first
/// integral drifts linearly in y, and deep family members reach y ~ 20.
const PROFILE_TOL: Tolerances = Tolerances { rtol: 1e-12, atol: 1e-14 };

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StreamError {
    #[error(transparent)]
    Ode(#[from] OdeError),
    #[error("still depth diverges: {0}")]
    DivergentDepth(String),
    #[error("no monotone still-surface rise: maximiser of Omega on [0,1] is tau0 = {tau0}")]
    NotStill { tau0: f64 },
    #[error("no still-surface stream solution: {0}")]
    NoStillSolution(String),
    #[error("U(y; {s}) does not reach 1 within y = {horizon}")]
    NoArrival { s: f64, horizon: f64 },
    #[error("stream solution check failed: {0}")]
    Validation(String),
}

/// U(y; s) sampled by the integrator with quintic dense output.
#[derive(Debug, Clone)]
pub struct StreamProfile {
    s: f64,
    traj: Trajectory<2>,
    turning_points: Vec<f64>,
}

impl StreamProfile {
    /// Bottom slope U_y(0).
    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn y_grid(&self) -> &[f64] {
        &self.traj.t
    }

    pub fn u_values(&self) -> Vec<f64> {
        self.traj.y.iter().map(|v| v[0]).collect()
    }

    pub fn uy_values(&self) -> Vec<f64> {
        self.traj.y.iter().map(|v| v[1]).collect()
    }

    /// Heights where U_y changes sign, in integration order.
    pub fn turning_points(&self) -> &[f64] {
        &self.turning_points
    }

    pub fn y_end(&self) -> f64 {
        self.traj.last_t()
    }

    /// (U(y), U_y(y)); outside the integrated range the end segment is
    /// extrapolated.
    pub fn eval(&self, y: f64) -> (f64, f64) {
        self.traj.eval_pair(y, 0)
    }

    pub fn u(&self, y: f64) -> f64 {
        self.eval(y).0
    }
}

fn cauchy_rhs(dist: &VorticityDistribution) -> impl Fn(f64, &[f64; 2]) -> [f64; 2] + '_ {
    move |_, v| [v[1], -dist.omega(v[0])]
}

type NoEvent = fn(f64, &[f64; 2]) -> f64;

fn integrate_profile(
    dist: &VorticityDistribution,
    s: f64,
    y_end: f64,
) -> Result<StreamProfile, StreamError> {
    let (traj, _) = ode::integrate(
        cauchy_rhs(dist),
        0.0,
        [0.0, s],
        y_end,
        PROFILE_TOL,
        None::<NoEvent>,
    )?;
    let turning_points = sign_changes(&traj, |v| v[1])
        .into_iter()
        .map(|k| refine_in_segment(&traj, k, |(_, d)| d))
        .collect();
    Ok(StreamProfile { s, traj, turning_points })
}

fn sign_changes(traj: &Trajectory<2>, g: impl Fn(&[f64; 2]) -> f64) -> Vec<usize> {
    let mut out = Vec::new();
    let mut prev = g(&traj.y[0]);
    for k in 0..traj.len() - 1 {
        let next = g(&traj.y[k + 1]);
        if (prev != 0.0 && next == 0.0) || prev * next < 0.0 {
            out.push(k);
        }
        if next != 0.0 {
            prev = next;
        }
    }
    out
}

fn refine_in_segment(traj: &Trajectory<2>, k: usize, g: impl Fn((f64, f64)) -> f64) -> f64 {
    let (lo, hi) = (traj.t[k], traj.t[k + 1]);
    ode::bisect(|y| g(traj.eval_pair(y, 0)), lo, hi, 1e-15)
}

/// Solves U″ + ω(U) = 0, U(0) = 0, U_y(0) = s on [0, y_max].
pub fn solve_cauchy(
    dist: &VorticityDistribution,
    s: f64,
    y_max: f64,
) -> Result<StreamProfile, StreamError> {
    if !(y_max > 0.0) {
        return Err(StreamError::Validation(format!("y_max = {y_max} must be positive")));
    }
    integrate_profile(dist, s, y_max)
}

/// Critical surface speed s₀ = √(2 max_{[0,1]} Ω) and a maximiser τ₀.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalSpeed {
    pub s0: f64,
    pub tau0: f64,
    /// Ω is constant on [0, 1], so τ₀ carries no information.
    pub degenerate: bool,
}

pub fn compute_s0(dist: &VorticityDistribution) -> CriticalSpeed {
    let taus: Vec<f64> = (0..=SCAN_POINTS).map(|i| i as f64 / SCAN_POINTS as f64).collect();
    let vals: Vec<f64> = taus.iter().map(|&t| dist.antiderivative(t)).collect();
    let max = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = vals.iter().cloned().fold(f64::INFINITY, f64::min);
    let tie = 1e-14 * max.abs().max(1.0);
    // ties go to the largest τ
    let best = vals.iter().rposition(|&v| v >= max - tie).unwrap_or(SCAN_POINTS);

    let mut tau0 = taus[best];
    let mut omega_max = vals[best];
    if best > 0 && best < SCAN_POINTS {
        let (t, v) = golden_max(|t| dist.antiderivative(t), taus[best - 1], taus[best + 1]);
        if v > omega_max {
            tau0 = t;
            omega_max = v;
        }
    }
    CriticalSpeed {
        s0: (2.0 * omega_max.max(0.0)).sqrt(),
        tau0,
        degenerate: max - min <= 1e-14,
    }
}

fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > 1e-14 {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    let t = 0.5 * (a + b);
    (t, f(t))
}

/// Whether the maximiser of Ω on [0, 1] sits at τ = 1 (within tolerance).
pub fn is_still(dist: &VorticityDistribution, crit: &CriticalSpeed) -> bool {
    (2.0 * dist.antiderivative(1.0) - crit.s0 * crit.s0).abs() <= STILLNESS_TOL
}

/// h₀ = ∫₀¹ dτ / √(s₀² − 2Ω(τ)).
pub fn still_depth_h0(dist: &VorticityDistribution) -> Result<f64, StreamError> {
    let crit = compute_s0(dist);
    if !is_still(dist, &crit) {
        return Err(StreamError::NotStill { tau0: crit.tau0 });
    }
    let s0_sq = crit.s0 * crit.s0;
    let mut offset = (s0_sq - 2.0 * dist.antiderivative(1.0)).max(0.0);
    // a rounding-level offset would turn the (1−τ)^{-1/2} endpoint into an
    // O(√offset) error
    if offset <= 64.0 * f64::EPSILON * s0_sq.max(1.0) {
        offset = 0.0;
    }
    // s₀² − 2Ω(τ), accumulated from the nearer endpoint
    let gap = |tau: f64| {
        if tau >= 0.5 {
            offset + 2.0 * dist.integral_between(tau, 1.0)
        } else {
            s0_sq - 2.0 * dist.integral_between(0.0, tau)
        }
    };
    let bottom_singular = crit.s0 <= 1e-7;
    let left_exponent = if bottom_singular { -0.5 } else { 0.0 };
    let smooth = |tau: f64| {
        let mut num = 1.0 - tau;
        if bottom_singular {
            num *= tau;
        }
        (num / gap(tau)).sqrt()
    };
    let spec = SingularIntegrandSpec::new(smooth, left_exponent, -0.5);
    singular_quadrature(&spec, 0.0, 1.0, QUAD_TOL).map_err(|e| match e {
        SpecialError::NonIntegrable(msg) => StreamError::DivergentDepth(format!(
            "omega(tau0) = {} vanishes or is degenerate ({msg})",
            dist.omega(crit.tau0)
        )),
        other => StreamError::DivergentDepth(other.to_string()),
    })
}

/// Lower end y₋(s₀) of the maximal interval around 0 on which U(y; s₀)
/// increases; `f64::NEG_INFINITY` if no turning point within the default
/// horizon of 100·h₀.
pub fn monotone_interval_lower(dist: &VorticityDistribution, s0: f64) -> Result<f64, StreamError> {
    let horizon = DEFAULT_HORIZON_FACTOR * still_depth_h0(dist).unwrap_or(1.0);
    monotone_interval_lower_within(dist, s0, horizon)
}

pub fn monotone_interval_lower_within(
    dist: &VorticityDistribution,
    s0: f64,
    horizon: f64,
) -> Result<f64, StreamError> {
    if s0 == 0.0 {
        return Ok(0.0);
    }
    let (traj, hit) = ode::integrate(
        cauchy_rhs(dist),
        0.0,
        [0.0, s0],
        -horizon.abs(),
        Tolerances::default(),
        Some(|_: f64, v: &[f64; 2]| v[1]),
    )?;
    if !hit {
        return Ok(f64::NEG_INFINITY);
    }
    Ok(refine_in_segment(&traj, traj.len() - 2, |(_, d)| d))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

/// Position of a still solution in the (±, k) family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Branch {
    pub sign: Sign,
    pub k: usize,
}

/// A flat state (U, h) of the free-boundary problem.
#[derive(Debug, Clone)]
pub struct StreamSolution {
    pub profile: StreamProfile,
    pub h: f64,
    pub surface_speed: f64,
    pub still: bool,
    pub branch: Option<Branch>,
}

impl StreamSolution {
    /// Builds (U(y; s), h) and checks U(h) = 1. The profile is integrated
    /// up to 2h so that wavy surfaces above h can be evaluated.
    pub fn at_depth(
        dist: &VorticityDistribution,
        s: f64,
        h: f64,
        branch: Option<Branch>,
    ) -> Result<Self, StreamError> {
        let profile = integrate_profile(dist, s, 2.0 * h)?;
        let (u, uy) = profile.eval(h);
        if (u - 1.0).abs() > SURFACE_VALUE_TOL {
            return Err(StreamError::Validation(format!(
                "U({h}; {s}) = {u}, expected 1"
            )));
        }
        Ok(Self {
            profile,
            h,
            surface_speed: uy,
            still: uy.abs() < SURFACE_SPEED_TOL,
            branch,
        })
    }

    /// The flow U(y; s) cut at the first height where U reaches 1.
    pub fn from_slope(dist: &VorticityDistribution, s: f64) -> Result<Self, StreamError> {
        let horizon = 1.0e3;
        if s <= 0.0 {
            let (traj, hit) = ode::integrate(
                cauchy_rhs(dist),
                0.0,
                [0.0, s],
                horizon,
                Tolerances::default(),
                Some(|_: f64, v: &[f64; 2]| v[0] - 1.0),
            )?;
            if !hit {
                return Err(StreamError::NoArrival { s, horizon });
            }
            let h = refine_in_segment(&traj, traj.len() - 2, |(u, _)| u - 1.0);
            return Self::at_depth(dist, s, h, None);
        }
        // U increases until it reaches 1 or turns; a still surface is reached
        // tangentially, so the crossing of U − 1 alone may never register.
        let (traj, hit) = ode::integrate(
            cauchy_rhs(dist),
            0.0,
            [0.0, s],
            horizon,
            Tolerances::default(),
            Some(|_: f64, v: &[f64; 2]| v[1].min(1.0 - v[0])),
        )?;
        if !hit {
            return Err(StreamError::NoArrival { s, horizon });
        }
        let seg = traj.len() - 2;
        let h = if traj.y[seg + 1][0] >= 1.0 {
            refine_in_segment(&traj, seg, |(u, _)| u - 1.0)
        } else {
            let y_turn = refine_in_segment(&traj, seg, |(_, d)| d);
            let u_turn = traj.eval_pair(y_turn, 0).0;
            if u_turn >= 1.0 {
                ode::bisect(|y| traj.eval_pair(y, 0).0 - 1.0, traj.t[seg], y_turn, 1e-15)
            } else if u_turn >= 1.0 - SURFACE_VALUE_TOL {
                y_turn
            } else {
                return Err(StreamError::NoArrival { s, horizon });
            }
        };
        Self::at_depth(dist, s, h, None)
    }

    /// Total head r of the flat state: 3r = U_y(h)² + 2h.
    pub fn head(&self) -> f64 {
        (self.surface_speed * self.surface_speed + 2.0 * self.h) / 3.0
    }

    pub fn u(&self, y: f64) -> f64 {
        self.profile.u(y)
    }
}

/// Still-surface stream solutions (U(y; ±s₀), h_k^{(±)}), k = 0..=k_max,
/// sorted by depth.
pub fn still_depth_family(
    dist: &VorticityDistribution,
    k_max: usize,
) -> Result<Vec<StreamSolution>, StreamError> {
    let crit = compute_s0(dist);
    if !is_still(dist, &crit) {
        return Err(StreamError::NoStillSolution(format!(
            "maximiser of Omega on [0,1] is tau0 = {}, so U_y(h)^2 = {} > 0 on the surface",
            crit.tau0,
            crit.s0 * crit.s0 - 2.0 * dist.antiderivative(1.0)
        )));
    }
    let h0 = still_depth_h0(dist)?;
    let s0 = crit.s0;
    let y_minus = monotone_interval_lower_within(dist, s0, DEFAULT_HORIZON_FACTOR * h0)?;

    let mut family = Vec::new();
    let mut push = |sign: Sign, k: usize, h: f64, strict: bool| -> Result<bool, StreamError> {
        let s = match sign {
            Sign::Plus => s0,
            Sign::Minus => -s0,
        };
        match StreamSolution::at_depth(dist, s, h, Some(Branch { sign, k })) {
            Ok(sol) if sol.still => {
                family.push(sol);
                Ok(true)
            }
            Ok(sol) if strict => Err(StreamError::Validation(format!(
                "candidate depth {h} has surface speed {}",
                sol.surface_speed
            ))),
            Err(e) if strict => Err(e),
            _ => Ok(false),
        }
    };

    if y_minus == f64::NEG_INFINITY {
        push(Sign::Plus, 0, h0, true)?;
    } else if s0 == 0.0 {
        // Experimental: U(y; 0) only contributes beyond k = 0 when periodic.
        push(Sign::Plus, 0, h0, true)?;
        for k in 1..=k_max {
            if !push(Sign::Plus, k, h0 + 2.0 * k as f64 * h0, false)? {
                break;
            }
        }
    } else {
        for k in 0..=k_max {
            let plus = h0 + 2.0 * k as f64 * (h0 - y_minus);
            push(Sign::Plus, k, plus, true)?;
            push(Sign::Minus, k, plus - 2.0 * y_minus, true)?;
        }
    }
    family.sort_by(|a, b| a.h.total_cmp(&b.h));
    Ok(family)
}
