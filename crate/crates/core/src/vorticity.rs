//! Vorticity distributions ω(τ) as functions of the stream-function value.
//!
//! Every built-in family is globally Lipschitz and carries a closed-form
//! antiderivative Ω(τ) = ∫₀^τ ω. Tabulated data are interpolated linearly
//! between nodes and extended by constants outside the node range, so the
//! same guarantees hold with exact (cumulative trapezoid) integrals.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VorticityError {
    #[error("invalid vorticity parameters: {0}")]
    InvalidFamilyParams(String),
}

/// Family descriptor as it appears under the `"vorticity"` key of a config.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum FamilySpec {
    Constant {
        b: f64,
    },
    Linear {
        b: f64,
    },
    /// ω(τ) = bτ² on [−R, R], continued by the constant bR².
    QuadraticTruncated {
        b: f64,
        #[serde(rename = "R", alias = "r")]
        r: f64,
    },
    Tabulated {
        nodes: Vec<f64>,
        values: Vec<f64>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AntiderivativeMode {
    ClosedForm,
    Numeric,
}

/// An immutable, validated vorticity distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct VorticityDistribution {
    spec: FamilySpec,
}

/// Validates a family descriptor and builds the distribution.
pub fn make_distribution(spec: FamilySpec) -> Result<VorticityDistribution, VorticityError> {
    let bad = |msg: &str| Err(VorticityError::InvalidFamilyParams(msg.to_string()));
    match &spec {
        FamilySpec::Constant { b } | FamilySpec::Linear { b } => {
            if !b.is_finite() {
                return bad("coefficient b must be finite");
            }
        }
        FamilySpec::QuadraticTruncated { b, r } => {
            if !(b.is_finite() && *b > 0.0) {
                return bad("quadratic_truncated requires b > 0");
            }
            if !(r.is_finite() && *r > 1.0) {
                return bad("quadratic_truncated requires R > 1");
            }
        }
        FamilySpec::Tabulated { nodes, values } => {
            if nodes.len() < 2 {
                return bad("tabulated vorticity needs at least two nodes");
            }
            if nodes.len() != values.len() {
                return bad("tabulated nodes and values differ in length");
            }
            if nodes.iter().chain(values).any(|v| !v.is_finite()) {
                return bad("tabulated data must be finite");
            }
            if nodes.windows(2).any(|w| w[1] <= w[0]) {
                return bad("tabulated nodes must be strictly increasing");
            }
        }
    }
    Ok(VorticityDistribution { spec })
}

impl VorticityDistribution {
    pub fn constant(b: f64) -> Result<Self, VorticityError> {
        make_distribution(FamilySpec::Constant { b })
    }

    pub fn linear(b: f64) -> Result<Self, VorticityError> {
        make_distribution(FamilySpec::Linear { b })
    }

    pub fn quadratic_truncated(b: f64, r: f64) -> Result<Self, VorticityError> {
        make_distribution(FamilySpec::QuadraticTruncated { b, r })
    }

    pub fn tabulated(nodes: Vec<f64>, values: Vec<f64>) -> Result<Self, VorticityError> {
        make_distribution(FamilySpec::Tabulated { nodes, values })
    }

    pub fn spec(&self) -> &FamilySpec {
        &self.spec
    }

    pub fn antiderivative_mode(&self) -> AntiderivativeMode {
        match self.spec {
            FamilySpec::Tabulated { .. } => AntiderivativeMode::Numeric,
            _ => AntiderivativeMode::ClosedForm,
        }
    }

    /// ω(τ).
    pub fn omega(&self, tau: f64) -> f64 {
        match &self.spec {
            FamilySpec::Constant { b } => *b,
            FamilySpec::Linear { b } => b * tau,
            FamilySpec::QuadraticTruncated { b, r } => {
                let t = tau.clamp(-r, *r);
                b * t * t
            }
            FamilySpec::Tabulated { nodes, values } => {
                let n = nodes.len();
                if tau <= nodes[0] {
                    return values[0];
                }
                if tau >= nodes[n - 1] {
                    return values[n - 1];
                }
                let k = segment_index(nodes, tau);
                let theta = (tau - nodes[k]) / (nodes[k + 1] - nodes[k]);
                values[k] + theta * (values[k + 1] - values[k])
            }
        }
    }

    /// ω′(τ); at kinks the right-hand derivative is returned.
    pub fn derivative(&self, tau: f64) -> f64 {
        match &self.spec {
            FamilySpec::Constant { .. } => 0.0,
            FamilySpec::Linear { b } => *b,
            FamilySpec::QuadraticTruncated { b, r } => {
                if tau.abs() < *r || tau == -r {
                    2.0 * b * tau
                } else {
                    0.0
                }
            }
            FamilySpec::Tabulated { nodes, values } => {
                let n = nodes.len();
                if tau < nodes[0] || tau >= nodes[n - 1] {
                    return 0.0;
                }
                let k = segment_index(nodes, tau);
                (values[k + 1] - values[k]) / (nodes[k + 1] - nodes[k])
            }
        }
    }

    /// Ω(τ) = ∫₀^τ ω(t) dt, with Ω(0) = 0 exactly.
    pub fn antiderivative(&self, tau: f64) -> f64 {
        self.integral_between(0.0, tau)
    }

    /// ∫_lo^hi ω(t) dt, evaluated without forming Ω(hi) − Ω(lo).
    ///
    /// Differences of nearby arguments stay accurate, which the still-depth
    /// quadrature relies on close to its singular endpoint.
    pub fn integral_between(&self, lo: f64, hi: f64) -> f64 {
        if lo == hi {
            return 0.0;
        }
        if lo > hi {
            return -self.integral_between(hi, lo);
        }
        match &self.spec {
            FamilySpec::Constant { b } => b * (hi - lo),
            FamilySpec::Linear { b } => 0.5 * b * (hi - lo) * (hi + lo),
            FamilySpec::QuadraticTruncated { b, r } => {
                let (b, r) = (*b, *r);
                let mut total = 0.0;
                // left constant tail
                if lo < -r {
                    total += b * r * r * (hi.min(-r) - lo);
                }
                // quadratic core
                let (a, c) = (lo.max(-r), hi.min(r));
                if c > a {
                    total += b * (c - a) * (c * c + c * a + a * a) / 3.0;
                }
                // right constant tail
                if hi > r {
                    total += b * r * r * (hi - lo.max(r));
                }
                total
            }
            FamilySpec::Tabulated { nodes, .. } => {
                // Break [lo, hi] at nodes; ω is linear on every piece.
                let mut total = 0.0;
                let mut left = lo;
                let start = nodes.partition_point(|&x| x <= lo);
                for &node in nodes[start..].iter().take_while(|&&x| x < hi) {
                    total += 0.5 * (node - left) * (self.omega(left) + self.omega(node));
                    left = node;
                }
                total + 0.5 * (hi - left) * (self.omega(left) + self.omega(hi))
            }
        }
    }

    /// μ = ess sup over ℝ of ω′.
    pub fn sup_derivative(&self) -> f64 {
        match &self.spec {
            FamilySpec::Constant { .. } => 0.0,
            FamilySpec::Linear { b } => *b,
            FamilySpec::QuadraticTruncated { b, r } => 2.0 * b * r,
            FamilySpec::Tabulated { .. } => self
                .node_slopes()
                // the constant extensions contribute slope zero
                .fold(0.0, f64::max),
        }
    }

    /// C_ω = sup |ω′|.
    pub fn lipschitz_constant(&self) -> f64 {
        match &self.spec {
            FamilySpec::Constant { .. } => 0.0,
            FamilySpec::Linear { b } => b.abs(),
            FamilySpec::QuadraticTruncated { b, r } => 2.0 * b * r,
            FamilySpec::Tabulated { .. } => self.node_slopes().map(f64::abs).fold(0.0, f64::max),
        }
    }

    fn node_slopes(&self) -> impl Iterator<Item = f64> + '_ {
        let (nodes, values): (&[f64], &[f64]) = match &self.spec {
            FamilySpec::Tabulated { nodes, values } => (nodes, values),
            _ => (&[], &[]),
        };
        nodes
            .windows(2)
            .zip(values.windows(2))
            .map(|(x, v)| (v[1] - v[0]) / (x[1] - x[0]))
    }
}

/// Index k with nodes[k] <= tau < nodes[k + 1]; tau must lie inside the table.
fn segment_index(nodes: &[f64], tau: f64) -> usize {
    let p = nodes.partition_point(|&x| x <= tau);
    p.saturating_sub(1).min(nodes.len() - 2)
}
