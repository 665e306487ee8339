//! Applicability of the nonexistence theorem for a still-surface flow:
//! a still stream solution of depth h and μ = ess sup ω′ < π²/h².

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::stream::{StreamSolution, SURFACE_VALUE_TOL};
use crate::vorticity::VorticityDistribution;

/// The margin π²/h² − μ must exceed this for the theorem to apply.
pub const MARGIN_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HypothesisReport {
    pub s0_condition: bool,
    pub mu: f64,
    pub h: f64,
    pub dirichlet_bound: f64,
    pub margin: f64,
    pub applicable: bool,
    #[serde(rename = "slope_bound_B")]
    pub slope_bound_b: f64,
    pub notes: String,
}

pub fn check_theorem1(
    dist: &VorticityDistribution,
    sol: &StreamSolution,
    slope_bound_b: f64,
) -> HypothesisReport {
    let mu = dist.sup_derivative();
    let h = sol.h;
    let dirichlet_bound = PI * PI / (h * h);
    let margin = dirichlet_bound - mu;
    let surface_ok = (sol.u(h) - 1.0).abs() <= SURFACE_VALUE_TOL;
    let s0_condition = sol.still && surface_ok;

    let mut notes = Vec::new();
    if !sol.still {
        notes.push(format!(
            "surface speed U_y(h) = {:.3e} is not zero: the flow is not still",
            sol.surface_speed
        ));
    }
    if !surface_ok {
        notes.push(format!("U(h) = {} differs from 1", sol.u(h)));
    }
    if margin <= MARGIN_TOL {
        notes.push(format!(
            "mu = {mu} is not below the Dirichlet bound pi^2/h^2 = {dirichlet_bound}"
        ));
    }
    let applicable = s0_condition && margin > MARGIN_TOL;
    if applicable {
        notes.push(
            "small-amplitude nonexistence holds for slope bound B; the amplitude threshold \
             epsilon(mu, h, B) exists but is not computed"
                .to_string(),
        );
    } else {
        notes.push("theorem gives no answer for this flow".to_string());
    }

    HypothesisReport {
        s0_condition,
        mu,
        h,
        dirichlet_bound,
        margin,
        applicable,
        slope_bound_b,
        notes: notes.join("; "),
    }
}
