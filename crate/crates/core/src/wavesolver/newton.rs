//! Damped Newton iteration on (interior Ψ, η[, r]).

use faer::prelude::*;
use faer::sparse::{SparseColMat, Triplet};
use serde::{Deserialize, Serialize};

use super::state::WaveState;
use super::system::{jacobian_triplets, residual, residual_vector, Layout, ResidualNorms};
use super::WaveError;
use crate::vorticity::VorticityDistribution;

const MAX_HALVINGS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct NewtonParams {
    pub tol: f64,
    pub max_iter: usize,
    /// Initial step length in (0, 1].
    pub damping: f64,
}

impl Default for NewtonParams {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iter: 30,
            damping: 1.0,
        }
    }
}

/// What is held fixed besides the boundary data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Constraint {
    /// r is given; unknowns are Ψ and η.
    FixedHead,
    /// η(0) − η(L/2) = height with r released.
    Height(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    pub constraint: Constraint,
    /// Restrict to states even about x = 0.
    pub symmetric: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            constraint: Constraint::FixedHead,
            symmetric: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NewtonSolution {
    pub state: WaveState,
    pub iterations: usize,
    pub residual: ResidualNorms,
}

fn merit(state: &WaveState, dist: &VorticityDistribution, layout: &Layout) -> (f64, f64) {
    let v = residual_vector(state, dist, layout);
    let sup = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let two = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    (sup.max(residual(state, dist).max()), two)
}

pub(crate) fn solve_sparse(n: usize, entries: &[(usize, usize, f64)], rhs: &[f64]) -> Result<Vec<f64>, WaveError> {
    let triplets: Vec<Triplet<usize, usize, f64>> =
        entries.iter().map(|&(r, c, v)| Triplet::new(r, c, v)).collect();
    let mat = SparseColMat::<usize, f64>::try_new_from_triplets(n, n, &triplets)
        .map_err(|e| WaveError::SingularJacobian(format!("{e:?}")))?;
    let lu = mat
        .sp_lu()
        .map_err(|e| WaveError::SingularJacobian(format!("{e:?}")))?;
    let b = Col::from_fn(n, |i| rhs[i]);
    let x = lu.solve(&b);
    let out: Vec<f64> = (0..n).map(|i| x[i]).collect();
    if out.iter().any(|v| !v.is_finite()) {
        return Err(WaveError::SingularJacobian("non-finite Newton step".into()));
    }
    Ok(out)
}

fn apply_step(state: &WaveState, layout: &Layout, step: &[f64], lambda: f64) -> WaveState {
    let mut next = state.clone();
    let (nx, ny) = (state.nx, state.ny);
    for j in 1..ny {
        for i in 0..nx {
            next.psi[j * nx + i] -= lambda * step[layout.psi_col(i, j)];
        }
    }
    for i in 0..nx {
        next.eta[i] -= lambda * step[layout.eta_col(i)];
    }
    if layout.height.is_some() {
        next.r -= lambda * step[layout.r_col()];
    }
    next
}

/// Newton's method from `initial`, with boundary values reset to 0 and 1.
pub fn newton_solve(
    initial: &WaveState,
    dist: &VorticityDistribution,
    params: &NewtonParams,
    options: &SolveOptions,
) -> Result<NewtonSolution, WaveError> {
    initial.validate()?;
    if !(params.tol > 0.0) || !(params.damping > 0.0 && params.damping <= 1.0) {
        return Err(WaveError::InvalidState(format!(
            "newton tol {} must be positive and damping {} in (0, 1]",
            params.tol, params.damping
        )));
    }
    let height = match options.constraint {
        Constraint::FixedHead => None,
        Constraint::Height(h) => Some(h),
    };
    if (options.symmetric || height.is_some()) && initial.nx % 2 != 0 {
        return Err(WaveError::InvalidState(format!(
            "nx = {} must be even for symmetric or height-pinned solves",
            initial.nx
        )));
    }
    let layout = Layout {
        nx: initial.nx,
        ny: initial.ny,
        symmetric: options.symmetric,
        height,
    };

    let mut state = initial.clone();
    state.impose_dirichlet();
    let (mut sup, mut two) = merit(&state, dist, &layout);
    let mut iterations = 0;
    while sup >= params.tol {
        if iterations >= params.max_iter {
            return Err(WaveError::NewtonDiverged(format!(
                "no convergence in {} iterations (residual {sup:e})",
                params.max_iter
            )));
        }
        iterations += 1;
        let rhs = residual_vector(&state, dist, &layout);
        let step = solve_sparse(layout.size(), &jacobian_triplets(&state, dist, &layout), &rhs)?;

        let mut lambda = params.damping;
        let mut accepted = None;
        let mut collapsed = false;
        for _ in 0..=MAX_HALVINGS {
            let trial = apply_step(&state, &layout, &step, lambda);
            if trial.eta.iter().any(|&e| !(e > 0.0)) {
                collapsed = true;
            } else {
                let (s, t) = merit(&trial, dist, &layout);
                if t.is_finite() && t < two {
                    accepted = Some((trial, s, t));
                    break;
                }
            }
            lambda *= 0.5;
        }
        match accepted {
            Some((next, s, t)) => {
                state = next;
                sup = s;
                two = t;
            }
            None if collapsed => {
                return Err(WaveError::SurfaceCollapse(format!(
                    "every damped step at iteration {iterations} drives eta <= 0"
                )))
            }
            None => {
                return Err(WaveError::NewtonDiverged(format!(
                    "residual increases after {MAX_HALVINGS} halvings at iteration {iterations} (residual {sup:e})"
                )))
            }
        }
    }
    let residual = residual(&state, dist);
    Ok(NewtonSolution {
        state,
        iterations,
        residual,
    })
}
