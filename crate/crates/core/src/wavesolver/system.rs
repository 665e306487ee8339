//! Mapped-coordinate residual of (ψ_xx + ψ_yy + ω(ψ), Bernoulli) and its
//! analytic Jacobian.
//!
//! With Ψ(X, q) = ψ(X, qη(X)) the interior operator reads
//!
//!   Ψ_XX + B Ψ_Xq + C Ψ_qq + E Ψ_q + ω(Ψ),
//!   B = −2qη′/η,  C = (q²η′² + 1)/η²,  E = q(2η′²/η² − η″/η),
//!
//! and on q = 1, with P the one-sided Ψ_q and G = Ψ_X − η′P/η,
//! the Bernoulli defect is G² + P²/η² + 2η − 3r.

use serde::{Deserialize, Serialize};

use super::state::WaveState;
use crate::vorticity::VorticityDistribution;

/// Unknown/equation ordering for one Newton system.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Layout {
    pub nx: usize,
    pub ny: usize,
    /// Even symmetry about x = 0: only columns 0..=nx/2 are unknowns.
    pub symmetric: bool,
    /// Pin η_0 − η_{nx/2} to this height and release r.
    pub height: Option<f64>,
}

impl Layout {
    pub fn nxu(&self) -> usize {
        if self.symmetric {
            self.nx / 2 + 1
        } else {
            self.nx
        }
    }

    pub fn fold(&self, i: usize) -> usize {
        if self.symmetric && i > self.nx / 2 {
            self.nx - i
        } else {
            i
        }
    }

    pub fn n_psi(&self) -> usize {
        self.nxu() * (self.ny - 1)
    }

    pub fn psi_col(&self, i: usize, j: usize) -> usize {
        (j - 1) * self.nxu() + self.fold(i)
    }

    pub fn eta_col(&self, i: usize) -> usize {
        self.n_psi() + self.fold(i)
    }

    pub fn r_col(&self) -> usize {
        self.n_psi() + self.nxu()
    }

    pub fn size(&self) -> usize {
        self.n_psi() + self.nxu() + usize::from(self.height.is_some())
    }
}

/// Discrete sup-norms of the four defect fields.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidualNorms {
    pub pde_norm: f64,
    pub bottom_norm: f64,
    pub top_norm: f64,
    pub bernoulli_norm: f64,
}

impl ResidualNorms {
    pub fn max(&self) -> f64 {
        self.pde_norm
            .max(self.bottom_norm)
            .max(self.top_norm)
            .max(self.bernoulli_norm)
    }
}

/// Local difference quotients around one column.
struct Column {
    ip: usize,
    im: usize,
    eta: f64,
    deta: f64,
    ddeta: f64,
}

fn column(state: &WaveState, i: usize) -> Column {
    let nx = state.nx;
    let dx = state.dx();
    let ip = (i + 1) % nx;
    let im = (i + nx - 1) % nx;
    let e = state.eta[i];
    Column {
        ip,
        im,
        eta: e,
        deta: (state.eta[ip] - state.eta[im]) / (2.0 * dx),
        ddeta: (state.eta[ip] - 2.0 * e + state.eta[im]) / (dx * dx),
    }
}

pub(crate) fn pde_defect(state: &WaveState, dist: &VorticityDistribution, i: usize, j: usize) -> f64 {
    let c = column(state, i);
    let (dx, dq) = (state.dx(), state.dq());
    let p = |i: usize, j: usize| state.psi_at(i, j);
    let q = state.q(j);
    let pxx = (p(c.ip, j) - 2.0 * p(i, j) + p(c.im, j)) / (dx * dx);
    let pxq = (p(c.ip, j + 1) - p(c.ip, j - 1) - p(c.im, j + 1) + p(c.im, j - 1)) / (4.0 * dx * dq);
    let pqq = (p(i, j + 1) - 2.0 * p(i, j) + p(i, j - 1)) / (dq * dq);
    let pq = (p(i, j + 1) - p(i, j - 1)) / (2.0 * dq);
    let (e, ep, epp) = (c.eta, c.deta, c.ddeta);
    let b = -2.0 * q * ep / e;
    let cc = (q * q * ep * ep + 1.0) / (e * e);
    let ee = q * (2.0 * ep * ep / (e * e) - epp / e);
    pxx + b * pxq + cc * pqq + ee * pq + dist.omega(p(i, j))
}

/// (G, P) on the surface column i.
pub(crate) fn surface_gradient(state: &WaveState, i: usize) -> (f64, f64) {
    let c = column(state, i);
    let ny = state.ny;
    let px = (state.psi_at(c.ip, ny) - state.psi_at(c.im, ny)) / (2.0 * state.dx());
    let pq = (3.0 * state.psi_at(i, ny) - 4.0 * state.psi_at(i, ny - 1) + state.psi_at(i, ny - 2))
        / (2.0 * state.dq());
    (px - c.deta * pq / c.eta, pq)
}

pub(crate) fn bernoulli_defect(state: &WaveState, i: usize) -> f64 {
    let (g, p) = surface_gradient(state, i);
    let e = state.eta[i];
    g * g + p * p / (e * e) + 2.0 * e - 3.0 * state.r
}

/// Sup-norms of the interior PDE, bottom, top and Bernoulli defects.
pub fn residual(state: &WaveState, dist: &VorticityDistribution) -> ResidualNorms {
    let (nx, ny) = (state.nx, state.ny);
    let mut pde: f64 = 0.0;
    for j in 1..ny {
        for i in 0..nx {
            pde = pde.max(pde_defect(state, dist, i, j).abs());
        }
    }
    let bottom = (0..nx).map(|i| state.psi_at(i, 0).abs()).fold(0.0, f64::max);
    let top = (0..nx).map(|i| (state.psi_at(i, ny) - 1.0).abs()).fold(0.0, f64::max);
    let bern = (0..nx).map(|i| bernoulli_defect(state, i).abs()).fold(0.0, f64::max);
    ResidualNorms {
        pde_norm: pde,
        bottom_norm: bottom,
        top_norm: top,
        bernoulli_norm: bern,
    }
}

/// Bernoulli defect per surface column.
pub fn bernoulli_field(state: &WaveState) -> Vec<f64> {
    (0..state.nx).map(|i| bernoulli_defect(state, i)).collect()
}

/// Interior PDE defect, `out[(j − 1) * nx + i]` for j = 1..ny−1.
pub fn pde_field(state: &WaveState, dist: &VorticityDistribution) -> Vec<f64> {
    let mut out = Vec::with_capacity(state.nx * (state.ny - 1));
    for j in 1..state.ny {
        for i in 0..state.nx {
            out.push(pde_defect(state, dist, i, j));
        }
    }
    out
}

/// Residual vector in `layout` order.
pub(crate) fn residual_vector(state: &WaveState, dist: &VorticityDistribution, layout: &Layout) -> Vec<f64> {
    let mut out = vec![0.0; layout.size()];
    for i in 0..layout.nxu() {
        for j in 1..state.ny {
            out[layout.psi_col(i, j)] = pde_defect(state, dist, i, j);
        }
        out[layout.eta_col(i)] = bernoulli_defect(state, i);
    }
    if let Some(height) = layout.height {
        out[layout.r_col()] = state.eta[0] - state.eta[state.nx / 2] - height;
    }
    out
}

/// Nine-point stencil (i′, j′, coefficient) of the linear part
/// Ψ_XX + BΨ_Xq + CΨ_qq + EΨ_q at interior node (i, j).
pub(crate) fn stencil(state: &WaveState, i: usize, j: usize) -> [(usize, usize, f64); 9] {
    let c = column(state, i);
    let (dx, dq) = (state.dx(), state.dq());
    let q = state.q(j);
    let (e, ep, epp) = (c.eta, c.deta, c.ddeta);
    let b = -2.0 * q * ep / e;
    let cc = (q * q * ep * ep + 1.0) / (e * e);
    let ee = q * (2.0 * ep * ep / (e * e) - epp / e);
    let bx = b / (4.0 * dx * dq);
    [
        (i, j, -2.0 / (dx * dx) - 2.0 * cc / (dq * dq)),
        (c.ip, j, 1.0 / (dx * dx)),
        (c.im, j, 1.0 / (dx * dx)),
        (i, j + 1, cc / (dq * dq) + ee / (2.0 * dq)),
        (i, j - 1, cc / (dq * dq) - ee / (2.0 * dq)),
        (c.ip, j + 1, bx),
        (c.ip, j - 1, -bx),
        (c.im, j + 1, -bx),
        (c.im, j - 1, bx),
    ]
}

/// Jacobian entries (row, col, value) of [`residual_vector`]; duplicates are
/// meant to be summed.
pub(crate) fn jacobian_triplets(
    state: &WaveState,
    dist: &VorticityDistribution,
    layout: &Layout,
) -> Vec<(usize, usize, f64)> {
    let (ny, dx, dq) = (state.ny, state.dx(), state.dq());
    let mut t = Vec::with_capacity(layout.size() * 14);

    for i in 0..layout.nxu() {
        let c = column(state, i);
        let (e, ep, epp) = (c.eta, c.deta, c.ddeta);
        let p = |i: usize, j: usize| state.psi_at(i, j);

        for j in 1..ny {
            let row = layout.psi_col(i, j);
            let q = state.q(j);
            for (ii, jj, v) in stencil(state, i, j) {
                if (1..ny).contains(&jj) {
                    t.push((row, layout.psi_col(ii, jj), v));
                }
            }
            t.push((row, layout.psi_col(i, j), dist.derivative(p(i, j))));

            let pxq = (p(c.ip, j + 1) - p(c.ip, j - 1) - p(c.im, j + 1) + p(c.im, j - 1)) / (4.0 * dx * dq);
            let pqq = (p(i, j + 1) - 2.0 * p(i, j) + p(i, j - 1)) / (dq * dq);
            let pq = (p(i, j + 1) - p(i, j - 1)) / (2.0 * dq);

            let b_e = 2.0 * q * ep / (e * e);
            let b_ep = -2.0 * q / e;
            let c_e = -2.0 * (q * q * ep * ep + 1.0) / (e * e * e);
            let c_ep = 2.0 * q * q * ep / (e * e);
            let e_e = q * (-4.0 * ep * ep / (e * e * e) + epp / (e * e));
            let e_ep = 4.0 * q * ep / (e * e);
            let e_epp = -q / e;

            let via_slope = (b_ep * pxq + c_ep * pqq + e_ep * pq) / (2.0 * dx);
            let via_curv = e_epp * pq / (dx * dx);
            t.push((row, layout.eta_col(i), b_e * pxq + c_e * pqq + e_e * pq - 2.0 * via_curv));
            t.push((row, layout.eta_col(c.ip), via_slope + via_curv));
            t.push((row, layout.eta_col(c.im), -via_slope + via_curv));
        }

        // Bernoulli row; the top row of Ψ is prescribed and carries no unknowns.
        let row = layout.eta_col(i);
        let (g, pp) = surface_gradient(state, i);
        let ds_dp = -2.0 * g * ep / e + 2.0 * pp / (e * e);
        t.push((row, layout.psi_col(i, ny - 1), ds_dp * (-2.0 / dq)));
        if ny - 2 >= 1 {
            t.push((row, layout.psi_col(i, ny - 2), ds_dp * (0.5 / dq)));
        }
        let ds_de = 2.0 * g * ep * pp / (e * e) - 2.0 * pp * pp / (e * e * e) + 2.0;
        let ds_dep = -2.0 * g * pp / e;
        t.push((row, layout.eta_col(i), ds_de));
        t.push((row, layout.eta_col(c.ip), ds_dep / (2.0 * dx)));
        t.push((row, layout.eta_col(c.im), -ds_dep / (2.0 * dx)));
        if layout.height.is_some() {
            t.push((row, layout.r_col(), -3.0));
        }
    }

    if layout.height.is_some() {
        let row = layout.r_col();
        t.push((row, layout.eta_col(0), 1.0));
        t.push((row, layout.eta_col(state.nx / 2), -1.0));
    }
    t
}
