//! Discrete states of the free-boundary problem on the mapped strip
//! x ∈ [0, L) (periodic), q = y/η(x) ∈ [0, 1].

use serde::{Deserialize, Serialize};

use super::WaveError;
use crate::stream::StreamSolution;

/// ψ on the (nx) × (ny + 1) mapped grid, stored row-major in q:
/// `psi[j * nx + i]` ↔ (x_i, q_j) = (i·L/nx, j/ny).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WaveState {
    #[serde(rename = "period_L")]
    pub period: f64,
    pub nx: usize,
    pub ny: usize,
    pub psi: Vec<f64>,
    pub eta: Vec<f64>,
    pub r: f64,
}

impl WaveState {
    pub fn validate(&self) -> Result<(), WaveError> {
        if !(self.period > 0.0 && self.period.is_finite()) {
            return Err(WaveError::InvalidState(format!("period {} must be positive", self.period)));
        }
        if self.nx < 4 || self.ny < 3 {
            return Err(WaveError::InvalidState(format!(
                "grid {}x{} too small (need nx >= 4, ny >= 3)",
                self.nx, self.ny
            )));
        }
        if self.eta.len() != self.nx || self.psi.len() != self.nx * (self.ny + 1) {
            return Err(WaveError::InvalidState(format!(
                "array sizes eta {} / psi {} do not match grid {}x{}",
                self.eta.len(),
                self.psi.len(),
                self.nx,
                self.ny
            )));
        }
        if let Some(i) = self.eta.iter().position(|&e| !(e > 0.0)) {
            return Err(WaveError::SurfaceCollapse(format!("eta[{i}] = {} <= 0", self.eta[i])));
        }
        if self.psi.iter().any(|v| !v.is_finite()) || !self.r.is_finite() {
            return Err(WaveError::InvalidState("non-finite field values".into()));
        }
        Ok(())
    }

    pub fn dx(&self) -> f64 {
        self.period / self.nx as f64
    }

    pub fn dq(&self) -> f64 {
        1.0 / self.ny as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        i as f64 * self.dx()
    }

    pub fn q(&self, j: usize) -> f64 {
        j as f64 * self.dq()
    }

    #[inline]
    pub fn psi_at(&self, i: usize, j: usize) -> f64 {
        self.psi[j * self.nx + i]
    }

    /// (x, y) coordinates of mapped node (i, j).
    pub fn physical(&self, i: usize, j: usize) -> (f64, f64) {
        (self.x(i), self.q(j) * self.eta[i])
    }

    /// Fills ψ from a function of physical coordinates.
    pub fn sampled(
        period: f64,
        nx: usize,
        ny: usize,
        eta: Vec<f64>,
        r: f64,
        psi: impl Fn(f64, f64) -> f64,
    ) -> Result<Self, WaveError> {
        let mut state = Self {
            period,
            nx,
            ny,
            psi: vec![0.0; nx * (ny + 1)],
            eta,
            r,
        };
        if state.eta.len() != nx {
            return Err(WaveError::InvalidState(format!(
                "eta has {} values for nx = {nx}",
                state.eta.len()
            )));
        }
        for j in 0..=ny {
            for i in 0..nx {
                let (x, y) = state.physical(i, j);
                state.psi[j * nx + i] = psi(x, y);
            }
        }
        state.validate()?;
        Ok(state)
    }

    /// The stream solution itself: η ≡ h, ψ = U(y), 3r = U_y(h)² + 2h.
    pub fn flat(sol: &StreamSolution, period: f64, nx: usize, ny: usize) -> Result<Self, WaveError> {
        let mut state = Self::sampled(period, nx, ny, vec![sol.h; nx], sol.head(), |_, y| sol.u(y))?;
        state.impose_dirichlet();
        Ok(state)
    }

    /// Surface lowered by ζ = a·cos(2πx/L), ψ obtained by stretching U so that
    /// both boundary values hold exactly: Ψ(x, q) = U(q·h).
    pub fn stretched(
        sol: &StreamSolution,
        period: f64,
        nx: usize,
        ny: usize,
        amplitude: f64,
    ) -> Result<Self, WaveError> {
        let flat = Self::flat(sol, period, nx, ny)?;
        let k = 2.0 * std::f64::consts::PI / period;
        let eta: Vec<f64> = (0..nx)
            .map(|i| sol.h - amplitude * (k * flat.x(i)).cos())
            .collect();
        let state = Self { eta, ..flat };
        state.validate()?;
        Ok(state)
    }

    /// Sets ψ = 0 on q = 0 and ψ = 1 on q = 1.
    pub fn impose_dirichlet(&mut self) {
        let nx = self.nx;
        for i in 0..nx {
            self.psi[i] = 0.0;
            self.psi[self.ny * nx + i] = 1.0;
        }
    }

    /// max_i |h − η_i|.
    pub fn max_deviation(&self, h: f64) -> f64 {
        self.eta.iter().map(|e| (h - e).abs()).fold(0.0, f64::max)
    }

    pub fn mean_depth(&self) -> f64 {
        self.eta.iter().sum::<f64>() / self.nx as f64
    }

    /// Rows (x, η(x)).
    pub fn surface_csv(&self) -> String {
        let mut out = String::from("x,eta\n");
        for i in 0..self.nx {
            out.push_str(&format!("{},{}\n", self.x(i), self.eta[i]));
        }
        out
    }

    /// Rows (x, q, ψ).
    pub fn field_csv(&self) -> String {
        let mut out = String::from("x,q,psi\n");
        for j in 0..=self.ny {
            for i in 0..self.nx {
                out.push_str(&format!("{},{},{}\n", self.x(i), self.q(j), self.psi_at(i, j)));
            }
        }
        out
    }
}
