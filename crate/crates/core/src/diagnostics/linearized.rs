//! First-order model of the w-problem for a manufactured surface:
//!
//!   ∇²w + ω′(U)w = −ω′(U)u − ∇²u  in {0 < y < h − ζ},  w = 0 on both walls,
//!
//! discretised with the same mapped stencil as the nonlinear solver.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::energy::{default_delta, lemma2_rhs, weighted_energy_of};
use super::DiagnosticsError;
use crate::stream::StreamSolution;
use crate::vorticity::VorticityDistribution;
use crate::wavesolver::{solve_sparse, stencil, WaveState};

/// w and u on the mapped grid of η = h − ζ.
pub struct LinearizedSolution {
    pub geometry: WaveState,
    pub u: Vec<f64>,
    pub w: Vec<f64>,
}

pub fn solve_linearized_w(
    sol: &StreamSolution,
    dist: &VorticityDistribution,
    zeta: &[f64],
    period: f64,
    ny: usize,
) -> Result<LinearizedSolution, DiagnosticsError> {
    let nx = zeta.len();
    let eta: Vec<f64> = zeta.iter().map(|z| sol.h - z).collect();
    let geometry = WaveState::sampled(period, nx, ny, eta, sol.head(), |_, y| sol.u(y))
        .map_err(|e| DiagnosticsError::InvalidInput(e.to_string()))?;
    let mut u = vec![0.0; nx * (ny + 1)];
    for j in 0..=ny {
        for i in 0..nx {
            u[j * nx + i] = (1.0 - sol.u(geometry.eta[i])) * geometry.q(j);
        }
    }
    let col = |i: usize, j: usize| (j - 1) * nx + i;
    let n = nx * (ny - 1);
    let mut entries = Vec::with_capacity(n * 10);
    let mut rhs = vec![0.0; n];
    for j in 1..ny {
        for i in 0..nx {
            let row = col(i, j);
            let wp = dist.derivative(geometry.psi_at(i, j));
            let mut lap_u = 0.0;
            for (ii, jj, c) in stencil(&geometry, i, j) {
                lap_u += c * u[jj * nx + ii];
                if (1..ny).contains(&jj) {
                    entries.push((row, col(ii, jj), c));
                }
            }
            entries.push((row, row, wp));
            rhs[row] = -wp * u[j * nx + i] - lap_u;
        }
    }
    let interior = solve_sparse(n, &entries, &rhs).map_err(|e| DiagnosticsError::InvalidInput(e.to_string()))?;
    let mut w = vec![0.0; nx * (ny + 1)];
    for j in 1..ny {
        for i in 0..nx {
            w[j * nx + i] = interior[col(i, j)];
        }
    }
    Ok(LinearizedSolution { geometry, u, w })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingProbe {
    pub amplitudes: Vec<f64>,
    pub energies: Vec<f64>,
    pub lemma2_rhs: Vec<f64>,
    pub ratios: Vec<f64>,
    /// Least-squares slope of log energy against log amplitude.
    pub slope: f64,
    pub ratio_max: f64,
    /// ratio(a_last) / ratio(a_first).
    pub ratio_growth: f64,
    pub delta: f64,
    pub period: f64,
}

impl ScalingProbe {
    /// Ratios neither exceed `cap` nor rise monotonically by more than 2×.
    pub fn ratio_bounded(&self, cap: f64) -> bool {
        let monotone = self.ratios.windows(2).all(|w| w[1] >= w[0]);
        self.ratio_max < cap && !(monotone && self.ratio_growth > 2.0)
    }
}

fn log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let num: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    num / den
}

/// Energy of the linearised w and its ratio to [`lemma2_rhs`] for ζ = a·cos(2πx/L)
/// over the given amplitudes, at t = 0 and δ from [`default_delta`] unless
/// supplied.
pub fn quartic_scaling_probe(
    sol: &StreamSolution,
    dist: &VorticityDistribution,
    amplitudes: &[f64],
    period: f64,
    nx: usize,
    ny: usize,
    delta: Option<f64>,
) -> Result<ScalingProbe, DiagnosticsError> {
    if amplitudes.len() < 2 || amplitudes.iter().any(|&a| !(a > 0.0)) {
        return Err(DiagnosticsError::InvalidInput(
            "scaling probe needs at least two positive amplitudes".into(),
        ));
    }
    let delta = match delta {
        Some(d) => d,
        None => default_delta(dist.sup_derivative(), sol.h)?,
    };
    let k = 2.0 * PI / period;
    let mut energies = Vec::new();
    let mut rhs = Vec::new();
    for &a in amplitudes {
        let zeta: Vec<f64> = (0..nx).map(|i| a * (k * i as f64 * period / nx as f64).cos()).collect();
        let lin = solve_linearized_w(sol, dist, &zeta, period, ny)?;
        energies.push(weighted_energy_of(&lin.w, &lin.geometry.eta, period, ny, delta, 0.0)?);
        rhs.push(lemma2_rhs(&zeta, period, delta, 0.0)?);
    }
    let ratios: Vec<f64> = energies.iter().zip(&rhs).map(|(e, r)| e / r).collect();
    let ratio_max = ratios.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    Ok(ScalingProbe {
        slope: log_slope(amplitudes, &energies),
        ratio_max,
        ratio_growth: ratios[ratios.len() - 1] / ratios[0],
        amplitudes: amplitudes.to_vec(),
        energies,
        lemma2_rhs: rhs,
        ratios,
        delta,
        period,
    })
}
