use std::f64::consts::PI;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use serde::Serialize;
use serde_json::{json, Value};

use stillwave::diagnostics::{diagnose, quartic_scaling_probe};
use stillwave::special::{elliptic_f, singular_quadrature, SingularIntegrandSpec};
use stillwave::stream::{is_still, Branch};
use stillwave::wavesolver::*;
use stillwave::*;

use crate::config::{Config, SolveMode};

/// What a subcommand produced: the report, extra files, and whether the
/// theorem's hypotheses held.
pub struct Outcome {
    pub report: Value,
    pub files: Vec<(String, String)>,
    pub not_applicable: bool,
}

impl Outcome {
    fn report(report: Value) -> Self {
        Self { report, files: Vec::new(), not_applicable: false }
    }
}

fn to_value(v: &impl Serialize) -> Value {
    serde_json::to_value(v).expect("reports serialise")
}

fn distribution(cfg: &Config) -> Result<VorticityDistribution> {
    make_distribution(cfg.vorticity.clone()).map_err(|e| anyhow!(e))
}

fn flow(cfg: &Config, dist: &VorticityDistribution) -> Result<StreamSolution> {
    let f = &cfg.flow;
    match (f.s, f.h) {
        (Some(s), Some(h)) => Ok(StreamSolution::at_depth(dist, s, h, None)?),
        (Some(s), None) => Ok(StreamSolution::from_slope(dist, s)?),
        (None, Some(_)) => bail!("flow.h needs flow.s"),
        (None, None) => {
            let index = f.index.unwrap_or(0);
            let family = still_depth_family(dist, cfg.k_max.max(index))?;
            family
                .into_iter()
                .nth(index)
                .ok_or_else(|| anyhow!("still family has no member with index {index}"))
        }
    }
}

fn flow_summary(sol: &StreamSolution) -> Value {
    json!({
        "s": sol.profile.s(),
        "h": sol.h,
        "surface_speed": sol.surface_speed,
        "still": sol.still,
        "head_r": sol.head(),
        "branch": sol.branch,
    })
}

fn still_flow(cfg: &Config, dist: &VorticityDistribution) -> Result<StreamSolution> {
    let sol = flow(cfg, dist)?;
    if !sol.still {
        bail!("the selected flow is not still (U_y(h) = {:e})", sol.surface_speed);
    }
    Ok(sol)
}

pub fn stream(cfg: &Config) -> Result<Outcome> {
    let dist = distribution(cfg)?;
    let sol = flow(cfg, &dist)?;
    let y_max = cfg.stream.y_max.unwrap_or(sol.h);
    let n = cfg.stream.samples.max(2);
    let prof = solve_cauchy(&dist, sol.profile.s(), y_max)?;
    let ys: Vec<f64> = (0..n).map(|i| y_max * i as f64 / (n - 1) as f64).collect();
    let (u, uy): (Vec<f64>, Vec<f64>) = ys.iter().map(|&y| prof.eval(y)).unzip();
    Ok(Outcome::report(json!({
        "flow": flow_summary(&sol),
        "turning_points": prof.turning_points(),
        "profile": { "y": ys, "U": u, "U_y": uy },
    })))
}

#[derive(Serialize)]
struct FamilyMember {
    index: usize,
    h: f64,
    branch: Option<Branch>,
    surface_speed: f64,
}

pub fn depths(cfg: &Config, details: bool) -> Result<Outcome> {
    let dist = distribution(cfg)?;
    let crit = compute_s0(&dist);
    let still = is_still(&dist, &crit);
    let mut report = json!({
        "s0": crit.s0,
        "tau0": crit.tau0,
        "degenerate": crit.degenerate,
        "still": still,
    });
    if still {
        let family = still_depth_family(&dist, cfg.k_max)?;
        report["h0"] = json!(still_depth_h0(&dist)?);
        report["y_minus"] = json!(monotone_interval_lower(&dist, crit.s0)?);
        report["depths"] = json!(family.iter().map(|s| s.h).collect::<Vec<_>>());
        report["family"] = to_value(
            &family
                .iter()
                .enumerate()
                .map(|(index, s)| FamilyMember { index, h: s.h, branch: s.branch, surface_speed: s.surface_speed })
                .collect::<Vec<_>>(),
        );
    }
    if details {
        report["details"] = elliptic_details()?;
    }
    Ok(Outcome::report(report))
}

/// ∫₀¹ (1 − τ³)^{−1/2} dτ against its elliptic form F(φ₀ \ 75°).
fn elliptic_details() -> Result<Value> {
    let spec = SingularIntegrandSpec::new(|t: f64| 1.0 / (1.0 + t + t * t).sqrt(), 0.0, -0.5);
    let integral = singular_quadrature(&spec, 0.0, 1.0, 1e-13)?;
    let s3 = 3f64.sqrt();
    let phi0 = ((s3 - 1.0) / (s3 + 1.0)).acos();
    let f = elliptic_f(phi0, 75f64.to_radians())?;
    Ok(json!({
        "cubic_integral": integral,
        "phi0_degrees": phi0.to_degrees(),
        "elliptic_F": f,
        "scaled_integral": 3f64.powf(0.25) * integral,
        "identity_defect": 3f64.powf(0.25) * integral - f,
        "sqrt3_F_squared": s3 * f * f,
        "pi_squared": PI * PI,
    }))
}

pub fn check(cfg: &Config) -> Result<Outcome> {
    let dist = distribution(cfg)?;
    let sol = flow(cfg, &dist)?;
    let rep = check_theorem1(&dist, &sol, cfg.slope_bound_b);
    Ok(Outcome { not_applicable: !rep.applicable, ..Outcome::report(to_value(&rep)) })
}

fn state_files(state: &WaveState, csv: bool) -> Vec<(String, String)> {
    let mut files = vec![("state.json".into(), serde_json::to_string_pretty(state).expect("state serialises"))];
    if csv {
        files.push(("surface.csv".into(), state.surface_csv()));
        files.push(("field.csv".into(), state.field_csv()));
    }
    files
}

pub fn solve(cfg: &Config, csv: bool) -> Result<Outcome> {
    let dist = distribution(cfg)?;
    let sol = flow(cfg, &dist)?;
    let s = &cfg.solve;
    match s.mode {
        SolveMode::Perturb => {
            let start = WaveState::stretched(&sol, s.wavelength, cfg.grid.nx, cfg.grid.ny, s.amplitude)?;
            let start = WaveState { r: sol.head(), ..start };
            let out = newton_solve(&start, &dist, &cfg.newton, &SolveOptions::default())?;
            let report = json!({
                "mode": "perturb",
                "flow": flow_summary(&sol),
                "amplitude": s.amplitude,
                "wavelength": s.wavelength,
                "iterations": out.iterations,
                "residual": out.residual,
                "r": out.state.r,
                "mean_depth": out.state.mean_depth(),
                "max_deviation": out.state.max_deviation(sol.h),
            });
            Ok(Outcome { files: state_files(&out.state, csv), ..Outcome::report(report) })
        }
        SolveMode::Branch => {
            let roots = find_bifurcation_points(&sol, &dist, s.k_min, s.k_max)?;
            let &k_star = roots
                .first()
                .ok_or_else(|| anyhow!("no dispersion root in [{}, {}]", s.k_min, s.k_max))?;
            let settings = ContinuationSettings {
                nx: cfg.grid.nx,
                ny: cfg.grid.ny,
                heights: s.heights.clone(),
                newton: cfg.newton,
            };
            let rep = continue_branch(&sol, &dist, k_star, &settings)?;
            let st = &rep.final_state;
            let report = json!({
                "mode": "branch",
                "flow": flow_summary(&sol),
                "roots": roots,
                "k_star": rep.k_star,
                "period": rep.period,
                "points": rep.points,
                "max_deviation": st.max_deviation(sol.h),
                "surface_variation": st.max_deviation(st.mean_depth()),
            });
            Ok(Outcome { files: state_files(st, csv), ..Outcome::report(report) })
        }
    }
}

/// Cap from STILLWAVE_THREADS; unset means machine parallelism.
fn thread_cap() -> Result<Option<usize>> {
    match std::env::var("STILLWAVE_THREADS") {
        Ok(v) => {
            let n: usize = v.trim().parse().with_context(|| format!("STILLWAVE_THREADS = {v:?}"))?;
            if n == 0 {
                bail!("STILLWAVE_THREADS must be positive");
            }
            Ok(Some(n))
        }
        Err(_) => Ok(None),
    }
}

pub fn sweep(cfg: &Config) -> Result<Outcome> {
    let dist = distribution(cfg)?;
    let sol = still_flow(cfg, &dist)?;
    let settings = SweepSettings {
        nx: cfg.grid.nx,
        ny: cfg.grid.ny,
        b_cap: cfg.sweep.b_cap,
        epsilon_proxy: cfg.sweep.epsilon_proxy,
        newton: cfg.newton,
    };
    let run = || nonexistence_sweep(&sol, &dist, &cfg.sweep.amplitudes, &cfg.sweep.wavelengths, &settings);
    let rep = match thread_cap()? {
        Some(n) => rayon::ThreadPoolBuilder::new().num_threads(n).build()?.install(run)?,
        None => run()?,
    };
    Ok(Outcome { not_applicable: rep.verdict == VERDICT_NOT_APPLICABLE, ..Outcome::report(to_value(&rep)) })
}

pub fn dispersion(cfg: &Config) -> Result<Outcome> {
    let dist = distribution(cfg)?;
    let sol = flow(cfg, &dist)?;
    let d = &cfg.dispersion;
    let n = d.samples.max(2);
    let samples = (0..n)
        .map(|i| {
            let k = d.k_min + (d.k_max - d.k_min) * i as f64 / (n - 1) as f64;
            Ok(json!({ "k": k, "sigma": dispersion_sigma(&sol, &dist, k)? }))
        })
        .collect::<Result<Vec<_>>>()?;
    let roots = find_bifurcation_points(&sol, &dist, d.k_min, d.k_max)?;
    Ok(Outcome::report(json!({
        "flow": flow_summary(&sol),
        "samples": samples,
        "roots": roots,
    })))
}

pub fn diagnose_cmd(cfg: &Config, state: Option<&Path>) -> Result<Outcome> {
    let dist = distribution(cfg)?;
    let sol = still_flow(cfg, &dist)?;
    let d = &cfg.diagnose;
    let st = match state {
        Some(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading state {}", path.display()))?;
            let st: WaveState =
                serde_json::from_str(&text).with_context(|| format!("parsing state {}", path.display()))?;
            st.validate()?;
            st
        }
        None => WaveState::stretched(&sol, d.wavelength, cfg.grid.nx, cfg.grid.ny, d.amplitude)?,
    };
    let mut report = to_value(&diagnose(&st, &sol, &dist, d.t, d.delta)?);
    if !d.probe_amplitudes.is_empty() {
        let probe =
            quartic_scaling_probe(&sol, &dist, &d.probe_amplitudes, d.wavelength, cfg.grid.nx, cfg.grid.ny, d.delta)?;
        report["probe"] = to_value(&probe);
    }
    Ok(Outcome::report(report))
}
