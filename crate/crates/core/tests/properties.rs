use std::f64::consts::PI;

use proptest::prelude::*;

use stillwave::diagnostics::*;
use stillwave::special::{elliptic_f, singular_quadrature, SingularIntegrandSpec};
use stillwave::wavesolver::*;
use stillwave::*;

fn distribution() -> impl Strategy<Value = VorticityDistribution> {
    prop_oneof![
        (0.2f64..5.0).prop_map(|b| VorticityDistribution::constant(b).unwrap()),
        (0.3f64..3.0).prop_map(|b| VorticityDistribution::linear(b).unwrap()),
        (0.5f64..2.0, 1.05f64..2.0).prop_map(|(b, r)| VorticityDistribution::quadratic_truncated(b, r).unwrap()),
    ]
}

fn first_integral_defect(sol: &StreamSolution, dist: &VorticityDistribution) -> f64 {
    let s = sol.profile.s();
    sol.profile
        .u_values()
        .iter()
        .zip(sol.profile.uy_values())
        .map(|(u, uy)| (uy * uy + 2.0 * dist.antiderivative(*u) - s * s).abs())
        .fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn family_members_are_still_flat_states(dist in distribution()) {
        let fam = still_depth_family(&dist, 2).unwrap();
        prop_assert!(!fam.is_empty());
        for sol in &fam {
            prop_assert!((sol.u(sol.h) - 1.0).abs() < 1e-8);
            prop_assert!(sol.still && sol.surface_speed.abs() < 1e-7);
            prop_assert!(first_integral_defect(sol, &dist) < 1e-9);
        }
        for w in fam.windows(2) {
            prop_assert!(w[1].h > w[0].h);
        }
    }

    #[test]
    fn quadrature_depth_matches_arrival_height(dist in distribution()) {
        let h0 = still_depth_h0(&dist).unwrap();
        let s0 = compute_s0(&dist).s0;
        let arrival = StreamSolution::from_slope(&dist, s0).unwrap();
        prop_assert!((arrival.h - h0).abs() < 1e-7, "{} vs {}", arrival.h, h0);
    }

    #[test]
    fn linear_profiles_are_sines(b in 0.2f64..4.0, which in 0usize..3) {
        let s = [0.5, 1.0, 2.0][which];
        let d = VorticityDistribution::linear(b).unwrap();
        let prof = solve_cauchy(&d, s, 3.0).unwrap();
        for i in 0..=60 {
            let y = 3.0 * i as f64 / 60.0;
            let exact = (b.sqrt() * y).sin() * s / b.sqrt();
            prop_assert!((prof.u(y) - exact).abs() < 1e-8);
        }
    }

    #[test]
    fn constant_vorticity_is_always_covered(b in 0.05f64..10.0) {
        let d = VorticityDistribution::constant(b).unwrap();
        let sol = still_depth_family(&d, 0).unwrap().remove(0);
        let rep = check_theorem1(&d, &sol, 1.0);
        prop_assert_eq!(rep.mu, 0.0);
        prop_assert!(rep.applicable);
    }

    #[test]
    fn linear_theorem_covers_only_the_shallowest(b in 0.3f64..3.0) {
        let d = VorticityDistribution::linear(b).unwrap();
        let fam = still_depth_family(&d, 2).unwrap();
        for (n, sol) in fam.iter().enumerate() {
            prop_assert_eq!(check_theorem1(&d, sol, 1.0).applicable, n == 0);
        }
    }

    #[test]
    fn polynomial_quadrature_is_exact(c in prop::array::uniform4(-3.0f64..3.0), a in -1.0f64..0.5, len in 0.1f64..2.0) {
        let b = a + len;
        let p = |x: f64| c[0] + x * (c[1] + x * (c[2] + x * c[3]));
        let prim = |x: f64| x * (c[0] + x * (c[1] / 2.0 + x * (c[2] / 3.0 + x * c[3] / 4.0)));
        let v = singular_quadrature(&SingularIntegrandSpec::new(p, 0.0, 0.0), a, b, 1e-12).unwrap();
        prop_assert!((v - (prim(b) - prim(a))).abs() < 1e-10);
    }

    #[test]
    fn elliptic_integral_increases(phi in 0.05f64..1.5, alpha in 0.05f64..1.5, dp in 1e-3f64..0.05, da in 1e-3f64..0.05) {
        let base = elliptic_f(phi, alpha).unwrap();
        prop_assert!(elliptic_f(phi + dp, alpha).unwrap() > base);
        prop_assert!(elliptic_f(phi, alpha + da).unwrap() > base);
    }

    #[test]
    fn sturm_profile_has_no_interior_zero(dist in distribution(), k in 0.0f64..12.0) {
        let sol = still_depth_family(&dist, 0).unwrap().remove(0);
        prop_assume!(check_theorem1(&dist, &sol, 1.0).applicable);
        let prof = dispersion_profile(&sol, &dist, k, sol.h).unwrap();
        for i in 1..=500 {
            prop_assert!(prof.f(sol.h * i as f64 / 500.0).0 > 0.0);
        }
    }

    #[test]
    fn windows_are_translation_invariant(
        c in prop::array::uniform4(-0.1f64..0.1),
        l in 1.0f64..6.0,
        t in -3.0f64..3.0,
        m in -4i32..5,
        p in 1u32..3,
    ) {
        let nx = 48;
        let z: Vec<f64> = (0..nx)
            .map(|i| {
                let x = 2.0 * PI * i as f64 / nx as f64;
                c[0] + c[1] * x.cos() + c[2] * (2.0 * x).sin() + c[3] * (3.0 * x).cos()
            })
            .collect();
        let base = windowed_norm(&z, l, t, p).unwrap();
        let shifted = windowed_norm(&z, l, t + m as f64 * l, p).unwrap();
        prop_assert!((base - shifted).abs() < 1e-10);
        prop_assert!(base >= 0.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn newton_outputs_satisfy_bernoulli(b in 0.5f64..2.0, a in 1e-3f64..0.04, l in 2.0f64..8.0) {
        let d = VorticityDistribution::constant(b).unwrap();
        let sol = still_depth_family(&d, 0).unwrap().remove(0);
        let mut start = WaveState::stretched(&sol, l, 32, 16, a).unwrap();
        start.r = 2.0 * sol.h / 3.0;
        let params = NewtonParams::default();
        let out = newton_solve(&start, &d, &params, &SolveOptions::default()).unwrap();
        let st = &out.state;
        let dn = normal_derivative(&st.psi, st).unwrap();
        for i in 0..st.nx {
            prop_assert!((dn[i] * dn[i] + 2.0 * st.eta[i] - 3.0 * st.r).abs() < 10.0 * params.tol);
            prop_assert_eq!(st.psi_at(i, 0), 0.0);
            prop_assert_eq!(st.psi_at(i, st.ny), 1.0);
            prop_assert!(st.eta[i] > 0.0);
        }
        let f = perturbation_fields(st, &sol).unwrap();
        prop_assert!(f.zeta.iter().all(|&z| z >= -1e-10));
        prop_assert!(bernoulli_check_squared(st, &sol).unwrap() < 10.0 * params.tol);
    }

    #[test]
    fn w_vanishes_on_both_walls(b in 0.5f64..3.0, a in 1e-3f64..0.05, l in 1.0f64..8.0) {
        let d = VorticityDistribution::constant(b).unwrap();
        let sol = still_depth_family(&d, 0).unwrap().remove(0);
        let st = WaveState::stretched(&sol, l, 24, 12, a).unwrap();
        let f = perturbation_fields(&st, &sol).unwrap();
        for i in 0..st.nx {
            prop_assert!(f.w[i].abs() < 1e-12);
            prop_assert!(f.w[st.ny * st.nx + i].abs() < 1e-9);
        }
    }

    #[test]
    fn reports_are_nonnegative(a in 1e-3f64..0.05, t in -2.0f64..2.0) {
        let d = VorticityDistribution::constant(2.0).unwrap();
        let sol = still_depth_family(&d, 0).unwrap().remove(0);
        let st = WaveState::stretched(&sol, 4.0, 32, 16, a).unwrap();
        let r = diagnose(&st, &sol, &d, t, None).unwrap();
        for v in [r.delta, r.lemma2_lhs, r.lemma2_rhs, r.trace_norm, r.bernoulli_residual, r.slope_sup] {
            prop_assert!(v >= 0.0);
        }
        prop_assert!(r.windowed_norms.values().all(|&v| v >= 0.0));
        prop_assert_eq!(r.ratio, Some(r.lemma2_lhs / r.lemma2_rhs));
    }
}

#[test]
fn sweep_is_deterministic() {
    let d = VorticityDistribution::constant(1.0).unwrap();
    let sol = still_depth_family(&d, 0).unwrap().remove(0);
    let settings = SweepSettings {
        nx: 32,
        ny: 16,
        ..SweepSettings::default()
    };
    let run = || {
        let rep = nonexistence_sweep(&sol, &d, &[0.005, 0.02], &[2.0, 4.0], &settings).unwrap();
        serde_json::to_string(&rep).unwrap()
    };
    assert_eq!(run(), run());
}
