use num_complex::Complex64 as C64;
use proptest::prelude::*;

use mmit::dynamics::{mean_field_rhs, Eq3Variant};
use mmit::oracle::{oracle_chi, OracleConfig};
use mmit::params::validate_params;
use mmit::response::features::re_zero_crossings;
use mmit::response::{
    chi1_closed_form, chi1_linear_system, chi1_with_derivative, detect_features, group_index_with_state, spectrum,
    Eq10Variant, Path,
};
use mmit::sweep::{run_sweep, write_sweep_csv, Axis, Quantity, SweepSpec};
use mmit::{majorana_splitting, solve_population_inversion, steady_state, GroupIndexScale, ModelParams, ProbeGrid};

fn log_uniform(lo: f64, hi: f64) -> impl Strategy<Value = f64> {
    (lo.ln()..hi.ln()).prop_map(f64::exp)
}

prop_compose! {
    fn params()(
        gamma1 in log_uniform(1e-3, 1.0),
        gamma2 in log_uniform(1e-2, 1.0),
        kappa_m in log_uniform(1e-4, 1e-1),
        beta1 in log_uniform(1e-3, 0.3),
        beta2 in log_uniform(1e-3, 0.3),
        delta_c in -2.0..2.0f64,
        delta_m in -2.0..2.0f64,
        omega_c_rabi_sq in 0.0..0.02f64,
    ) -> ModelParams {
        ModelParams { delta_c, delta_m, beta1, beta2, gamma1, gamma2, kappa_m, omega_c_rabi_sq }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn stationary_residuals_vanish(p in params()) {
        let ss = steady_state(&p).unwrap();
        prop_assert!((-1.0..=0.0).contains(&ss.w0));
        let d = mean_field_rhs(&p, Eq3Variant::Symmetrized, None, 0.0, &ss.mean_field());
        let scale = p.residual_scale();
        for r in [d.sz.norm(), d.sm.norm(), d.f.norm()] {
            prop_assert!(r < 1e-10 * scale, "residual {r:e}");
        }
    }

    #[test]
    fn steady_solver_is_deterministic(p in params()) {
        let a = solve_population_inversion(&p).unwrap();
        let b = solve_population_inversion(&p).unwrap();
        prop_assert_eq!(a.w0.to_bits(), b.w0.to_bits());
        prop_assert_eq!(a, b);
    }

    #[test]
    fn two_level_inversion_is_saturation_form(
        gamma1 in log_uniform(1e-3, 1.0),
        gamma2 in log_uniform(1e-3, 1.0),
        delta_c in -2.0..2.0f64,
        lo in 0.0..0.01f64,
        extra in 1e-4..0.01f64,
    ) {
        let w = |omega_sq: f64| {
            let p = ModelParams { beta1: 0.0, beta2: 0.0, gamma1, gamma2, delta_c, omega_c_rabi_sq: omega_sq, ..ModelParams::reference() };
            steady_state(&p).unwrap().w0
        };
        let l = gamma1 * (delta_c * delta_c + gamma2 * gamma2);
        prop_assert!((w(lo) + l / (l + 4.0 * gamma2 * lo)).abs() < 1e-12);
        prop_assert!(w(lo + extra) > w(lo));
    }

    #[test]
    fn closed_form_derived_matches_linear_system(p in params(), ds in -3.0..3.0f64) {
        let ss = steady_state(&p).unwrap();
        let delta = ds + p.delta_c;
        let a = chi1_linear_system(&p, &ss, delta).unwrap();
        let b = chi1_closed_form(&p, &ss, delta, Eq10Variant::Derived).unwrap();
        prop_assert!((a - b).norm() / a.norm().max(1.0) < 1e-8, "{a} vs {b}");
    }

    #[test]
    fn resonant_undriven_spectrum_is_symmetric(
        beta1 in log_uniform(1e-3, 0.3),
        beta2 in log_uniform(1e-3, 0.3),
        gamma2 in log_uniform(1e-2, 1.0),
        kappa_m in log_uniform(1e-4, 1e-1),
        ds in 0.0..3.0f64,
    ) {
        let p = ModelParams { beta1, beta2, gamma2, kappa_m, omega_c_rabi_sq: 0.0, ..ModelParams::reference() };
        let ss = steady_state(&p).unwrap();
        let plus = chi1_linear_system(&p, &ss, ds).unwrap();
        let minus = chi1_linear_system(&p, &ss, -ds).unwrap();
        prop_assert!((plus.im - minus.im).abs() < 1e-10);
        prop_assert!((plus.re + minus.re).abs() < 1e-10);
    }

    #[test]
    fn richardson_matches_exact_derivative(p in params()) {
        let ss = steady_state(&p).unwrap();
        let (_, exact) = chi1_with_derivative(&p, &ss, p.delta_c).unwrap();
        let r = group_index_with_state(&p, &ss, &GroupIndexScale::default(), Path::LinearSystem, Eq10Variant::Derived).unwrap();
        prop_assert!(
            (r.derivative_estimate - exact.re).abs() < 1e-5 * exact.re.abs().max(1.0),
            "{} vs {}", r.derivative_estimate, exact.re
        );
    }

    #[test]
    fn symmetric_grids_are_exact_negatives(half in 1e-3..10.0f64, n in 2usize..500) {
        let pts = ProbeGrid::new(-half, half, n).unwrap().points();
        prop_assert_eq!(pts.len(), n);
        for k in 0..n {
            prop_assert_eq!(pts[k], -pts[n - 1 - k]);
        }
        prop_assert!(pts.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn validation_is_idempotent(
        values in proptest::collection::vec(
            prop_oneof![Just(f64::NAN), Just(f64::INFINITY), Just(0.0), -1.0..1.0f64],
            8,
        )
    ) {
        let mut p = ModelParams::reference();
        for (field, v) in ModelParams::FIELDS.iter().zip(&values) {
            p.set(field, *v).unwrap();
        }
        let before = format!("{p:?}");
        let first = validate_params(&p);
        let second = validate_params(&p);
        prop_assert_eq!(first, second);
        prop_assert_eq!(before, format!("{p:?}"));
    }

    #[test]
    fn majorana_splitting_decreases_with_length(
        l in 0.0..50.0f64,
        dl in 1e-3..10.0f64,
        xi in 0.1..10.0f64,
        prefactor in 1e-3..10.0f64,
    ) {
        let short = majorana_splitting(l, xi, prefactor).unwrap();
        let long = majorana_splitting(l + dl, xi, prefactor).unwrap();
        prop_assert!(long < short);
    }
}

fn small_sweep() -> SweepSpec {
    SweepSpec {
        base: ModelParams { delta_m: -0.5, ..ModelParams::reference() },
        axis1: Axis::new("beta2", vec![0.0, 0.1]),
        axis2: Some(Axis::linspace("omega_c_rabi_sq", 0.001, 0.02, 7)),
        quantity: Quantity::GroupIndex,
        grid: ProbeGrid::standard(),
        path: Path::LinearSystem,
        eq10: Eq10Variant::Derived,
        scale: GroupIndexScale::default(),
    }
}

fn sweep_csv(workers: usize) -> Vec<u8> {
    let mut buf = Vec::new();
    write_sweep_csv(&mut buf, &run_sweep(&small_sweep(), workers).unwrap()).unwrap();
    buf
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn sweep_output_is_schedule_independent(workers in 1usize..9) {
        prop_assert_eq!(sweep_csv(workers), sweep_csv(1));
    }
}

fn fig2a_member(beta2: f64) -> Vec<mmit::response::SusceptibilityPoint> {
    let p = ModelParams { beta2, ..ModelParams::reference() };
    spectrum(&p, &ProbeGrid::standard(), Path::LinearSystem, Eq10Variant::Derived).unwrap()
}

#[test]
fn dispersion_crosses_zero_inside_each_transparency_window() {
    let step = ProbeGrid::standard().step();
    for beta2 in [0.0, 0.05, 0.1, 0.15] {
        let spec = fig2a_member(beta2);
        let features = detect_features(&spec).unwrap();
        let crossings = re_zero_crossings(&spec);
        for dip in &features.dips {
            let nearest = crossings.iter().map(|x| (x - dip.delta_s).abs()).fold(f64::INFINITY, f64::min);
            assert!(nearest <= step, "beta2={beta2}: dip at {} has nearest Re χ zero {nearest} away", dip.delta_s);
        }
    }
}

#[test]
fn splitting_grows_with_beta2() {
    let splittings: Vec<f64> = [0.0, 0.05, 0.1, 0.15]
        .into_iter()
        .map(|b| detect_features(&fig2a_member(b)).unwrap().splitting.unwrap())
        .collect();
    assert!(splittings.windows(2).all(|w| w[1] >= w[0]), "{splittings:?}");
}

#[test]
fn oracle_is_first_order_and_step_independent() {
    let p = ModelParams { delta_c: 0.5, delta_m: -0.5, kappa_m: 0.01, ..ModelParams::reference() };
    let delta = 0.25;
    let base = OracleConfig::for_params(&p, delta);
    let a = oracle_chi(&p, &base).unwrap();
    assert!(a.second_harmonic_ratio < 0.1, "second harmonic ratio {}", a.second_harmonic_ratio);
    let b = oracle_chi(&p, &OracleConfig { dt_max: base.dt_max / 2.0, ..base }).unwrap();
    let rel = (a.chi - b.chi).norm() / a.chi.norm();
    assert!(rel < 1e-3, "halving dt_max changed χ by {rel:e}");
    let exact: C64 = chi1_linear_system(&p, &steady_state(&p).unwrap(), delta).unwrap();
    assert!((a.chi - exact).norm() < 1e-2 * exact.norm());
}

#[test]
fn richardson_tracks_exact_derivative_on_group_index_recipes() {
    for id in ["fig4a", "fig4b", "fig6a", "fig6b", "fig6c", "fig10a", "fig10b", "fig10c", "fig10d"] {
        let spec = mmit::figures::recipe(id).unwrap().spec;
        for index in 0..spec.len() {
            let (coords, p) = spec.cell(index).unwrap();
            let ss = steady_state(&p).unwrap();
            let (_, exact) = chi1_with_derivative(&p, &ss, p.delta_c).unwrap();
            let r = group_index_with_state(&p, &ss, &GroupIndexScale::default(), Path::LinearSystem, Eq10Variant::Derived)
                .unwrap();
            let err = (r.derivative_estimate - exact.re).abs() / exact.re.abs().max(1.0);
            assert!(err < 1e-5, "{id} {coords:?}: relative error {err:e}");
        }
    }
}
