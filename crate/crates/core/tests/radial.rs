use harvest_core::geometry::{tortoise, tortoise_inverse, SpacetimeParams};
use harvest_core::radial::*;
use harvest_core::validation::ode_in_mode;
use num_complex::Complex64 as C;
use proptest::prelude::*;

const UNIT: SpacetimeParams = SpacetimeParams { mass: 1.0 };

fn opts() -> SolverOptions {
    SolverOptions::default()
}

#[test]
fn potential_values() {
    assert_eq!(rw_potential(0, 2.0).unwrap(), 0.0);
    assert!((rw_potential(1, 4.0).unwrap() - 5.0 / 64.0).abs() < 1e-16);
    assert!(rw_potential(0, 1e12).unwrap() < 1e-35);
    assert!(rw_potential(3, 1.5).is_err());
}

proptest! {
    #[test]
    fn potential_is_nonnegative(l in 0usize..60, r in 2.0f64..1e4) {
        prop_assert!(rw_potential(l, r).unwrap() >= 0.0);
    }
}

#[test]
fn jaffe_leading_coefficient() {
    let a = jaffe_coefficients(ModeIndex::new(3, 0.0), 1);
    assert_eq!(a[0], C::new(1.0, 0.0));
    let w = 0.7;
    let a = jaffe_coefficients(ModeIndex::new(3, w), 1);
    assert!((a[0] - (-C::i() * 4.0 * w).exp()).norm() < 1e-15);
}

#[test]
fn jaffe_recurrence_residual_vanishes() {
    for (l, w) in [(0, 0.3), (2, 1.1), (7, 0.05)] {
        let mode = ModeIndex::new(l, w);
        let a = jaffe_coefficients(mode, 40);
        let ll = (l * (l + 1)) as f64;
        let wb = 2.0 * w;
        for n in 1..39 {
            let (al, be, ga) = jaffe_recurrence(n as f64, wb, ll);
            let res = a[n + 1] * al + a[n] * be + a[n - 1] * ga;
            let scale = (a[n + 1] * al).norm() + (a[n] * be).norm() + (a[n - 1] * ga).norm();
            assert!(res.norm() <= 1e-13 * scale, "l={l} n={n}: {res}");
        }
    }
}

#[test]
fn jaffe_matches_horizon_integration_at_r6() {
    let mode = ModeIndex::new(2, 0.5);
    let rs = tortoise(&UNIT, 6.0).unwrap();
    let ode = ode_in_mode(mode, -80.0, &[rs], 1e-14).unwrap()[0];
    let j = solve_in_jaffe(mode, 6.0).unwrap();
    assert!((j.value - ode.0).norm() / ode.0.norm() < 1e-10, "{} vs {}", j.value, ode.0);
    assert!((j.deriv - ode.1).norm() / ode.1.norm() < 1e-9);
}

#[test]
fn jaffe_rejects_bad_input() {
    assert!(solve_in_jaffe(ModeIndex::new(0, 0.0), 6.0).is_err());
    assert!(solve_in_jaffe(ModeIndex::new(0, 0.5), 2.0).is_err());
}

#[test]
fn up_mode_is_unit_at_outer_edge() {
    // Unit outgoing amplitude up to the O(1/(ωr)^2) tail of the asymptotic series.
    let mode = ModeIndex::new(0, 1.0);
    let dev = |rmax: f64| {
        let sol = solve_up(mode, &[-4.0, 10.0, rmax], &opts()).unwrap();
        let last = sol.samples.last().unwrap();
        (last.value.norm() * last.log_scale.exp() - 1.0).abs()
    };
    let (d1, d2) = (dev(200.0), dev(2000.0));
    assert!(d1 < 1e-6 && d2 < 1e-8 && d2 < d1 / 50.0, "{d1:e} {d2:e}");
}

#[test]
fn up_series_failure_is_reported() {
    let mode = ModeIndex::new(30, 0.01);
    let grid = [-2.0, 0.0, 5.0];
    assert!(matches!(solve_up(mode, &grid, &opts()), Err(harvest_core::Error::Convergence(_))));
}

#[test]
fn wronskian_constant_over_grid() {
    for (l, w) in [(0, 1.0), (3, 0.2), (10, 2.5)] {
        let mode = ModeIndex::new(l, w);
        let radii: Vec<f64> = (0..=17).map(|k| tortoise_inverse(&UNIT, -4.0 + k as f64).unwrap()).collect();
        let ins = solve_in(mode, &radii, &opts()).unwrap();
        let ups = solve_up_at(mode, &radii, &opts()).unwrap();
        let (_, spread) = extract_with_spread(mode, &ins, &ups, 1.0).unwrap();
        assert!(spread < 1e-8, "l={l} w={w}: {spread:e}");
    }
}

#[test]
fn up_mode_matches_tighter_integration() {
    let mode = ModeIndex::new(0, 1.0);
    let radii = [3.0, 6.0, 12.0];
    let coarse = solve_up_at(mode, &radii, &opts()).unwrap();
    let fine = solve_up_at(mode, &radii, &SolverOptions { step_tol: 1e-13, ..opts() }).unwrap();
    for (a, b) in coarse.samples.iter().zip(&fine.samples) {
        let va = a.value * a.log_scale.exp();
        let vb = b.value * b.log_scale.exp();
        assert!((va - vb).norm() / vb.norm() < 1e-10, "r={}: {va} vs {vb}", a.r);
    }
}

#[test]
fn magnus_order_is_four() {
    let p = magnus_order(ModeIndex::new(0, 1.0), 30.0, 6.0, 200).unwrap();
    assert!((p - 4.0).abs() < 0.5, "{p}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn flux_is_conserved(l in 0usize..25, w in 0.002f64..6.0) {
        let s = solve_mode(ModeIndex::new(l, w), &[6.009], &opts()).unwrap();
        prop_assert!(s.coeffs.flux_in_error() < 1e-8, "in {:e}", s.coeffs.flux_in_error());
        prop_assert!(s.coeffs.flux_up_error() < 1e-8, "up {:e}", s.coeffs.flux_up_error());
        prop_assert!(s.wronskian_spread < 1e-8);
    }
}

#[test]
fn barrier_reflects_low_frequencies() {
    let s = solve_mode(ModeIndex::new(20, 0.05), &[6.0], &opts()).unwrap();
    assert!(s.coeffs.reflection_in() > 0.999);
}

#[test]
fn negative_frequency_is_conjugate() {
    let radii = [2.5, 6.009, 40.0];
    for (l, w) in [(0, 0.4), (5, 1.7)] {
        let p = solve_mode(ModeIndex::new(l, w), &radii, &opts()).unwrap();
        let n = solve_mode(ModeIndex::new(l, -w), &radii, &opts()).unwrap();
        for i in 0..radii.len() {
            assert_eq!(n.rbar_in[i], p.rbar_in[i].conj());
            assert_eq!(n.rbar_up[i], p.rbar_up[i].conj());
        }
    }
}

#[test]
fn high_frequency_up_mode_is_unit_after_rescaling() {
    let r = 6.0;
    let s = solve_mode(ModeIndex::new(0, 8.0), &[r], &opts()).unwrap();
    let v = (r * s.rbar_up[0]).norm_sqr();
    assert!((v - 1.0).abs() < 0.1, "{v}");
}

#[test]
fn rescaling_inverts_to_raw_solution() {
    let mode = ModeIndex::new(2, 0.9);
    let radii = [4.0, 9.0];
    let ins = solve_in(mode, &radii, &opts()).unwrap();
    let ups = solve_up_at(mode, &radii, &opts()).unwrap();
    let c = extract_coeffs(mode, &ins, &ups).unwrap();
    for smp in &ins.samples {
        let rb = rescaled_mode(smp, &c).unwrap();
        let raw = rb * smp.r * c.incidence * (c.log_scale - smp.log_scale).exp();
        assert!((raw - smp.value).norm() <= 1e-14 * smp.value.norm());
    }
}

#[test]
fn zero_frequency_is_rejected() {
    assert!(matches!(solve_mode(ModeIndex::new(1, 0.0), &[6.0], &opts()), Err(harvest_core::Error::Domain(_))));
}
