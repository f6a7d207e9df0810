use std::f64::consts::PI;

use harvest_core::geometry::*;
use proptest::prelude::*;

fn p() -> SpacetimeParams {
    SpacetimeParams::default()
}

fn bisect_tortoise(target: f64) -> f64 {
    let (mut lo, mut hi): (f64, f64) = (2.0 + 1e-14, 1e3);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid + 2.0 * (mid / 2.0 - 1.0).ln() < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn derived_constants() {
    let q = SpacetimeParams::new(2.5).unwrap();
    assert_eq!(q.horizon_radius(), 5.0);
    assert_eq!(q.surface_gravity() * 4.0 * q.mass, 1.0);
    assert_eq!(q.photon_sphere_radius(), 7.5);
    assert!(SpacetimeParams::new(0.0).is_err());
}

#[test]
fn lapse_and_redshift() {
    assert_eq!(lapse(&p(), 4.0).unwrap(), 0.5);
    assert!((lapse(&p(), 1e12).unwrap() - 1.0).abs() < 1e-11);
    assert_eq!(lapse(&p(), 6.009).unwrap(), 1.0 - 2.0 / 6.009);
    assert!((redshift_factor(&p(), 4.0).unwrap() - 0.5f64.sqrt()).abs() < 1e-16);
    assert!((redshift_factor(&p(), 3.0).unwrap() - 1.0 / 3f64.sqrt()).abs() < 1e-15);
    assert!(lapse(&p(), 2.0).is_err());
    assert!(lapse(&p(), 1.0).is_err());
}

#[test]
fn tortoise_values() {
    assert_eq!(tortoise(&p(), 4.0).unwrap(), 4.0);
    let r = 2.0 + 1e-8;
    let near = tortoise(&p(), r).unwrap();
    let exact = r + 2.0 * ((r - 2.0) / 2.0).ln();
    assert!((near - exact).abs() < 1e-12);
    assert!(near < -36.0);
    assert!(tortoise(&p(), 2.0 + 1e-12).unwrap() < near);
    assert!(tortoise(&p(), 2.0).is_err());
}

#[test]
fn tortoise_inverse_values() {
    assert!((tortoise_inverse(&p(), 4.0).unwrap() - 4.0).abs() < 1e-14);
    let r13 = tortoise_inverse(&p(), 13.0).unwrap();
    assert!((r13 - bisect_tortoise(13.0)).abs() < 1e-12 * r13);
    let rm4 = tortoise_inverse(&p(), -4.0).unwrap();
    assert!(rm4 > 2.0 && rm4 < 4.0);
    assert!((rm4 - bisect_tortoise(-4.0)).abs() < 1e-12 * rm4);
}

#[test]
fn photon_sphere_alignment() {
    let t = null_propagation_time(&p(), 3.0, 3.0, PI, GeodesicBranch::Primary).unwrap();
    let exact = 3.0 * 3f64.sqrt() * PI;
    assert!((t - exact).abs() < 1e-6 * exact);
}

#[test]
fn caustic_time_at_detector_radius() {
    let t = null_propagation_time(&p(), 6.009, 6.009, PI, GeodesicBranch::Primary).unwrap();
    assert!((t - 20.7386).abs() < 1e-3, "{t}");
    let w = axis_crossing_time(&p(), 6.009, 6.009).unwrap();
    assert!((w - t).abs() < 1e-8, "{w} vs {t}");
}

#[test]
fn small_gamma_equal_radii() {
    let t = null_propagation_time(&p(), 6.009, 6.009, 1e-9, GeodesicBranch::Primary).unwrap();
    assert!(t < 1e-7);
}

#[test]
fn minimum_of_antipodal_time_at_photon_sphere() {
    let radii: Vec<f64> = (0..41).map(|k| 2.5 + 0.025 * k as f64).collect();
    let times: Vec<f64> = radii
        .iter()
        .map(|&r| null_propagation_time(&p(), r, r, PI, GeodesicBranch::Primary).unwrap())
        .collect();
    let imin = (0..times.len()).min_by(|&a, &b| times[a].total_cmp(&times[b])).unwrap();
    assert!((radii[imin] - 3.0).abs() < 1e-12, "min at {}", radii[imin]);
    assert!(times[0] > times[imin] && times[40] > times[imin]);
}

#[test]
fn branches_ordered() {
    for &(ra, rb) in &[(6.009, 6.009), (4.0, 9.0), (2.5, 2.8), (2.4, 5.0), (3.0, 7.0)] {
        for k in 1..8 {
            let g = PI * k as f64 / 8.0;
            let t1 = null_propagation_time(&p(), ra, rb, g, GeodesicBranch::Primary).unwrap();
            let t2 = null_propagation_time(&p(), ra, rb, g, GeodesicBranch::Secondary).unwrap();
            let t3 = null_propagation_time(&p(), ra, rb, g, GeodesicBranch::Tertiary).unwrap();
            assert!(t1 < t2 && t2 < t3, "{ra} {rb} {g}: {t1} {t2} {t3}");
        }
        let t1 = null_propagation_time(&p(), ra, rb, PI, GeodesicBranch::Primary).unwrap();
        let t2 = null_propagation_time(&p(), ra, rb, PI, GeodesicBranch::Secondary).unwrap();
        assert!((t1 - t2).abs() < 1e-12 * t1);
    }
}

#[test]
fn captured_branch_reports_error_for_bad_input() {
    assert!(null_propagation_time(&p(), 1.5, 4.0, 1.0, GeodesicBranch::Primary).is_err());
    assert!(null_propagation_time(&p(), 4.0, 5.0, 4.0, GeodesicBranch::Primary).is_err());
}

#[test]
fn wavefront_limits() {
    let front = wavefront(&p(), 6.009, 1e-6, 9).unwrap();
    for pt in &front {
        assert!((pt.r - 6.009).abs() < 1e-5 && pt.gamma < 1e-6);
    }
    let dt = 7.5;
    let front = wavefront(&p(), 6.009, dt, 9).unwrap();
    let radial = front[0];
    let diff = tortoise(&p(), radial.r).unwrap() - tortoise(&p(), 6.009).unwrap();
    assert!((diff - dt).abs() < 1e-9);
}

#[test]
fn wavefront_reaches_far_axis_at_caustic_time() {
    let t = axis_crossing_time(&p(), 6.009, 6.009).unwrap();
    let front = wavefront(&p(), 6.009, t, 2001).unwrap();
    let dist = |q: &WavefrontPoint| ((q.r - 6.009).powi(2) + (q.gamma - PI).powi(2)).sqrt();
    let far = front.iter().min_by(|a, b| dist(a).total_cmp(&dist(b))).unwrap();
    assert!(dist(far) < 2e-2, "{far:?}");
    assert!(front.iter().any(|q| q.captured));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn tortoise_round_trip(r in 2.0001f64..500.0) {
        let back = tortoise_inverse(&p(), tortoise(&p(), r).unwrap()).unwrap();
        prop_assert!((back - r).abs() <= 1e-12 * r);
    }

    #[test]
    fn tortoise_increasing(r in 2.001f64..100.0, dr in 1e-6f64..1.0) {
        prop_assert!(tortoise(&p(), r + dr).unwrap() > tortoise(&p(), r).unwrap());
    }

    #[test]
    fn propagation_time_symmetric(ra in 2.2f64..12.0, rb in 2.2f64..12.0, g in 0.05f64..PI) {
        let ab = null_propagation_time(&p(), ra, rb, g, GeodesicBranch::Primary).unwrap();
        let ba = null_propagation_time(&p(), rb, ra, g, GeodesicBranch::Primary).unwrap();
        prop_assert!((ab - ba).abs() <= 1e-9 * ab);
    }

    #[test]
    fn propagation_time_increases_with_angle(ra in 2.2f64..12.0, rb in 2.2f64..12.0, g in 0.05f64..3.0) {
        let t1 = null_propagation_time(&p(), ra, rb, g, GeodesicBranch::Primary).unwrap();
        let t2 = null_propagation_time(&p(), ra, rb, g + 0.1, GeodesicBranch::Primary).unwrap();
        prop_assert!(t2 > t1);
    }
}
