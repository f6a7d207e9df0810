use harvest_core::response::{window_integral_full, window_integral_nested};
use harvest_core::validation::*;
use num_complex::Complex64 as C;

#[test]
fn every_suite_passes() {
    let rep = run_suite(Suite::All, &SuiteOptions::default()).unwrap();
    for e in rep.entries.iter().filter(|e| !e.pass) {
        println!("{e}");
    }
    assert!(rep.passed(), "{} failures", rep.failures());
    for name in ["window_full", "window_nested", "partial_transpose", "jaffe_vs_ode", "wronskian", "flux_in", "flux_up", "audit_flux", "m_closed_form_vs_quadrature", "step_halving", "barrier"] {
        assert!(rep.entries.iter().any(|e| e.oracle.starts_with(name)), "missing {name}");
    }
}

#[test]
fn window_sample_set_is_reproducible_and_covers_width_ratios() {
    let a = window_samples(200, 7);
    assert_eq!(a, window_samples(200, 7));
    assert_ne!(a, window_samples(200, 8));
    assert!(a.iter().any(|s| s.wd / s.wdp >= 9.9 || s.wdp / s.wd >= 9.9));
    assert!(a.iter().all(|s| s.nu.abs() * s.wd <= 20.0 + 1e-12 && s.mu.abs() * s.wdp <= 20.0 + 1e-12));
}

#[test]
fn identity_sample_is_exact() {
    let s = WindowSample { nu: 0.0, mu: 0.0, wd: 1.0, cd: 0.0, wdp: 1.0, cdp: 0.0 };
    let r = oracle_window_integrals(&[s]).unwrap();
    assert!(r.passed());
    let full = window_integral_full(0.0, 1.0, 0.0);
    let nested = window_integral_nested(0.0, 0.0, 1.0, 1.0, 0.0, 0.0).unwrap();
    assert!((nested - full * full / 2.0).norm() < 1e-15);
}

#[test]
fn first_order_negativity_matches_full_spectrum() {
    // Small entries: eigen-negativity of the full matrix is the closed formula to first order.
    let (laa, lbb, lab, m) = (2e-5, 1e-5, C::new(3e-6, 1e-6), C::new(4e-5, -2e-5));
    let direct = eigen_negativity(&harvest_core::response::density_matrix(laa, lbb, lab, m));
    let formula = harvest_core::response::negativity(laa, lbb, m);
    assert!((direct - formula).abs() < 1e-8, "{direct} {formula}");
    assert!((first_order_eigen_negativity(laa, lbb, lab, m) - formula).abs() < 1e-10);
}

#[test]
fn failing_entries_are_reported_not_raised() {
    let e = OracleEntry::relative("demo", "x".into(), C::new(1.0, 0.0), C::new(1.1, 0.0), 1e-10);
    assert!(!e.pass);
    let line = e.to_string();
    assert!(line.starts_with("FAIL demo"), "{line}");
    let mut rep = OracleReport::default();
    rep.push(e);
    assert_eq!(rep.failures(), 1);
    assert!(!rep.passed());
}

#[test]
fn suite_names_parse() {
    assert_eq!(Suite::parse("windows").unwrap(), Suite::Windows);
    assert_eq!(Suite::parse("all").unwrap(), Suite::All);
    assert!(Suite::parse("everything").is_err());
}
