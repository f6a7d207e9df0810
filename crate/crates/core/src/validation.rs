//! Brute-force oracles for the closed forms and the mode solver.
//!
//! Each oracle computes its reference along a code path that shares no
//! numerical kernel with the fast path it checks: window integrals by adaptive
//! quadrature (no error functions), negativity by eigenvalues of the partial
//! transpose, in-modes by a Dormand-Prince integration in r* started deep in
//! the horizon region.

use std::f64::consts::PI;
use std::fmt;

use nalgebra::Matrix4;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::geometry::{horizon_distance, tortoise, SpacetimeParams};
use crate::modecache::ModeTable;
use crate::ode::{dopri5, Tolerance};
use crate::quadrature::integrate;
use crate::radial::{magnus_order, solve_in_jaffe, solve_mode, ModeIndex, SolverOptions};
use crate::response::{self, negativity, window_integral_full, window_integral_nested, ConvergenceControls, DetectorPairSpec};
use crate::specfun::legendre_table;
use crate::states::{kernel_from_values, ModeValues};

type C = Complex64;

const UNIT: SpacetimeParams = SpacetimeParams { mass: 1.0 };
pub const WINDOW_TOL: f64 = 1e-10;
pub const NEGATIVITY_TOL: f64 = 1e-10;
pub const JAFFE_TOL: f64 = 1e-10;
pub const CONSERVATION_TOL: f64 = 1e-8;
pub const M_QUADRATURE_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleEntry {
    pub oracle: String,
    pub sample: String,
    pub reference: C,
    pub fast: C,
    pub error: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl OracleEntry {
    pub fn new(oracle: &str, sample: String, reference: C, fast: C, error: f64, tolerance: f64) -> Self {
        Self { oracle: oracle.into(), sample, reference, fast, error, tolerance, pass: error <= tolerance }
    }

    pub fn relative(oracle: &str, sample: String, reference: C, fast: C, tolerance: f64) -> Self {
        let err = (fast - reference).norm() / reference.norm().max(f64::MIN_POSITIVE);
        Self::new(oracle, sample, reference, fast, err, tolerance)
    }
}

impl fmt::Display for OracleEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} sample=\"{}\" reference={:.15e}{:+.15e}i fast={:.15e}{:+.15e}i error={:.3e} tol={:.1e}",
            if self.pass { "PASS" } else { "FAIL" },
            self.oracle,
            self.sample,
            self.reference.re,
            self.reference.im,
            self.fast.re,
            self.fast.im,
            self.error,
            self.tolerance
        )
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct OracleReport {
    pub entries: Vec<OracleEntry>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }

    pub fn failures(&self) -> usize {
        self.entries.iter().filter(|e| !e.pass).count()
    }

    pub fn max_error(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, e| m.max(e.error))
    }

    pub fn extend(&mut self, other: OracleReport) {
        self.entries.extend(other.entries);
    }

    pub fn push(&mut self, e: OracleEntry) {
        self.entries.push(e);
    }
}

// ---------------------------------------------------------------------------
// Window integrals.

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WindowSample {
    pub nu: f64,
    pub mu: f64,
    /// Inner detector width and center.
    pub wd: f64,
    pub cd: f64,
    /// Outer detector width and center.
    pub wdp: f64,
    pub cdp: f64,
}

/// Fixed edge cases followed by `n` random samples with |ν| T, |μ| T' ≤ 20
/// and centers at most three summed widths apart.
pub fn window_samples(n: usize, seed: u64) -> Vec<WindowSample> {
    let mut out = vec![
        WindowSample { nu: 0.0, mu: 0.0, wd: 1.0, cd: 0.0, wdp: 1.0, cdp: 0.0 },
        WindowSample { nu: 1.3, mu: -0.4, wd: 1.0, cd: 0.0, wdp: 1.0, cdp: 5.0 },
        WindowSample { nu: 2.0, mu: 0.7, wd: 0.5, cd: 1.0, wdp: 5.0, cdp: -3.0 },
        WindowSample { nu: -3.0, mu: 4.0, wd: 4.0, cd: 0.0, wdp: 0.4, cdp: 2.0 },
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..n {
        let wd = 10f64.powf(rng.gen_range(-0.5..0.7));
        let wdp = if rng.gen_bool(0.2) { wd * 10.0 } else { 10f64.powf(rng.gen_range(-0.5..0.7)) };
        let cd = rng.gen_range(-10.0..10.0);
        out.push(WindowSample {
            nu: rng.gen_range(-20.0..20.0) / wd,
            mu: rng.gen_range(-20.0..20.0) / wdp,
            wd,
            cd,
            wdp,
            cdp: cd + rng.gen_range(-3.0..3.0) * (wd + wdp),
        });
    }
    out
}

/// ∫ e^{iνt} η(t) dt by quadrature along Im t = νT^2/2, where the integrand
/// does not oscillate (the integrand is entire and decays in the strip).
pub fn reference_full_window(nu: f64, width: f64, center: f64) -> Result<C> {
    let shift = C::new(0.0, nu * width * width / 2.0);
    let g = |s: f64| {
        let t = C::new(s, 0.0) + shift;
        let d = (t - center) / width;
        (C::i() * nu * t - d * d).exp()
    };
    let scale = g(center).norm().max(g(0.0).norm());
    integrate(g, center - 12.0 * width, center + 12.0 * width, 1e-14, 1e-17 * scale)
}

/// Nested window integral by quadrature over the time lag u = t' - t > 0.
///
/// For fixed u the t-integral is an elementary Gaussian; the u-integral runs
/// along 0 → iσ → iσ + ∞ with σ chosen so that the horizontal leg has
/// constant phase.
pub fn reference_nested_window(s: &WindowSample) -> Result<C> {
    let a = 1.0 / (s.wd * s.wd) + 1.0 / (s.wdp * s.wdp);
    let sum = s.nu + s.mu;
    // exp(P(u)) = e^{iμu} ∫ dt e^{i(ν+μ)t} η_D(t) η_D'(t+u)
    let p = |u: C| {
        let b = C::new(2.0 * s.cd / (s.wd * s.wd), sum) + (C::new(s.cdp, 0.0) - u) * (2.0 / (s.wdp * s.wdp));
        let c0 = -s.cd * s.cd / (s.wd * s.wd) - (u - s.cdp) * (u - s.cdp) / (s.wdp * s.wdp);
        b * b / (4.0 * a) + c0 + C::i() * s.mu * u
    };
    // P is quadratic: P(u) = P(u*) - α (u - u*)^2 with α = 1/(wd^2 + wdp^2).
    let alpha = 1.0 / (s.wd * s.wd + s.wdp * s.wdp);
    let beta = (p(C::new(1.0, 0.0)) - p(C::new(-1.0, 0.0))) / 2.0;
    let ustar = beta / (2.0 * alpha);
    let p0 = p(ustar);
    let g = |u: C| (PI / a).sqrt() * (p0 - alpha * (u - ustar) * (u - ustar)).exp();
    let sigma = ustar.im;
    let width = 1.0 / alpha.sqrt();
    let x_end = ustar.re.max(0.0) + 12.0 * width;
    let center = ustar.re.clamp(0.0, x_end);
    let scale = [C::new(0.0, 0.0), C::new(0.0, sigma), C::new(center, sigma)].iter().fold(0.0f64, |m, &u| m.max(g(u).norm()));
    let abs = 1e-16 * scale;
    let vertical = if sigma == 0.0 { C::new(0.0, 0.0) } else { C::i() * integrate(|y: f64| g(C::new(0.0, y)), 0.0, sigma, 1e-13, abs)? };
    let h = |x: f64| g(C::new(x, sigma));
    let horizontal = integrate(h, 0.0, center, 1e-13, abs)? + integrate(h, center, x_end, 1e-13, abs)?;
    Ok(vertical + horizontal)
}

pub fn oracle_window_integrals(samples: &[WindowSample]) -> Result<OracleReport> {
    let mut rep = OracleReport::default();
    for s in samples {
        let desc = format!("nu={:.4} mu={:.4} T={:.3},{:.3} t0={:.3},{:.3}", s.nu, s.mu, s.wd, s.wdp, s.cd, s.cdp);
        let full = window_integral_full(s.nu, s.wd, s.cd);
        let full_ref = reference_full_window(s.nu, s.wd, s.cd)?;
        rep.push(OracleEntry::relative("window_full", desc.clone(), full_ref, full, WINDOW_TOL));
        let nested = window_integral_nested(s.nu, s.mu, s.wd, s.wdp, s.cd, s.cdp)?;
        let nested_ref = reference_nested_window(s)?;
        rep.push(OracleEntry::relative("window_nested", desc, nested_ref, nested, WINDOW_TOL));
    }
    Ok(rep)
}

// ---------------------------------------------------------------------------
// Partial transpose.

/// Eigenvalues of a 4x4 Hermitian matrix in ascending order.
pub fn hermitian_eigenvalues(m: &[[C; 4]; 4]) -> [f64; 4] {
    let mat = Matrix4::from_fn(|i, j| m[i][j]);
    let mut ev: Vec<f64> = mat.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    [ev[0], ev[1], ev[2], ev[3]]
}

/// Partial transpose on the second detector, basis gg, eg, ge, ee.
pub fn partial_transpose(rho: &[[C; 4]; 4]) -> [[C; 4]; 4] {
    let mut out = [[C::new(0.0, 0.0); 4]; 4];
    // Index = 2 b + a for (a, b) with a, b ∈ {g = 0, e = 1}: gg 0, eg 1, ge 2, ee 3.
    for i in 0..4 {
        for j in 0..4 {
            let (ai, bi) = (i % 2, i / 2);
            let (aj, bj) = (j % 2, j / 2);
            out[2 * bj + ai][2 * bi + aj] = rho[i][j];
        }
    }
    out
}

/// Sum of |negative eigenvalues| of the partial transpose.
pub fn eigen_negativity(rho: &[[C; 4]; 4]) -> f64 {
    hermitian_eigenvalues(&partial_transpose(rho)).iter().filter(|&&x| x < 0.0).map(|x| -x).sum()
}

/// Leading-order part of the eigenvalue negativity: with entries scaled by s,
/// N(s) = s N1 + O(s^2), so N1 = 4 N(1/2) - N(1) up to O(s^3).
pub fn first_order_eigen_negativity(l_aa: f64, l_bb: f64, l_ab: C, m: C) -> f64 {
    let full = eigen_negativity(&response::density_matrix(l_aa, l_bb, l_ab, m));
    let half = eigen_negativity(&response::density_matrix(l_aa / 2.0, l_bb / 2.0, l_ab / 2.0, m / 2.0));
    4.0 * half - full
}

pub fn oracle_partial_transpose(n: usize, seed: u64) -> OracleReport {
    let mut rep = OracleReport::default();
    let mut check = |l_aa: f64, l_bb: f64, l_ab: C, m: C, desc: String| {
        let reference = first_order_eigen_negativity(l_aa, l_bb, l_ab, m);
        let fast = negativity(l_aa, l_bb, m);
        let err = (reference - fast).abs();
        rep.push(OracleEntry::new("partial_transpose", desc, C::new(reference, 0.0), C::new(fast, 0.0), err, NEGATIVITY_TOL));
    };
    check(3e-5, 3e-5, C::new(1e-5, 0.0), C::new(0.0, 0.0), "M = 0".into());
    check(2e-5, 2e-5, C::new(0.0, 1e-5), C::new(5e-5, -1e-5), "L_AA = L_BB".into());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..n {
        let l_aa: f64 = rng.gen_range(0.0..1e-4);
        let l_bb: f64 = rng.gen_range(0.0..1e-4);
        let lab_mag = rng.gen_range(0.0..1.0) * (l_aa * l_bb).sqrt();
        let l_ab = C::from_polar(lab_mag, rng.gen_range(0.0..2.0 * PI));
        let m = C::from_polar(rng.gen_range(0.0..1e-4), rng.gen_range(0.0..2.0 * PI));
        check(l_aa, l_bb, l_ab, m, format!("random #{i}"));
    }
    rep
}

// ---------------------------------------------------------------------------
// Mode solver.

/// In-mode R and dR/dr* at increasing `rstar` points by Dormand-Prince
/// integration of R'' = (V - ω^2) R in r*, started from R = e^{-iωr*} at
/// r* = `rstar0` where V is below 1e-15.
pub fn ode_in_mode(mode: ModeIndex, rstar0: f64, rstar: &[f64], tol: f64) -> Result<Vec<(C, C)>> {
    let w = mode.omega;
    let ll = (mode.l * (mode.l + 1)) as f64;
    let rhs = |x: f64, y: &[f64; 4]| {
        let d = horizon_distance(&UNIT, x).unwrap_or(f64::NAN);
        let r = 2.0 + d;
        let v = d / r * (2.0 / (r * r * r) + ll / (r * r));
        let k = v - w * w;
        [y[2], y[3], k * y[0], k * y[1]]
    };
    let start = C::from_polar(1.0, -w * rstar0);
    let dstart = -C::i() * w * start;
    let mut y = [start.re, start.im, dstart.re, dstart.im];
    let mut x = rstar0;
    let mut out = Vec::with_capacity(rstar.len());
    for &target in rstar {
        if target > x {
            let (_, ny) = dopri5(rhs, x, y, target, Tolerance { rel: tol, abs: tol * 1e-3 }, |_, _| false)?;
            y = ny;
            x = target;
        }
        out.push((C::new(y[0], y[1]), C::new(y[2], y[3])));
    }
    Ok(out)
}

/// Test set of 20 (l, ω) pairs with ω ≤ 1/M.
pub fn default_mode_sample() -> Vec<ModeIndex> {
    let mut v = Vec::new();
    for &l in &[0usize, 1, 2, 4, 7] {
        for &w in &[0.05, 0.2, 0.5, 1.0] {
            v.push(ModeIndex::new(l, w));
        }
    }
    v
}

/// r* points of the Jaffe/ODE overlap check.
pub fn overlap_grid() -> Vec<f64> {
    (0..=17).map(|k| -4.0 + k as f64).collect()
}

pub fn oracle_mode_consistency(modes: &[ModeIndex], opts: &SolverOptions) -> Result<OracleReport> {
    let mut rep = OracleReport::default();
    let grid = overlap_grid();
    let radii: Vec<f64> = grid.iter().map(|&x| 2.0 + horizon_distance(&UNIT, x).unwrap()).collect();
    for &mode in modes {
        let tag = format!("l={} omega={}", mode.l, mode.omega);
        // Jaffe series against the r* integration.
        let ode = ode_in_mode(mode, -80.0, &grid, 1e-14)?;
        let mut worst = (0.0, C::new(0.0, 0.0), C::new(0.0, 0.0), 0.0);
        for (i, &r) in radii.iter().enumerate() {
            let j = solve_in_jaffe(mode, r)?;
            let err = (j.value - ode[i].0).norm() / ode[i].0.norm();
            if err >= worst.0 {
                worst = (err, ode[i].0, j.value, grid[i]);
            }
        }
        rep.push(OracleEntry::new("jaffe_vs_ode", format!("{tag} worst r*={}", worst.3), worst.1, worst.2, worst.0, JAFFE_TOL));
        // Wronskian and flux on the Magnus solution.
        let sol = solve_mode(mode, &radii, opts)?;
        let z = C::new(0.0, 0.0);
        rep.push(OracleEntry::new("wronskian", tag.clone(), z, z, sol.wronskian_spread, CONSERVATION_TOL));
        rep.push(OracleEntry::new("flux_in", tag.clone(), z, z, sol.coeffs.flux_in_error(), CONSERVATION_TOL));
        rep.push(OracleEntry::new("flux_up", tag.clone(), z, z, sol.coeffs.flux_up_error(), CONSERVATION_TOL));
        // Negative frequency is served by conjugation.
        let neg = solve_mode(ModeIndex::new(mode.l, -mode.omega), &radii, opts)?;
        let d = neg.rbar_in.iter().zip(&sol.rbar_in).chain(neg.rbar_up.iter().zip(&sol.rbar_up)).fold(0.0f64, |m, (x, y)| m.max((x - y.conj()).norm()));
        rep.push(OracleEntry::new("negative_frequency", tag, sol.rbar_in[0].conj(), neg.rbar_in[0], d, 0.0));
    }
    let order = magnus_order(ModeIndex::new(0, 1.0), 30.0, 6.0, 200)?;
    rep.push(OracleEntry::new(
        "step_halving_order",
        "l=0 omega=1 r 30 -> 6".into(),
        C::new(4.0, 0.0),
        C::new(order, 0.0),
        (order - 4.0).abs(),
        0.5,
    ));
    let barrier = solve_mode(ModeIndex::new(20, 0.05), &[6.0], opts)?;
    let refl = barrier.coeffs.reflection_in();
    rep.push(OracleEntry::new(
        "barrier_reflection",
        "l=20 omega=0.05 |rho_in/I|".into(),
        C::new(1.0, 0.0),
        C::new(refl, 0.0),
        (0.999 - refl).max(0.0),
        0.0,
    ));
    Ok(rep)
}

// ---------------------------------------------------------------------------
// M by trapezoid over time integrals done numerically.

/// M computed from the same kernel and frequency grid as the fast path but
/// with every window integral replaced by its quadrature reference.
pub fn reference_m(pair: &DetectorPairSpec, table: &ModeTable, l_cut: usize) -> Result<C> {
    let grid = &table.grid;
    let ia = grid.radius_index(pair.a.r)?;
    let ib = grid.radius_index(pair.b.r)?;
    let n_om = grid.n_omega();
    let (a, b) = (&pair.a, &pair.b);
    let (ga, gb) = (a.coordinate_gap(), b.coordinate_gap());
    let nested = |nu: f64, mu: f64, inner: &response::DetectorSpec, outer: &response::DetectorSpec| {
        reference_nested_window(&WindowSample { nu, mu, wd: inner.width, cd: inner.center, wdp: outer.width, cdp: outer.center })
    };
    let mut wins = Vec::with_capacity(n_om);
    for k in 0..n_om {
        let mut pair_w = [[C::new(0.0, 0.0); 2]; 2];
        for (si, s) in [1.0, -1.0].iter().enumerate() {
            let w = s * grid.omega(k);
            pair_w[si] = [nested(gb + w, ga - w, b, a)?, nested(ga + w, gb - w, a, b)?];
        }
        wins.push(pair_w);
    }
    let p = legendre_table(l_cut, pair.gamma.cos());
    let mut total = C::new(0.0, 0.0);
    for l in 0..=l_cut {
        let mut acc = C::new(0.0, 0.0);
        for (k, win) in wins.iter().enumerate() {
            let w = grid.omega(k);
            let vab = ModeValues::from_table(table, l, k, ia, ib);
            let vba = vab.swapped();
            let mut term = C::new(0.0, 0.0);
            for (si, s) in [1.0, -1.0].iter().enumerate() {
                let ws = s * w;
                term += kernel_from_values(pair.state, ws, &vab) / ws * win[si][0];
                term += kernel_from_values(pair.state, ws, &vba) / ws * win[si][1];
            }
            let weight = if k == 0 || k == n_om - 1 { 0.5 } else { 1.0 };
            acc += term * weight;
        }
        total += acc * grid.omega_step * ((2 * l + 1) as f64 * p[l]);
    }
    let pre = -a.coupling * b.coupling * a.redshift() * b.redshift() / (16.0 * PI * PI);
    Ok(total * pre)
}

pub fn oracle_m_quadrature(pair: &DetectorPairSpec, table: &ModeTable, l_cut: usize) -> Result<OracleReport> {
    let controls = ConvergenceControls { l_cut, omega_cut: None, pairwise: true };
    let (m, _, _, _) = response::m_term(pair, table, &controls)?;
    let reference = reference_m(pair, table, l_cut)?;
    let desc = format!("l_cut={l_cut} omega_step={} gamma={:.4} delay={}", table.grid.omega_step, pair.gamma, pair.b.center - pair.a.center);
    let mut rep = OracleReport::default();
    rep.push(OracleEntry::relative("m_closed_form_vs_quadrature", desc, reference, m, M_QUADRATURE_TOL));
    Ok(rep)
}

/// r* for a radius, exposed for reports.
pub fn rstar_of(r: f64) -> Result<f64> {
    tortoise(&UNIT, r)
}

// ---------------------------------------------------------------------------
// Suites.

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Windows,
    Negativity,
    Modes,
    Quadrature,
    All,
}

impl Suite {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "windows" => Ok(Suite::Windows),
            "negativity" => Ok(Suite::Negativity),
            "modes" => Ok(Suite::Modes),
            "quadrature" => Ok(Suite::Quadrature),
            "all" => Ok(Suite::All),
            _ => Err(crate::Error::Format(format!("unknown suite '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SuiteOptions<'a> {
    pub window_samples: usize,
    pub negativity_samples: usize,
    pub seed: u64,
    /// Table to audit in the modes suite; a small one is built when absent.
    pub table: Option<&'a ModeTable>,
    pub audit_fraction: f64,
}

impl Default for SuiteOptions<'_> {
    fn default() -> Self {
        Self { window_samples: 100, negativity_samples: 1000, seed: 20_240_601, table: None, audit_fraction: 0.01 }
    }
}

/// Audit of a mode table as report entries.
pub fn audit_entries(table: &ModeTable, fraction: f64) -> Result<OracleReport> {
    let a = table.audit_report(fraction)?;
    let desc = format!("{} of {} records", a.checked, table.n_records());
    let z = C::new(0.0, 0.0);
    let tol = crate::modecache::AUDIT_TOL;
    let mut rep = OracleReport::default();
    rep.push(OracleEntry::new("audit_flux", desc.clone(), z, z, a.max_flux_error, tol));
    rep.push(OracleEntry::new("audit_wronskian", desc.clone(), z, z, a.max_wronskian_spread, tol));
    rep.push(OracleEntry::new("audit_values", desc, z, z, a.max_value_deviation, tol));
    Ok(rep)
}

/// Small table for the modes suite: l ≤ 5, 100 frequencies, two radii.
pub fn small_audit_table() -> Result<ModeTable> {
    let grid = crate::modecache::GridSpec { lmax: 5, omega_min: 0.01, omega_max: 1.0, omega_step: 0.01, radii: vec![6.009, 10.0] };
    crate::modecache::build(&grid, &SolverOptions::default(), 0)
}

/// Coarse table for the M quadrature oracle: l ≤ 5, ω step 0.05 up to 10.
pub fn coarse_m_table() -> Result<ModeTable> {
    let grid = crate::modecache::GridSpec { lmax: 5, omega_min: 0.05, omega_max: 10.0, omega_step: 0.05, radii: vec![6.009, 8.0] };
    crate::modecache::build(&grid, &SolverOptions::default(), 0)
}

/// Pairs for the M quadrature oracle: lensing geometry, unequal radii and widths, negative delay.
pub fn coarse_m_pairs() -> Vec<DetectorPairSpec> {
    use crate::response::DetectorSpec;
    use crate::states::FieldState;
    let a = DetectorSpec { r: 6.009, gap: 5.0, coupling: 1.0, width: 1.0, center: 0.0 };
    let mut out = Vec::new();
    for (gamma, delay, rb, wb) in [(3.0, 21.5, 6.009, 1.0), (0.6, 10.0, 8.0, 1.5), (2.0, -3.0, 8.0, 0.7)] {
        let b = DetectorSpec { r: rb, width: wb, center: delay, ..a };
        for state in FieldState::ALL {
            out.push(DetectorPairSpec { a, b, gamma, state });
        }
    }
    out
}

pub fn run_suite(suite: Suite, opts: &SuiteOptions) -> Result<OracleReport> {
    let mut rep = OracleReport::default();
    let all = suite == Suite::All;
    if all || suite == Suite::Windows {
        rep.extend(oracle_window_integrals(&window_samples(opts.window_samples, opts.seed))?);
    }
    if all || suite == Suite::Negativity {
        rep.extend(oracle_partial_transpose(opts.negativity_samples, opts.seed));
    }
    if all || suite == Suite::Modes {
        rep.extend(oracle_mode_consistency(&default_mode_sample(), &SolverOptions::default())?);
        match opts.table {
            Some(t) => rep.extend(audit_entries(t, opts.audit_fraction)?),
            None => rep.extend(audit_entries(&small_audit_table()?, opts.audit_fraction)?),
        }
    }
    if all || suite == Suite::Quadrature {
        let table = coarse_m_table()?;
        for pair in coarse_m_pairs() {
            rep.extend(oracle_m_quadrature(&pair, &table, 5)?);
        }
    }
    Ok(rep)
}
