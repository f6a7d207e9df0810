//! Leading-order two-detector density matrix: L_DD', M, M±, negativity.
//!
//! All integrals over ω run over the table grid with the trapezoid rule; each
//! grid frequency contributes at +ω and -ω, so the full real line is covered
//! apart from the sliver |ω| < ω_min, which is estimated in the diagnostics.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{redshift_factor, SpacetimeParams};
use crate::modecache::ModeTable;
use crate::specfun::{legendre_table, scaled_one_minus_i_erfi};
use crate::states::{kernel_from_values, split_weights, FieldState, ModeValues};

type C = Complex64;

const UNIT: SpacetimeParams = SpacetimeParams { mass: 1.0 };
const SQRT_PI: f64 = 1.772_453_850_905_516;
/// Relative size of the last l summand that triggers a tail warning.
pub const TAIL_WARNING: f64 = 1e-3;
/// Negativities below this are reported as exactly zero.
pub const NEGATIVITY_FLOOR: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectorSpec {
    /// Radial coordinate.
    pub r: f64,
    /// Proper energy gap Ω.
    pub gap: f64,
    /// Coupling λ.
    pub coupling: f64,
    /// Coordinate-time Gaussian width T.
    pub width: f64,
    /// Switching center t0.
    pub center: f64,
}

impl DetectorSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.r > 2.0 && self.r.is_finite()) {
            return Err(Error::Domain(format!("detector radius {} must lie outside the horizon", self.r)));
        }
        if !(self.width > 0.0 && self.gap > 0.0 && self.coupling.is_finite() && self.center.is_finite()) {
            return Err(Error::Domain("detector width and gap must be positive".into()));
        }
        Ok(())
    }

    /// N = sqrt(f(r)).
    pub fn redshift(&self) -> f64 {
        redshift_factor(&UNIT, self.r).unwrap_or(f64::NAN)
    }

    /// Gap in coordinate-time frequency, Ω N.
    pub fn coordinate_gap(&self) -> f64 {
        self.gap * self.redshift()
    }
}

/// Coordinate width giving proper width `proper` at radius r: T = proper / sqrt(f(r)).
pub fn proper_width(r: f64, proper: f64) -> Result<f64> {
    Ok(proper / redshift_factor(&UNIT, r)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectorPairSpec {
    pub a: DetectorSpec,
    pub b: DetectorSpec,
    /// Angular separation in [0, π].
    pub gamma: f64,
    pub state: FieldState,
}

impl DetectorPairSpec {
    pub fn validate(&self) -> Result<()> {
        self.a.validate()?;
        self.b.validate()?;
        if !(0.0..=PI).contains(&self.gamma) {
            return Err(Error::Domain(format!("gamma = {} outside [0, pi]", self.gamma)));
        }
        Ok(())
    }

    pub fn swapped(&self) -> Self {
        Self { a: self.b, b: self.a, ..*self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceControls {
    pub l_cut: usize,
    /// Upper frequency cutoff; `None` uses the whole table grid.
    pub omega_cut: Option<f64>,
    /// Pairwise (true) or sequential (false) summation; both are deterministic.
    pub pairwise: bool,
}

impl Default for ConvergenceControls {
    fn default() -> Self {
        Self { l_cut: 100, omega_cut: None, pairwise: true }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Diagnostics {
    pub l_cut: usize,
    pub omega_max: f64,
    /// |last l summand| / |sum|, worst over the computed quantities.
    pub last_l_relative: f64,
    /// |integrand at ω_max| / max |integrand|, worst over l and quantities.
    pub last_omega_relative: f64,
    /// Estimate of the omitted |ω| < ω_min contribution relative to the result.
    pub sliver_relative: f64,
    pub tail_warning: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairResponse {
    pub l_aa: f64,
    pub l_bb: f64,
    pub l_ab: C,
    pub m: C,
    pub m_plus: C,
    pub m_minus: C,
    pub negativity: f64,
    pub diagnostics: Diagnostics,
}

impl PairResponse {
    pub fn density_matrix(&self) -> [[C; 4]; 4] {
        density_matrix(self.l_aa, self.l_bb, self.l_ab, self.m)
    }
}

/// ∫ e^{iνt} exp(-((t - t0)/T)^2) dt over the real line.
pub fn window_integral_full(nu: f64, width: f64, center: f64) -> C {
    SQRT_PI * width * (-nu * nu * width * width / 4.0).exp() * C::from_polar(1.0, nu * center)
}

/// ∫ dt' e^{iμt'} η_D'(t') ∫_{-∞}^{t'} dt e^{iνt} η_D(t): the inner detector D
/// has width `wd` and center `cd`, the outer D' has `wdp`, `cdp`. Valid for
/// unequal widths.
pub fn window_integral_nested(nu: f64, mu: f64, wd: f64, wdp: f64, cd: f64, cdp: f64) -> Result<C> {
    let s = (wd * wd + wdp * wdp).sqrt();
    let z = C::new((nu * wd * wd - mu * wdp * wdp) / (2.0 * s), (cdp - cd) / s);
    let e = C::new(-(mu * mu * wdp * wdp + nu * nu * wd * wd) / 4.0, nu * cd + mu * cdp);
    Ok(wd * wdp * PI / 2.0 * scaled_one_minus_i_erfi(z, e)?)
}

/// N^(2) = (sqrt((L_AA - L_BB)^2 + 4|M|^2) - L_AA - L_BB) / 2, clamped at zero.
pub fn negativity(l_aa: f64, l_bb: f64, m: C) -> f64 {
    let d = l_aa - l_bb;
    let n = 0.5 * ((d * d + 4.0 * m.norm_sqr()).sqrt() - l_aa - l_bb);
    if n <= NEGATIVITY_FLOOR {
        0.0
    } else {
        n
    }
}

/// Density matrix in the basis gg, eg, ge, ee.
pub fn density_matrix(l_aa: f64, l_bb: f64, l_ab: C, m: C) -> [[C; 4]; 4] {
    let z = C::new(0.0, 0.0);
    let re = |x: f64| C::new(x, 0.0);
    [
        [re(1.0 - l_aa - l_bb), z, z, m.conj()],
        [z, re(l_aa), l_ab, z],
        [z, l_ab.conj(), re(l_bb), z],
        [m, z, z, z],
    ]
}

// ---------------------------------------------------------------------------
// Summation.

fn pairwise(xs: &[C]) -> C {
    if xs.len() <= 16 {
        return xs.iter().fold(C::new(0.0, 0.0), |a, &b| a + b);
    }
    let mid = xs.len() / 2;
    pairwise(&xs[..mid]) + pairwise(&xs[mid..])
}

fn sum(xs: &[C], pair: bool) -> C {
    if pair {
        pairwise(xs)
    } else {
        xs.iter().fold(C::new(0.0, 0.0), |a, &b| a + b)
    }
}

/// Which quantities a call needs.
#[derive(Debug, Clone, Copy)]
struct Wanted {
    local: bool,
    cross: bool,
    m: bool,
}

// Index of each quantity in the per-l accumulators.
const Q_LAA: usize = 0;
const Q_LBB: usize = 1;
const Q_LAB: usize = 2;
const Q_M: usize = 3;
const Q_MP: usize = 4;
const Q_MM: usize = 5;
const NQ: usize = 6;

/// ℓ-independent window factors at one signed frequency.
#[derive(Debug, Clone, Copy)]
struct Windows {
    laa: C,
    lbb: C,
    lab: C,
    m1: C,
    m2: C,
}

fn windows(pair: &DetectorPairSpec, omega: f64, want: Wanted) -> Result<Windows> {
    let (a, b) = (&pair.a, &pair.b);
    let (ga, gb) = (a.coordinate_gap(), b.coordinate_gap());
    let (nu_a, nu_b) = (ga + omega, gb + omega);
    let (mu_a, mu_b) = (ga - omega, gb - omega);
    let zero = C::new(0.0, 0.0);
    let full = |nu: f64, d: &DetectorSpec| window_integral_full(nu, d.width, d.center);
    let (laa, lbb) = if want.local {
        (full(-nu_a, a) * full(nu_a, a), full(-nu_b, b) * full(nu_b, b))
    } else {
        (zero, zero)
    };
    let lab = if want.cross { full(-nu_a, a) * full(nu_b, b) } else { zero };
    let (m1, m2) = if want.m {
        (
            window_integral_nested(nu_b, mu_a, b.width, a.width, b.center, a.center)?,
            window_integral_nested(nu_a, mu_b, a.width, b.width, a.center, b.center)?,
        )
    } else {
        (zero, zero)
    };
    Ok(Windows { laa, lbb, lab, m1, m2 })
}

struct Integrals {
    /// Per quantity: (sum over l with weights, diagnostics).
    totals: [C; NQ],
    diag: Diagnostics,
}

fn integrate(pair: &DetectorPairSpec, table: &ModeTable, controls: &ConvergenceControls, want: Wanted) -> Result<Integrals> {
    pair.validate()?;
    let grid = &table.grid;
    if controls.l_cut > grid.lmax {
        return Err(Error::Coverage(format!("l_cut = {} exceeds table lmax = {}", controls.l_cut, grid.lmax)));
    }
    let ia = grid.radius_index(pair.a.r).map_err(|e| Error::Coverage(e.to_string()))?;
    let ib = grid.radius_index(pair.b.r).map_err(|e| Error::Coverage(e.to_string()))?;
    let mut n_om = grid.n_omega();
    if let Some(wc) = controls.omega_cut {
        let k = ((wc - grid.omega_min) / grid.omega_step + 1e-9).floor();
        if k < 1.0 {
            return Err(Error::Domain(format!("omega_cut = {wc} leaves fewer than two grid points")));
        }
        n_om = n_om.min(k as usize + 1);
    }
    if n_om < 2 {
        return Err(Error::Coverage("frequency grid needs at least two points".into()));
    }
    table.record_at(controls.l_cut, n_om - 1)?;

    let wins: Vec<[Windows; 2]> = (0..n_om)
        .map(|k| {
            let w = grid.omega(k);
            Ok([windows(pair, w, want)?, windows(pair, -w, want)?])
        })
        .collect::<Result<_>>()?;
    let h = grid.omega_step;
    let state = pair.state;

    // Per-l integrals and diagnostics.
    let per_l: Vec<([C; NQ], [f64; NQ], [f64; NQ], [C; NQ])> = (0..=controls.l_cut)
        .into_par_iter()
        .map(|l| {
            let mut terms: Vec<[C; NQ]> = Vec::with_capacity(n_om);
            for (k, win) in wins.iter().enumerate() {
                let w = grid.omega(k);
                let vab = ModeValues::from_table(table, l, k, ia, ib);
                let mut t = [C::new(0.0, 0.0); NQ];
                let h_of = |v: &ModeValues, s: f64| kernel_from_values(state, s * w, v) / (s * w);
                if want.local {
                    let vaa = ModeValues::from_table(table, l, k, ia, ia);
                    let vbb = ModeValues::from_table(table, l, k, ib, ib);
                    t[Q_LAA] = h_of(&vaa, 1.0) * win[0].laa + h_of(&vaa, -1.0) * win[1].laa;
                    t[Q_LBB] = h_of(&vbb, 1.0) * win[0].lbb + h_of(&vbb, -1.0) * win[1].lbb;
                }
                if want.cross {
                    t[Q_LAB] = h_of(&vab, 1.0) * win[0].lab + h_of(&vab, -1.0) * win[1].lab;
                }
                if want.m {
                    let vba = vab.swapped();
                    let (hab_p, hab_n) = (h_of(&vab, 1.0), h_of(&vab, -1.0));
                    let (hba_p, hba_n) = (h_of(&vba, 1.0), h_of(&vba, -1.0));
                    t[Q_M] = hab_p * win[0].m1 + hab_n * win[1].m1 + hba_p * win[0].m2 + hba_n * win[1].m2;
                    let (sab_p, aab_p) = split_weights(hab_p, hab_n);
                    let (sab_n, aab_n) = split_weights(hab_n, hab_p);
                    let (sba_p, aba_p) = split_weights(hba_p, hba_n);
                    let (sba_n, aba_n) = split_weights(hba_n, hba_p);
                    t[Q_MP] = sab_p * win[0].m1 + sab_n * win[1].m1 + sba_p * win[0].m2 + sba_n * win[1].m2;
                    t[Q_MM] = aab_p * win[0].m1 + aab_n * win[1].m1 + aba_p * win[0].m2 + aba_n * win[1].m2;
                }
                terms.push(t);
            }
            let mut integral = [C::new(0.0, 0.0); NQ];
            let mut last_rel = [0.0; NQ];
            let mut peak = [0.0; NQ];
            let mut first = [C::new(0.0, 0.0); NQ];
            for q in 0..NQ {
                let mut col: Vec<C> = terms.iter().map(|t| t[q]).collect();
                let max = col.iter().fold(0.0f64, |m, z| m.max(z.norm()));
                peak[q] = max;
                last_rel[q] = if max > 0.0 { col[n_om - 1].norm() / max } else { 0.0 };
                first[q] = col[0];
                col[0] *= 0.5;
                col[n_om - 1] *= 0.5;
                integral[q] = sum(&col, controls.pairwise) * h;
            }
            (integral, last_rel, peak, first)
        })
        .collect();

    let x = pair.gamma.cos();
    let p = legendre_table(controls.l_cut, x);
    let mut totals = [C::new(0.0, 0.0); NQ];
    let mut diag = Diagnostics { l_cut: controls.l_cut, omega_max: grid.omega(n_om - 1), ..Default::default() };
    let active: Vec<usize> = (0..NQ)
        .filter(|&q| match q {
            Q_LAA | Q_LBB => want.local,
            Q_LAB => want.cross,
            _ => want.m,
        })
        .collect();
    for &q in &active {
        let angular = |l: usize| (2 * l + 1) as f64 * if q == Q_LAA || q == Q_LBB { 1.0 } else { p[l] };
        let summands: Vec<C> = per_l.iter().enumerate().map(|(l, v)| v.0[q] * angular(l)).collect();
        let total = sum(&summands, controls.pairwise);
        totals[q] = total;
        let scale = total.norm();
        if scale > 0.0 {
            let last_l = summands[controls.l_cut].norm() / scale;
            diag.last_l_relative = diag.last_l_relative.max(last_l);
            // Sliver: first-point integrand held constant over [0, ω_min).
            let sliver: Vec<C> = per_l.iter().enumerate().map(|(l, v)| v.3[q] * angular(l)).collect();
            let sl = sum(&sliver, controls.pairwise).norm() * grid.omega_min / scale;
            diag.sliver_relative = diag.sliver_relative.max(sl);
        }
        for v in &per_l {
            diag.last_omega_relative = diag.last_omega_relative.max(v.1[q]);
        }
    }
    diag.tail_warning = diag.last_l_relative > TAIL_WARNING;
    Ok(Integrals { totals, diag })
}

fn l_prefactor(d: &DetectorSpec, dp: &DetectorSpec) -> f64 {
    d.coupling * dp.coupling * d.redshift() * dp.redshift() / (16.0 * PI * PI)
}

/// L_DD' for D, D' ∈ {A, B} given as `(a_first, b_second)` selectors:
/// `l_term(pair, 'A', 'B', ..)` is L_AB.
pub fn l_term(pair: &DetectorPairSpec, d: char, dp: char, table: &ModeTable, controls: &ConvergenceControls) -> Result<(C, Diagnostics)> {
    let pick = |c: char| match c {
        'A' | 'a' => Ok(pair.a),
        'B' | 'b' => Ok(pair.b),
        _ => Err(Error::Domain(format!("unknown detector label '{c}'"))),
    };
    let (x, y) = (pick(d)?, pick(dp)?);
    if d.eq_ignore_ascii_case(&dp) {
        // Local term: both windows belong to one detector, γ = 0.
        let single = DetectorPairSpec { a: x, b: x, gamma: 0.0, state: pair.state };
        let it = integrate(&single, table, controls, Wanted { local: true, cross: false, m: false })?;
        return Ok((it.totals[Q_LAA] * l_prefactor(&x, &x), it.diag));
    }
    let p2 = DetectorPairSpec { a: x, b: y, ..*pair };
    let it = integrate(&p2, table, controls, Wanted { local: false, cross: true, m: false })?;
    Ok((it.totals[Q_LAB] * l_prefactor(&x, &y), it.diag))
}

/// (M, M₊, M₋, diagnostics).
pub fn m_term(pair: &DetectorPairSpec, table: &ModeTable, controls: &ConvergenceControls) -> Result<(C, C, C, Diagnostics)> {
    let it = integrate(pair, table, controls, Wanted { local: false, cross: false, m: true })?;
    let pre = -l_prefactor(&pair.a, &pair.b);
    Ok((it.totals[Q_M] * pre, it.totals[Q_MP] * pre, it.totals[Q_MM] * pre, it.diag))
}

/// Which frequency integrand [`integrand`] returns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Quantity {
    LocalA,
    Cross,
    M,
}

/// ℓ-summed ω-integrand of one quantity on the table grid, with its prefactor,
/// so that the trapezoid rule over the returned points reproduces the entry.
pub fn integrand(pair: &DetectorPairSpec, table: &ModeTable, controls: &ConvergenceControls, q: Quantity) -> Result<Vec<(f64, C)>> {
    pair.validate()?;
    let grid = &table.grid;
    table.record_at(controls.l_cut, grid.n_omega() - 1)?;
    let ia = grid.radius_index(pair.a.r).map_err(|e| Error::Coverage(e.to_string()))?;
    let ib = grid.radius_index(pair.b.r).map_err(|e| Error::Coverage(e.to_string()))?;
    let want = Wanted { local: q == Quantity::LocalA, cross: q == Quantity::Cross, m: q == Quantity::M };
    let p = legendre_table(controls.l_cut, pair.gamma.cos());
    let (pre, rb) = match q {
        Quantity::LocalA => (l_prefactor(&pair.a, &pair.a), ia),
        Quantity::Cross => (l_prefactor(&pair.a, &pair.b), ib),
        Quantity::M => (-l_prefactor(&pair.a, &pair.b), ib),
    };
    (0..grid.n_omega())
        .into_par_iter()
        .map(|k| {
            let w = grid.omega(k);
            let win = [windows(pair, w, want)?, windows(pair, -w, want)?];
            let mut acc = C::new(0.0, 0.0);
            for l in 0..=controls.l_cut {
                let v = ModeValues::from_table(table, l, k, ia, rb);
                let h = |v: &ModeValues, s: f64| kernel_from_values(pair.state, s * w, v) / (s * w);
                let (t, ang) = match q {
                    Quantity::LocalA => (h(&v, 1.0) * win[0].laa + h(&v, -1.0) * win[1].laa, 1.0),
                    Quantity::Cross => (h(&v, 1.0) * win[0].lab + h(&v, -1.0) * win[1].lab, p[l]),
                    Quantity::M => {
                        let u = v.swapped();
                        (h(&v, 1.0) * win[0].m1 + h(&v, -1.0) * win[1].m1 + h(&u, 1.0) * win[0].m2 + h(&u, -1.0) * win[1].m2, p[l])
                    }
                };
                acc += t * ((2 * l + 1) as f64 * ang);
            }
            Ok((w, acc * pre))
        })
        .collect()
}

/// Every density-matrix entry for one detector pair.
pub fn evaluate(pair: &DetectorPairSpec, table: &ModeTable, controls: &ConvergenceControls) -> Result<PairResponse> {
    let it = integrate(pair, table, controls, Wanted { local: true, cross: true, m: true })?;
    let (a, b) = (&pair.a, &pair.b);
    let l_aa = (it.totals[Q_LAA] * l_prefactor(a, a)).re;
    let l_bb = (it.totals[Q_LBB] * l_prefactor(b, b)).re;
    let l_ab = it.totals[Q_LAB] * l_prefactor(a, b);
    let pre = -l_prefactor(a, b);
    let (m, m_plus, m_minus) = (it.totals[Q_M] * pre, it.totals[Q_MP] * pre, it.totals[Q_MM] * pre);
    Ok(PairResponse { l_aa, l_bb, l_ab, m, m_plus, m_minus, negativity: negativity(l_aa, l_bb, m), diagnostics: it.diag })
}
