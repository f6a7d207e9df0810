//! Regge-Wheeler radial modes, scattering coefficients and rescaled modes.
//!
//! Units M = 1. Modes are normalised as
//!
//! * in:  R ~ e^{-iωr*} at the horizon, R ~ I e^{-iωr*} + ρ_in e^{iωr*} at infinity;
//! * up:  R ~ e^{iωr*} at infinity,     R ~ I e^{iωr*} + ρ_up e^{-iωr*} at the horizon.
//!
//! Deep under the centrifugal barrier |I| exceeds the f64 range, so solutions
//! and coefficients carry a separate natural-log scale.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{tortoise, tortoise_inverse, SpacetimeParams};

type C = Complex64;

const UNIT: SpacetimeParams = SpacetimeParams { mass: 1.0 };
const SQRT3_6: f64 = 0.288_675_134_594_812_9;
const SQRT3_12: f64 = 0.144_337_567_297_406_4;
const RESCALE_ABOVE: f64 = 1e100;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeIndex {
    pub l: usize,
    pub omega: f64,
}

impl ModeIndex {
    pub fn new(l: usize, omega: f64) -> Self {
        Self { l, omega }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeKind {
    In,
    Up,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    /// Local relative error allowed per integration step.
    pub step_tol: f64,
    /// Relative size of the last retained term of the outer boundary series.
    pub series_tol: f64,
    /// Largest term-to-sum ratio accepted for the near-horizon Jaffe series.
    pub jaffe_max_cancellation: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { step_tol: 1e-9, series_tol: 1e-15, jaffe_max_cancellation: 1e3 }
    }
}

/// One sample of a radial solution: R = value * exp(log_scale), likewise dR/dr*.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialSample {
    pub r: f64,
    pub rstar: f64,
    pub value: C,
    pub deriv: C,
    pub log_scale: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RadialSolution {
    pub mode: ModeIndex,
    pub kind: ModeKind,
    pub samples: Vec<RadialSample>,
}

/// I, ρ_in, ρ_up, each equal to the stored mantissa times exp(log_scale).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScatteringCoeffs {
    pub incidence: C,
    pub rho_in: C,
    pub rho_up: C,
    pub log_scale: f64,
}

impl ScatteringCoeffs {
    pub fn ln_abs_incidence(&self) -> f64 {
        self.incidence.norm().ln() + self.log_scale
    }

    fn flux_residual(&self, rho: C) -> f64 {
        let (i2, r2) = (self.incidence.norm_sqr(), rho.norm_sqr());
        let two_l = 2.0 * self.log_scale;
        if two_l + i2.ln() > 0.0 {
            // Relative to |I|^2 >= 1.
            ((i2 - r2) - (-two_l).exp()).abs() / i2
        } else {
            ((i2 - r2) * two_l.exp() - 1.0).abs()
        }
    }

    /// | |I|^2 - |ρ_in|^2 - 1 | / max(1, |I|^2).
    pub fn flux_in_error(&self) -> f64 {
        self.flux_residual(self.rho_in)
    }

    /// | |I|^2 - |ρ_up|^2 - 1 | / max(1, |I|^2).
    pub fn flux_up_error(&self) -> f64 {
        self.flux_residual(self.rho_up)
    }

    /// |ρ_in / I|.
    pub fn reflection_in(&self) -> f64 {
        self.rho_in.norm() / self.incidence.norm()
    }
}

/// V_l(r) = f (2/r^3 + l(l+1)/r^2).
pub fn rw_potential(l: usize, r: f64) -> Result<f64> {
    if !(r >= 2.0) || !r.is_finite() {
        return Err(Error::Domain(format!("potential requested at r = {r} inside the horizon")));
    }
    let lf = (l * (l + 1)) as f64;
    Ok((1.0 - 2.0 / r) * (2.0 / (r * r * r) + lf / (r * r)))
}

// ---------------------------------------------------------------------------
// Magnus propagator in r for y = (R, dR/dr*):  dy/dr = [[0, 1/f], [(V - ω^2)/f, 0]] y.

#[derive(Debug, Clone, Copy)]
pub(crate) struct Propagator {
    ll: f64,
    w2: f64,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct State {
    pub r: f64,
    pub y: [C; 2],
    pub log_scale: f64,
}

impl State {
    fn rescale(&mut self) {
        let n = self.y[0].norm().max(self.y[1].norm());
        if n > RESCALE_ABOVE || (n < 1.0 / RESCALE_ABOVE && n > 0.0) {
            let inv = 1.0 / n;
            self.y[0] *= inv;
            self.y[1] *= inv;
            self.log_scale += n.ln();
        }
    }

    fn sample(&self) -> RadialSample {
        RadialSample {
            r: self.r,
            rstar: tortoise(&UNIT, self.r).unwrap_or(f64::NEG_INFINITY),
            value: self.y[0],
            deriv: self.y[1],
            log_scale: self.log_scale,
        }
    }
}

fn apply(m: &[[f64; 2]; 2], y: &[C; 2]) -> [C; 2] {
    [y[0] * m[0][0] + y[1] * m[0][1], y[0] * m[1][0] + y[1] * m[1][1]]
}

impl Propagator {
    pub(crate) fn new(l: usize, omega: f64) -> Self {
        Self { ll: (l * (l + 1)) as f64, w2: omega * omega }
    }

    /// (1/f, (V - ω^2)/f) at r.
    #[inline]
    fn coef(&self, r: f64) -> (f64, f64) {
        let ir = 1.0 / r;
        let inv_f = r / (r - 2.0);
        (inv_f, ir * ir * (2.0 * ir + self.ll) - self.w2 * inv_f)
    }

    /// Fourth-order Magnus step matrix from r to r + h.
    #[inline]
    pub(crate) fn step_matrix(&self, r: f64, h: f64) -> [[f64; 2]; 2] {
        let (a1, c1) = self.coef(r + h * (0.5 - SQRT3_6));
        let (a2, c2) = self.coef(r + h * (0.5 + SQRT3_6));
        let alpha = SQRT3_12 * h * h * (a2 * c1 - a1 * c2);
        let beta = 0.5 * h * (a1 + a2);
        let gamma = 0.5 * h * (c1 + c2);
        let s2 = alpha * alpha + beta * gamma;
        let (ch, sh) = if s2.abs() < 1e-6 {
            // cosh(s), sinh(s)/s as series in s^2.
            (1.0 + s2 / 2.0 * (1.0 + s2 / 12.0 * (1.0 + s2 / 30.0)), 1.0 + s2 / 6.0 * (1.0 + s2 / 20.0 * (1.0 + s2 / 42.0)))
        } else if s2 > 0.0 {
            let s = s2.sqrt();
            (s.cosh(), s.sinh() / s)
        } else {
            let s = (-s2).sqrt();
            (s.cos(), s.sin() / s)
        };
        [[ch + sh * alpha, sh * beta], [sh * gamma, ch - sh * alpha]]
    }

    /// Fixed-step integration with `n` equal steps (used by order checks).
    pub(crate) fn integrate_fixed(&self, mut st: State, r1: f64, n: usize) -> State {
        let h = (r1 - st.r) / n as f64;
        let r0 = st.r;
        for k in 0..n {
            let r = r0 + h * k as f64;
            st.y = apply(&self.step_matrix(r, h), &st.y);
            st.rescale();
        }
        st.r = r1;
        st
    }

    /// Adaptive integration from `st.r` to `r1` with step doubling and
    /// Richardson extrapolation. Returns the state and the last step size.
    pub(crate) fn integrate(&self, mut st: State, r1: f64, mut h: f64, tol: f64) -> Result<(State, f64)> {
        let dir = (r1 - st.r).signum();
        if dir == 0.0 {
            return Ok((st, h));
        }
        h = dir * h.abs().max(1e-12);
        let mut steps = 0usize;
        loop {
            let remaining = r1 - st.r;
            if remaining * dir <= 0.0 {
                break;
            }
            // Geometric cap keeps steps well away from the horizon.
            let cap = 0.25 * (st.r - 2.0);
            if h.abs() > cap {
                h = dir * cap;
            }
            let last = h.abs() >= remaining.abs();
            let step = if last { remaining } else { h };
            steps += 1;
            if steps > 2_000_000 {
                return Err(Error::Convergence(format!("radial integration stalled at r = {}", st.r)));
            }
            let full = apply(&self.step_matrix(st.r, step), &st.y);
            let half = 0.5 * step;
            let mid = apply(&self.step_matrix(st.r, half), &st.y);
            let fine = apply(&self.step_matrix(st.r + half, half), &mid);
            let scale = fine[0].norm() + fine[1].norm();
            let err = ((fine[0] - full[0]).norm() + (fine[1] - full[1]).norm()) / scale.max(1e-300);
            if !err.is_finite() {
                h = 0.25 * step;
                continue;
            }
            let fac = if err == 0.0 { 2.0 } else { (0.9 * (tol / err).powf(0.2)).clamp(0.2, 2.0) };
            if err <= tol {
                st.y = [fine[0] + (fine[0] - full[0]) / 15.0, fine[1] + (fine[1] - full[1]) / 15.0];
                st.r = if last { r1 } else { st.r + step };
                st.rescale();
                if !last {
                    h = step * fac;
                }
            } else {
                h = step * fac;
            }
        }
        Ok((st, h))
    }
}

// ---------------------------------------------------------------------------
// Boundary data.

/// Result of a Jaffe series evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JaffeValue {
    pub value: C,
    pub deriv: C,
    pub terms: usize,
    /// Last retained term relative to the partial sum.
    pub eps: C,
    /// Largest term relative to the sum; precision lost to cancellation.
    pub cancellation: f64,
}

pub const JAFFE_MAX_TERMS: usize = 5000;

/// Jaffe coefficients a_0..=a_n for (l, ω); exposed for recurrence checks.
pub fn jaffe_coefficients(mode: ModeIndex, n: usize) -> Vec<C> {
    let wb = 2.0 * mode.omega;
    let ll = (mode.l * (mode.l + 1)) as f64;
    let i = C::i();
    let mut a = Vec::with_capacity(n + 1);
    a.push((-2.0 * i * wb).exp());
    for k in 0..n {
        let kf = k as f64;
        let (alpha, beta, gamma) = jaffe_recurrence(kf, wb, ll);
        let prev = if k == 0 { C::new(0.0, 0.0) } else { a[k - 1] };
        let next = -(a[k] * beta + prev * gamma) / alpha;
        a.push(next);
    }
    a
}

/// (α_k, β_k, γ_k) of the Jaffe recurrence a_{k+1} α_k + a_k β_k + a_{k-1} γ_k = 0.
pub fn jaffe_recurrence(k: f64, wb: f64, ll: f64) -> (C, C, C) {
    let i = C::i();
    let alpha = (k + 1.0) * (k + 1.0 - 2.0 * i * wb);
    let beta = -1.0 - 2.0 * k * (k + 1.0) - ll + 4.0 * wb * (i + 2.0 * k * i + 2.0 * wb);
    let gamma = (k - 2.0 * i * wb) * (k - 2.0 * i * wb);
    (alpha, beta, gamma)
}

/// In-mode from the Jaffe series at radius r (units M = 1), with dR/dr*.
pub fn solve_in_jaffe(mode: ModeIndex, r: f64) -> Result<JaffeValue> {
    if !(r > 2.0) || !r.is_finite() {
        return Err(Error::Domain(format!("Jaffe series requested at r = {r}")));
    }
    if mode.omega == 0.0 || !mode.omega.is_finite() {
        return Err(Error::Domain("Jaffe series needs omega != 0".into()));
    }
    if mode.omega < 0.0 {
        let v = solve_in_jaffe(ModeIndex::new(mode.l, -mode.omega), r)?;
        return Ok(JaffeValue { value: v.value.conj(), deriv: v.deriv.conj(), eps: v.eps.conj(), ..v });
    }
    let rb = r / 2.0;
    let wb = 2.0 * mode.omega;
    let ll = (mode.l * (mode.l + 1)) as f64;
    let x = (rb - 1.0) / rb;
    let i = C::i();

    let mut a_prev = C::new(0.0, 0.0);
    let mut a = (-2.0 * i * wb).exp();
    let mut xn = 1.0;
    let mut sum = a;
    let mut dsum = C::new(0.0, 0.0);
    let mut max_term = a.norm();
    let mut eps = C::new(1.0, 0.0);
    let mut quiet = 0;
    let mut n = 0;
    while n < JAFFE_MAX_TERMS {
        let (alpha, beta, gamma) = jaffe_recurrence(n as f64, wb, ll);
        let next = -(a * beta + a_prev * gamma) / alpha;
        a_prev = a;
        a = next;
        n += 1;
        dsum += a * (n as f64 * xn);
        xn *= x;
        let term = a * xn;
        sum += term;
        max_term = max_term.max(term.norm());
        eps = term / sum;
        if eps.re.abs() < 1e-16 && eps.im.abs() < 1e-16 {
            quiet += 1;
            // Two consecutive small terms guard against accidental zeros.
            if quiet >= 2 {
                break;
            }
        } else {
            quiet = 0;
        }
    }
    if quiet < 2 {
        return Err(Error::Truncation { terms: n, achieved: eps.norm() });
    }
    let phase = i * wb * (2.0 * rb.ln() - (rb - 1.0).ln() + rb);
    let pref = phase.exp();
    let dlog = i * wb * (2.0 / rb - 1.0 / (rb - 1.0) + 1.0);
    let value = pref * sum;
    let d_rbar = pref * (dlog * sum + dsum / (rb * rb));
    let f = 1.0 - 1.0 / rb;
    Ok(JaffeValue { value, deriv: 0.5 * f * d_rbar, terms: n + 1, eps, cancellation: max_term / sum.norm() })
}

/// Outer boundary data for the up-mode at radius r from the 1/r series.
/// Returns None when the series does not reach `tol` (or loses precision to a hump).
fn up_boundary(mode: ModeIndex, r: f64, tol: f64) -> Option<(C, C)> {
    let w = mode.omega;
    let ll = (mode.l * (mode.l + 1)) as f64;
    let i = C::i();
    let mut a_prev = C::new(0.0, 0.0);
    let mut a = C::new(1.0, 0.0);
    let mut u = a;
    let mut du = C::new(0.0, 0.0);
    let mut rk = 1.0;
    let mut max_term: f64 = 1.0;
    for k in 0..600 {
        let kf = k as f64;
        let next = ((kf * (kf + 1.0) - ll) * a - 2.0 * kf * kf * a_prev) / (2.0 * i * w * (kf + 1.0));
        a_prev = a;
        a = next;
        rk /= r;
        let term = a * rk;
        u += term;
        du -= term * ((kf + 1.0) / r);
        max_term = max_term.max(term.norm());
        if term.norm() < tol * u.norm() && k > 1 {
            if max_term / u.norm() > 1e2 {
                return None;
            }
            let f = 1.0 - 2.0 / r;
            let rs = tortoise(&UNIT, r).ok()?;
            let e = (i * w * rs).exp();
            return Some((e * u, e * (i * w * u + f * du)));
        }
        if !term.norm().is_finite() {
            return None;
        }
    }
    None
}

/// Smallest radius >= r_start (doubling) where the up boundary series converges.
fn up_start(mode: ModeIndex, r_start: f64, tol: f64) -> Result<(f64, [C; 2])> {
    let mut r = r_start;
    for _ in 0..60 {
        if let Some((v, d)) = up_boundary(mode, r, tol) {
            return Ok((r, [v, d]));
        }
        r *= 2.0;
    }
    Err(Error::Convergence(format!("outer series for l = {} omega = {} never converged", mode.l, mode.omega)))
}

/// Outer radius floor: r* >= max(13, 10/ω).
pub fn outer_floor(omega: f64) -> f64 {
    tortoise_inverse(&UNIT, 13f64.max(10.0 / omega.abs())).unwrap_or(f64::INFINITY)
}

fn check_mode(mode: ModeIndex) -> Result<()> {
    if mode.omega == 0.0 || !mode.omega.is_finite() {
        return Err(Error::Domain(format!("mode frequency must be finite and non-zero, got {}", mode.omega)));
    }
    Ok(())
}

fn check_radii(radii: &[f64]) -> Result<()> {
    for &r in radii {
        if !(r > 2.0) || !r.is_finite() {
            return Err(Error::Domain(format!("radius {r} is not outside the horizon")));
        }
    }
    Ok(())
}

fn conj_solution(mut s: RadialSolution) -> RadialSolution {
    s.mode.omega = -s.mode.omega;
    for x in &mut s.samples {
        x.value = x.value.conj();
        x.deriv = x.deriv.conj();
    }
    s
}

/// Order in which to visit `radii` when sweeping in direction `dir`.
fn sweep_order(radii: &[f64], outward: bool) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..radii.len()).collect();
    idx.sort_by(|&a, &b| radii[a].total_cmp(&radii[b]));
    if !outward {
        idx.reverse();
    }
    idx
}

/// Up-mode at the given radii, integrated inward from an automatically
/// placed outer boundary.
pub fn solve_up_at(mode: ModeIndex, radii: &[f64], opts: &SolverOptions) -> Result<RadialSolution> {
    check_mode(mode)?;
    check_radii(radii)?;
    if mode.omega < 0.0 {
        return solve_up_at(ModeIndex::new(mode.l, -mode.omega), radii, opts).map(conj_solution);
    }
    let rmax_req = radii.iter().cloned().fold(0.0, f64::max);
    let r0 = outer_floor(mode.omega).max(1.25 * rmax_req);
    let (r0, y0) = up_start(mode, r0, opts.series_tol)?;
    integrate_through(mode, State { r: r0, y: y0, log_scale: 0.0 }, radii, false, opts, ModeKind::Up)
}

/// Up-mode on a tortoise-coordinate grid. The boundary is imposed at the
/// largest grid point, which must be far enough out for the series to converge.
pub fn solve_up(mode: ModeIndex, rstar_grid: &[f64], opts: &SolverOptions) -> Result<RadialSolution> {
    check_mode(mode)?;
    if rstar_grid.is_empty() {
        return Ok(RadialSolution { mode, kind: ModeKind::Up, samples: vec![] });
    }
    if mode.omega < 0.0 {
        return solve_up(ModeIndex::new(mode.l, -mode.omega), rstar_grid, opts).map(conj_solution);
    }
    let radii: Vec<f64> = rstar_grid.iter().map(|&s| tortoise_inverse(&UNIT, s)).collect::<Result<_>>()?;
    let rmax = radii.iter().cloned().fold(0.0, f64::max);
    let (v, d) = up_boundary(mode, rmax, opts.series_tol).ok_or_else(|| {
        Error::Convergence(format!(
            "outer series for l = {} omega = {} does not converge at r*_max = {}; enlarge the grid",
            mode.l,
            mode.omega,
            tortoise(&UNIT, rmax).unwrap_or(f64::NAN)
        ))
    })?;
    integrate_through(mode, State { r: rmax, y: [v, d], log_scale: 0.0 }, &radii, false, opts, ModeKind::Up)
}

/// Near-horizon starting point for the in-mode: the largest r <= r_limit at
/// which the Jaffe series keeps its cancellation below the configured bound.
fn in_start(mode: ModeIndex, r_limit: f64, opts: &SolverOptions) -> Result<State> {
    let wb = 2.0 * mode.omega;
    let mut d = (r_limit / 2.0 - 1.0).min(0.5).min(1.2 / wb);
    let mut best: Option<(f64, JaffeValue)> = None;
    for _ in 0..40 {
        let r = 2.0 * (1.0 + d);
        if let Ok(j) = solve_in_jaffe(mode, r) {
            if j.cancellation <= opts.jaffe_max_cancellation {
                return Ok(State { r, y: [j.value, j.deriv], log_scale: 0.0 });
            }
            if best.map_or(true, |(_, b)| j.cancellation < b.cancellation) {
                best = Some((r, j));
            }
        }
        d *= 0.5;
    }
    match best {
        Some((r, j)) => Ok(State { r, y: [j.value, j.deriv], log_scale: 0.0 }),
        None => Err(Error::Convergence(format!("no usable Jaffe starting point for l = {} omega = {}", mode.l, mode.omega))),
    }
}

/// In-mode at the given radii: Jaffe series near the horizon, then outward integration.
pub fn solve_in(mode: ModeIndex, radii: &[f64], opts: &SolverOptions) -> Result<RadialSolution> {
    check_mode(mode)?;
    check_radii(radii)?;
    if radii.is_empty() {
        return Ok(RadialSolution { mode, kind: ModeKind::In, samples: vec![] });
    }
    if mode.omega < 0.0 {
        return solve_in(ModeIndex::new(mode.l, -mode.omega), radii, opts).map(conj_solution);
    }
    let rmin = radii.iter().cloned().fold(f64::INFINITY, f64::min);
    let st = in_start(mode, rmin, opts)?;
    integrate_through(mode, st, radii, true, opts, ModeKind::In)
}

fn integrate_through(
    mode: ModeIndex,
    mut st: State,
    radii: &[f64],
    outward: bool,
    opts: &SolverOptions,
    kind: ModeKind,
) -> Result<RadialSolution> {
    let prop = Propagator::new(mode.l, mode.omega);
    let mut samples = vec![None; radii.len()];
    let mut h = 0.05 * (st.r - 2.0);
    for i in sweep_order(radii, outward) {
        let (next, hn) = prop.integrate(st, radii[i], h, opts.step_tol)?;
        st = next;
        h = hn;
        samples[i] = Some(st.sample());
    }
    Ok(RadialSolution { mode, kind, samples: samples.into_iter().map(Option::unwrap).collect() })
}

// ---------------------------------------------------------------------------
// Coefficients.

/// Wronskian a b' - b a' of two samples at the same radius, with its log scale.
fn wronskian(a: &RadialSample, b: &RadialSample) -> (C, f64) {
    (a.value * b.deriv - b.value * a.deriv, a.log_scale + b.log_scale)
}

/// Scattering coefficients from the Wronskians of in- and up-solutions
/// sampled at common radii. Fails if the Wronskian varies by more than 1e-8.
pub fn extract_coeffs(mode: ModeIndex, in_sol: &RadialSolution, up_sol: &RadialSolution) -> Result<ScatteringCoeffs> {
    Ok(extract_with_spread(mode, in_sol, up_sol, 1e-8)?.0)
}

/// Like [`extract_coeffs`], also returning the relative Wronskian spread.
pub fn extract_with_spread(
    mode: ModeIndex,
    in_sol: &RadialSolution,
    up_sol: &RadialSolution,
    max_spread: f64,
) -> Result<(ScatteringCoeffs, f64)> {
    check_mode(mode)?;
    if in_sol.samples.is_empty() || in_sol.samples.len() != up_sol.samples.len() {
        return Err(Error::IllConditioned("in and up solutions must share a non-empty grid".into()));
    }
    let ws: Vec<(C, f64)> = in_sol.samples.iter().zip(&up_sol.samples).map(|(a, b)| wronskian(a, b)).collect();
    // Reference: the sample with the median |W| (log scale included).
    let mut order: Vec<usize> = (0..ws.len()).collect();
    let lnabs = |w: &(C, f64)| w.0.norm().ln() + w.1;
    order.sort_by(|&a, &b| lnabs(&ws[a]).total_cmp(&lnabs(&ws[b])));
    let k = order[order.len() / 2];
    let (w_ref, s_ref) = ws[k];
    let mut spread: f64 = 0.0;
    for (w, s) in &ws {
        let rel = (w * (s - s_ref).exp() - w_ref).norm() / w_ref.norm();
        spread = spread.max(rel);
    }
    if !(spread <= max_spread) {
        return Err(Error::IllConditioned(format!(
            "Wronskian varies by {spread:e} for l = {} omega = {}",
            mode.l, mode.omega
        )));
    }
    let a = &in_sol.samples[k];
    let b = &up_sol.samples[k];
    let two_i_w = 2.0 * C::i() * mode.omega;
    let inc = w_ref / two_i_w;
    let (w_in_upc, _) = wronskian(a, &RadialSample { value: b.value.conj(), deriv: b.deriv.conj(), ..*b });
    let (w_up_inc, _) = wronskian(b, &RadialSample { value: a.value.conj(), deriv: a.deriv.conj(), ..*a });
    let rho_in = -w_in_upc / two_i_w;
    let rho_up = w_up_inc / two_i_w;
    // Scales: W(in, up*) carries s_in + s_up, W(up, in*) the same.
    let norm = inc.norm();
    Ok((
        ScatteringCoeffs { incidence: inc / norm, rho_in: rho_in / norm, rho_up: rho_up / norm, log_scale: s_ref + norm.ln() },
        spread,
    ))
}

/// R̄ = R / (r I) for one sample.
pub fn rescaled_mode(sample: &RadialSample, coeffs: &ScatteringCoeffs) -> Result<C> {
    if coeffs.ln_abs_incidence() < -690.0 {
        return Err(Error::Domain("incidence amplitude below 1e-300".into()));
    }
    Ok(sample.value / (sample.r * coeffs.incidence) * (sample.log_scale - coeffs.log_scale).exp())
}

/// Everything a table entry needs for one (l, ω).
#[derive(Debug, Clone)]
pub struct ModeSolution {
    pub mode: ModeIndex,
    pub coeffs: ScatteringCoeffs,
    pub rbar_in: Vec<C>,
    pub rbar_up: Vec<C>,
    pub wronskian_spread: f64,
}

/// Solves in- and up-modes at `radii` (plus an audit radius outside them)
/// and returns rescaled values and coefficients.
pub fn solve_mode(mode: ModeIndex, radii: &[f64], opts: &SolverOptions) -> Result<ModeSolution> {
    check_mode(mode)?;
    check_radii(radii)?;
    if mode.omega < 0.0 {
        let s = solve_mode(ModeIndex::new(mode.l, -mode.omega), radii, opts)?;
        return Ok(ModeSolution {
            mode,
            coeffs: ScatteringCoeffs {
                incidence: s.coeffs.incidence.conj(),
                rho_in: s.coeffs.rho_in.conj(),
                rho_up: s.coeffs.rho_up.conj(),
                log_scale: s.coeffs.log_scale,
            },
            rbar_in: s.rbar_in.iter().map(|z| z.conj()).collect(),
            rbar_up: s.rbar_up.iter().map(|z| z.conj()).collect(),
            wronskian_spread: s.wronskian_spread,
        });
    }
    let mut pts = radii.to_vec();
    let rmax = radii.iter().cloned().fold(2.0, f64::max);
    pts.push(if radii.is_empty() { 6.0 } else { 1.25 * rmax + 1.0 });
    let with_wrap = |e: Error| Error::Mode { l: mode.l, omega: mode.omega, source: Box::new(e) };
    let ins = solve_in(mode, &pts, opts).map_err(with_wrap)?;
    let ups = solve_up_at(mode, &pts, opts).map_err(with_wrap)?;
    let (coeffs, spread) = extract_with_spread(mode, &ins, &ups, f64::INFINITY).map_err(with_wrap)?;
    let n = radii.len();
    let rbar_in = ins.samples[..n].iter().map(|s| rescaled_mode(s, &coeffs)).collect::<Result<_>>()?;
    let rbar_up = ups.samples[..n].iter().map(|s| rescaled_mode(s, &coeffs)).collect::<Result<_>>()?;
    Ok(ModeSolution { mode, coeffs, rbar_in, rbar_up, wronskian_spread: spread })
}

/// Fourth-order convergence check: error ratio between fixed-step Magnus
/// integrations with n and 2n steps, compared with a 16n-step reference.
/// Returns the measured order log2(e_n / e_2n).
pub fn magnus_order(mode: ModeIndex, r0: f64, r1: f64, n: usize) -> Result<f64> {
    check_mode(mode)?;
    let (v, d) = up_boundary(mode, r0, 1e-15).ok_or_else(|| Error::Convergence("outer series".into()))?;
    let prop = Propagator::new(mode.l, mode.omega.abs());
    let st = State { r: r0, y: [v, d], log_scale: 0.0 };
    let val = |k: usize| {
        let s = prop.integrate_fixed(st, r1, k);
        s.y[0] * s.log_scale.exp()
    };
    let reference = val(16 * n);
    let e1 = (val(n) - reference).norm();
    let e2 = (val(2 * n) - reference).norm();
    Ok((e1 / e2).log2())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn potential_examples() {
        assert_eq!(rw_potential(0, 2.0).unwrap(), 0.0);
        assert!((rw_potential(1, 4.0).unwrap() - 5.0 / 64.0).abs() < 1e-16);
        assert!(rw_potential(0, 1e9).unwrap() < 1e-26);
        assert!(rw_potential(0, 1.9).is_err());
    }

    #[test]
    fn magnus_is_fourth_order() {
        let p = magnus_order(ModeIndex::new(2, 0.7), 30.0, 6.0, 200).unwrap();
        assert!((p - 4.0).abs() < 0.3, "order {p}");
    }

    #[test]
    fn jaffe_horizon_normalisation() {
        let m = ModeIndex::new(1, 0.3);
        let r = 2.0 + 1e-9;
        let j = solve_in_jaffe(m, r).unwrap();
        let rs = tortoise(&UNIT, r).unwrap();
        let want = (-C::i() * 0.3 * rs).exp();
        assert!((j.value - want).norm() < 1e-7);
    }
}
