//! Complex error functions and Legendre polynomials.
//!
//! Everything is built on the Faddeeva function `w(z) = exp(-z^2) erfc(-iz)`,
//! evaluated in the upper half-plane by one of three methods depending on
//! `|z|`, and continued to the lower half-plane by reflection.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type ComplexValue = Complex64;

const FRAC_1_SQRT_PI: f64 = 0.564_189_583_547_756_3;
const FRAC_2_SQRT_PI: f64 = 1.128_379_167_095_512_6;

/// Largest |z| accepted by the error functions.
pub const MAX_ARG: f64 = 1.0e3;

/// Below this radius `w` is summed from its Taylor series.
const TAYLOR_RADIUS: f64 = 0.5;
/// Above this radius the Laplace continued fraction is used.
const CF_RADIUS: f64 = 8.0;
/// Number of terms in the rational approximation used in between.
const WEIDEMAN_N: usize = 40;
/// Below this radius erf is summed from its own Taylor series.
const ERF_TAYLOR_RADIUS: f64 = 2.0;

struct Weideman {
    l: f64,
    // Horner order: highest power first.
    coef: Vec<f64>,
}

fn weideman() -> &'static Weideman {
    static TABLE: OnceLock<Weideman> = OnceLock::new();
    TABLE.get_or_init(|| {
        let n = WEIDEMAN_N;
        let m = 2 * n;
        let l = (n as f64 / 2f64.sqrt()).sqrt();
        let samples: Vec<(f64, f64)> = (1..m)
            .map(|k| {
                let theta = k as f64 * PI / m as f64;
                let t = l * (theta / 2.0).tan();
                (k as f64, (-t * t).exp() * (l * l + t * t))
            })
            .collect();
        let mut coef = Vec::with_capacity(n);
        for j in (1..=n).rev() {
            // f is even in k, so the DFT reduces to a cosine sum.
            let mut s = l * l;
            for &(k, f) in &samples {
                s += 2.0 * f * (PI * j as f64 * k / m as f64).cos();
            }
            coef.push(s / (2 * m) as f64);
        }
        Weideman { l, coef }
    })
}

fn w_taylor(z: Complex64) -> Complex64 {
    let iz = Complex64::i() * z;
    // 1/Gamma(n/2 + 1) for n even and odd, advanced two steps at a time.
    let mut inv_gamma = [1.0, 1.0 / (0.5 * PI.sqrt())];
    let mut pow = Complex64::new(1.0, 0.0);
    let mut sum = Complex64::new(0.0, 0.0);
    for n in 0..80 {
        let term = pow * inv_gamma[n % 2];
        sum += term;
        if n > 4 && term.norm() <= 1e-17 * sum.norm() {
            break;
        }
        pow *= iz;
        inv_gamma[n % 2] /= n as f64 / 2.0 + 1.0;
    }
    sum
}

fn w_weideman(z: Complex64) -> Complex64 {
    let wd = weideman();
    let iz = Complex64::i() * z;
    let denom = wd.l - iz;
    let zz = (wd.l + iz) / denom;
    let mut p = Complex64::new(0.0, 0.0);
    for &c in &wd.coef {
        p = p * zz + c;
    }
    2.0 * p / (denom * denom) + FRAC_1_SQRT_PI / denom
}

fn w_continued_fraction(z: Complex64) -> Complex64 {
    let mut t = z;
    for k in (1..=24).rev() {
        t = z - (k as f64 / 2.0) / t;
    }
    Complex64::i() * FRAC_1_SQRT_PI / t
}

fn w_upper(z: Complex64) -> Complex64 {
    let r = z.norm();
    if r < TAYLOR_RADIUS {
        w_taylor(z)
    } else if r < CF_RADIUS {
        w_weideman(z)
    } else {
        w_continued_fraction(z)
    }
}

fn check(z: Complex64) -> Result<()> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::Domain(format!("non-finite argument {z}")));
    }
    if z.norm() > MAX_ARG {
        return Err(Error::Domain(format!("|z| = {} exceeds {MAX_ARG}", z.norm())));
    }
    Ok(())
}

/// Faddeeva function w(z) = exp(-z^2) erfc(-iz).
///
/// In the lower half-plane `w` grows like `exp(-z^2)` and overflows to
/// infinity once that factor leaves the f64 range.
pub fn faddeeva(z: Complex64) -> Result<Complex64> {
    check(z)?;
    Ok(faddeeva_unchecked(z))
}

pub(crate) fn faddeeva_unchecked(z: Complex64) -> Complex64 {
    if z.im >= 0.0 {
        w_upper(z)
    } else {
        2.0 * (-z * z).exp() - w_upper(-z)
    }
}

fn erf_taylor(z: Complex64) -> Complex64 {
    let z2 = z * z;
    let mut pow = z;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut fact = 1.0;
    for n in 0..200 {
        let term = pow / (fact * (2 * n + 1) as f64);
        sum += term;
        if term.norm() <= 1e-17 * sum.norm() {
            break;
        }
        pow *= -z2;
        fact *= (n + 1) as f64;
    }
    FRAC_2_SQRT_PI * sum
}

/// Complex error function.
pub fn erf_complex(z: Complex64) -> Result<Complex64> {
    check(z)?;
    Ok(erf_unchecked(z))
}

fn erf_unchecked(z: Complex64) -> Complex64 {
    if z.norm() < ERF_TAYLOR_RADIUS {
        return erf_taylor(z);
    }
    if z.re >= 0.0 {
        1.0 - (-z * z).exp() * w_upper(Complex64::i() * z)
    } else {
        -erf_unchecked(-z)
    }
}

/// Complementary error function.
pub fn erfc_complex(z: Complex64) -> Result<Complex64> {
    check(z)?;
    if z.norm() < ERF_TAYLOR_RADIUS {
        return Ok(1.0 - erf_taylor(z));
    }
    Ok(if z.re >= 0.0 {
        (-z * z).exp() * w_upper(Complex64::i() * z)
    } else {
        2.0 - (-z * z).exp() * w_upper(-Complex64::i() * z)
    })
}

/// Imaginary error function erfi(z) = -i erf(iz).
pub fn erfi_complex(z: Complex64) -> Result<Complex64> {
    check(z)?;
    Ok(-Complex64::i() * erf_unchecked(Complex64::i() * z))
}

/// `exp(e) * (1 - i erfi(z))` without forming the two large factors separately.
///
/// Uses `1 - i erfi(z) = erfc(iz) = exp(z^2) w(-z)`.
pub fn scaled_one_minus_i_erfi(z: Complex64, e: Complex64) -> Result<Complex64> {
    check(z)?;
    let mz = -z;
    Ok(if mz.im >= 0.0 {
        (z * z + e).exp() * w_upper(mz)
    } else {
        2.0 * e.exp() - (z * z + e).exp() * w_upper(z)
    })
}

/// Legendre polynomial P_l(x) by the three-term recurrence.
pub fn legendre_p(l: usize, x: f64) -> Result<f64> {
    if !(-1.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!("legendre argument {x} outside [-1, 1]")));
    }
    if l > 200 {
        return Err(Error::Domain(format!("legendre degree {l} above 200")));
    }
    Ok(*legendre_table(l, x).last().unwrap())
}

/// P_0(x) ..= P_lmax(x).
pub fn legendre_table(lmax: usize, x: f64) -> Vec<f64> {
    let mut p = Vec::with_capacity(lmax + 1);
    p.push(1.0);
    if lmax >= 1 {
        p.push(x);
    }
    for l in 1..lmax {
        let lf = l as f64;
        let next = ((2.0 * lf + 1.0) * x * p[l] - lf * p[l - 1]) / (lf + 1.0);
        p.push(next);
    }
    p
}
