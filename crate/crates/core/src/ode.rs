//! Dormand-Prince 5(4) integrator with embedded error control.

use crate::error::{Error, Result};

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
}

fn comb<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for (c, k) in terms {
        for i in 0..N {
            out[i] += h * c * k[i];
        }
    }
    out
}

/// Integrates `y' = f(x, y)` from `x0` to `x1`.
///
/// `stop` is checked after every accepted step; when it returns true the
/// integration ends early and the current point is returned.
pub fn dopri5<const N: usize, F, S>(
    mut f: F,
    x0: f64,
    y0: [f64; N],
    x1: f64,
    tol: Tolerance,
    mut stop: S,
) -> Result<(f64, [f64; N])>
where
    F: FnMut(f64, &[f64; N]) -> [f64; N],
    S: FnMut(f64, &[f64; N]) -> bool,
{
    let dir = (x1 - x0).signum();
    let mut x = x0;
    let mut y = y0;
    let mut h = dir * (x1 - x0).abs().min(1e-3 * (1.0 + x0.abs()));
    let mut k1 = f(x, &y);
    let mut steps = 0usize;
    while (x1 - x) * dir > 0.0 {
        steps += 1;
        if steps > 5_000_000 {
            return Err(Error::Convergence(format!("dopri5 exceeded step budget at x = {x}")));
        }
        if (x + h - x1) * dir > 0.0 {
            h = x1 - x;
        }
        let k2 = f(x + C2 * h, &comb(&y, h, &[(A21, &k1)]));
        let k3 = f(x + C3 * h, &comb(&y, h, &[(A31, &k1), (A32, &k2)]));
        let k4 = f(x + C4 * h, &comb(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
        let k5 = f(x + C5 * h, &comb(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]));
        let k6 = f(x + h, &comb(&y, h, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]));
        let ynew = comb(&y, h, &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)]);
        let k7 = f(x + h, &ynew);
        let mut err = 0.0f64;
        for i in 0..N {
            let e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let sc = tol.abs + tol.rel * y[i].abs().max(ynew[i].abs());
            err = err.max((e / sc).abs());
        }
        if !err.is_finite() {
            h *= 0.1;
            continue;
        }
        if err <= 1.0 {
            x += h;
            y = ynew;
            k1 = k7;
            if stop(x, &y) {
                return Ok((x, y));
            }
        }
        let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        h *= fac;
        if h.abs() < 1e-14 * (1.0 + x.abs()) {
            return Err(Error::Convergence(format!("dopri5 step underflow at x = {x}")));
        }
    }
    Ok((x, y))
}
