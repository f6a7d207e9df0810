//! Frequency kernels G_lω(r, r') of the Boulware, Unruh and Hartle-Hawking
//! states, and their split into anticommutator and commutator weights.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modecache::ModeTable;
use crate::radial::ModeKind;

type C = Complex64;

/// Surface gravity for M = 1.
pub const KAPPA: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FieldState {
    #[serde(alias = "B", alias = "boulware")]
    Boulware,
    #[serde(alias = "U", alias = "unruh")]
    Unruh,
    #[serde(alias = "H", alias = "HH", alias = "hartle-hawking")]
    HartleHawking,
}

impl FieldState {
    pub const ALL: [FieldState; 3] = [FieldState::Boulware, FieldState::Unruh, FieldState::HartleHawking];

    pub fn short_name(self) -> &'static str {
        match self {
            FieldState::Boulware => "B",
            FieldState::Unruh => "U",
            FieldState::HartleHawking => "H",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "b" | "boulware" => Ok(FieldState::Boulware),
            "u" | "unruh" => Ok(FieldState::Unruh),
            "h" | "hh" | "hartle-hawking" | "hartlehawking" => Ok(FieldState::HartleHawking),
            _ => Err(Error::Format(format!("unknown field state '{s}'"))),
        }
    }
}

/// 1 / (1 - exp(-2πω/κ)), finite for every ω ≠ 0.
pub fn bose_factor(omega: f64) -> f64 {
    -1.0 / (-2.0 * PI * omega / KAPPA).exp_m1()
}

/// Rescaled modes of one (l, |ω|) at the two radii r and r' (positive frequency).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeValues {
    pub in_r: C,
    pub in_rp: C,
    pub up_r: C,
    pub up_rp: C,
}

impl ModeValues {
    pub fn from_table(table: &ModeTable, l: usize, k: usize, ri: usize, rpi: usize) -> Self {
        Self {
            in_r: table.value_at(ModeKind::In, l, k, ri),
            in_rp: table.value_at(ModeKind::In, l, k, rpi),
            up_r: table.value_at(ModeKind::Up, l, k, ri),
            up_rp: table.value_at(ModeKind::Up, l, k, rpi),
        }
    }

    /// Values for the arguments exchanged, (r', r).
    pub fn swapped(self) -> Self {
        Self { in_r: self.in_rp, in_rp: self.in_r, up_r: self.up_rp, up_rp: self.up_r }
    }
}

/// G_lω(r, r') from the positive-frequency mode values; `omega` may be of
/// either sign and selects R̄(ω) or R̄(-ω) = conj R̄(ω).
///
/// The Hartle-Hawking in-term uses the ordering R̄_in(r) conj R̄_in(r'), as in
/// the other two states.
#[inline]
pub fn kernel_from_values(state: FieldState, omega: f64, v: &ModeValues) -> C {
    let (up, inn) = if omega > 0.0 {
        (v.up_r * v.up_rp.conj(), v.in_r * v.in_rp.conj())
    } else {
        (v.up_r.conj() * v.up_rp, v.in_r.conj() * v.in_rp)
    };
    let positive = omega > 0.0;
    match state {
        FieldState::Boulware => {
            if positive {
                up + inn
            } else {
                C::new(0.0, 0.0)
            }
        }
        FieldState::Unruh => {
            let th = if positive { inn } else { C::new(0.0, 0.0) };
            up * bose_factor(omega) + th
        }
        FieldState::HartleHawking => (up + inn) * bose_factor(omega),
    }
}

/// Anticommutator and commutator weights built from H_lω = G_lω / ω at ±ω:
/// sym(ω) = (H(ω) + conj H(-ω)) / 2, anti(ω) = (H(ω) - conj H(-ω)) / (2i).
#[inline]
pub fn split_weights(h_pos: C, h_neg: C) -> (C, C) {
    let sym = (h_pos + h_neg.conj()) * 0.5;
    let anti = (h_pos - h_neg.conj()) * C::new(0.0, -0.5);
    (sym, anti)
}

fn table_values(table: &ModeTable, l: usize, omega: f64, r: f64, rp: f64) -> Result<ModeValues> {
    if omega == 0.0 {
        return Err(Error::Domain("the kernel is not defined at omega = 0".into()));
    }
    let k = table.grid.omega_index(omega)?;
    let ri = table.grid.radius_index(r)?;
    let rpi = table.grid.radius_index(rp)?;
    table.record_at(l, k)?;
    Ok(ModeValues::from_table(table, l, k, ri, rpi))
}

/// G^Ψ_lω(r, r') at an exact table point.
pub fn kernel(state: FieldState, table: &ModeTable, l: usize, omega: f64, r: f64, rp: f64) -> Result<C> {
    let v = table_values(table, l, omega, r, rp)?;
    Ok(kernel_from_values(state, omega, &v))
}

/// (symmetric, antisymmetric) weights of H = G/ω at ω, with sym + i anti = H.
pub fn kernel_split(state: FieldState, table: &ModeTable, l: usize, omega: f64, r: f64, rp: f64) -> Result<(C, C)> {
    let v = table_values(table, l, omega, r, rp)?;
    let h_pos = kernel_from_values(state, omega, &v) / omega;
    let h_neg = kernel_from_values(state, -omega, &v) / -omega;
    Ok(split_weights(h_pos, h_neg))
}
