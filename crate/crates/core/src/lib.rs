//! Leading-order entanglement harvesting between two static Unruh-DeWitt
//! detectors outside a Schwarzschild black hole.
//!
//! Units: geometric (c = G = 1) with the black-hole mass set to one, so every
//! length and time is measured in units of M and frequencies in units of 1/M.

pub mod error;
pub mod geometry;
pub mod harness;
pub mod modecache;
pub mod ode;
pub mod quadrature;
pub mod radial;
pub mod response;
pub mod specfun;
pub mod states;
pub mod validation;

pub use error::{Error, Result};
