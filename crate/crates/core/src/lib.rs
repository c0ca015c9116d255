//! Critical curves, caustics and zeros of shifted rational harmonic functions
//! `f_η(z) = r(z) − conj(z) − η`.
//!
//! The crate is organised bottom-up:
//!
//! * [`algebra`]: complex polynomials, rational functions, the shifted
//!   harmonic function and the conjugation-elimination polynomial.
//! * [`roots`]: simultaneous (Aberth–Ehrlich) polynomial root finding and a
//!   two-real-variable Newton polish for `f_η`.
//! * [`critical`]: tracing of the critical curves `|r′(z)| = 1`, cusp
//!   preimages, tangents and the face partition of the plane.
//! * [`caustics`]: caustic images, fold/cusp classification, the local
//!   quadratic model and shift-path crossings.
//! * [`zeros`]: zero census, windings, Poincaré indices and argument
//!   principle checks.
//! * [`analysis`]: experiments that exercise the zero-count theory
//!   (large shifts, safe radii, path invariance, fold/cusp crossings, count
//!   maps).
//! * [`export`]: CSV, JSON and SVG artifacts.

pub mod algebra;
pub mod analysis;
pub mod caustics;
pub mod config;
pub mod critical;
mod error;
pub mod export;
pub mod geometry;
pub mod roots;
pub mod structure;
pub mod zeros;

pub use algebra::{ComplexPoly, RationalFn, ShiftedFunction};
pub use structure::CriticalStructure;
pub use config::Tolerances;
pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Shorthand used throughout the crate.
pub type C64 = Complex64;
