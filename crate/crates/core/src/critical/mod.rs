//! Critical curves `{z : |r′(z)| = 1}`, cusp preimages, tangents and the
//! face partition of the plane.
//!
//! Curves are traversed with the sense-preserving region on the left. With
//! `r′(z) = e^{iθ}` along a curve, increasing `θ` keeps the sense-reversing
//! side on the left, so traced curves run with `θ` decreasing.

mod partition;
mod trace;

use num_complex::Complex64;
use serde::Serialize;

use crate::algebra::RationalFn;
use crate::{Error, Result, Tolerances};

pub use partition::{build_partition, Face, FaceLocation, Orientation, RegionPartition, UNBOUNDED_FACE};
pub use trace::{locate_cusps, trace_critical_curves};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriticalSample {
    pub z: Complex64,
    /// `r′(z) = e^{iθ}`, `θ ∈ [0, 2π)`.
    pub theta: f64,
    /// Unit tangent `i r′ conj(r″) / |r′ r″|`.
    pub tangent: Complex64,
    /// `Re(r″(z) / r′(z)^{3/2})` with the square-root branch continued along
    /// the curve from the first sample.
    pub cusp_value: f64,
}

/// A refined cusp preimage on a critical curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CuspLocation {
    pub z: Complex64,
    pub theta: f64,
    /// Sample index closest to the cusp.
    pub index: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct CriticalCurve {
    pub curve_id: usize,
    pub points: Vec<CriticalSample>,
    /// Sorted, deduplicated sample indices of cusp preimages.
    pub cusp_indices: Vec<usize>,
    pub cusps: Vec<CuspLocation>,
    /// Distance between the traced continuation after one full loop and the
    /// first sample.
    pub closure_gap: f64,
    /// Number of turns of `r′` around the unit circle along the curve.
    pub turns: usize,
    /// Unwrapped θ along the traversal order (decreasing).
    #[serde(skip)]
    pub(crate) unwrapped: Vec<f64>,
}

impl CriticalCurve {
    pub fn locations(&self) -> Vec<Complex64> {
        self.points.iter().map(|s| s.z).collect()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Longest polyline segment, including the closing one.
    pub fn max_segment(&self) -> f64 {
        let n = self.points.len();
        (0..n).map(|i| (self.points[(i + 1) % n].z - self.points[i].z).norm()).fold(0.0, f64::max)
    }

    pub fn is_cusp_index(&self, i: usize) -> bool {
        self.cusp_indices.binary_search(&i).is_ok()
    }
}

/// Result of [`check_nondegenerate`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Nondegeneracy {
    pub ok: bool,
    pub min_second_derivative: f64,
    /// Sample attaining the minimum.
    pub at: Option<Complex64>,
}

/// `r″ ≠ 0` on every traced sample (above `tol.degeneracy`).
pub fn check_nondegenerate(r: &RationalFn, curves: &[CriticalCurve], tol: &Tolerances) -> Nondegeneracy {
    let mut min = f64::INFINITY;
    let mut at = None;
    for s in curves.iter().flat_map(|c| &c.points) {
        let v = r.derivs(s.z).map(|d| d[2].norm()).unwrap_or(0.0);
        if v < min {
            min = v;
            at = Some(s.z);
        }
    }
    Nondegeneracy { ok: min > tol.degeneracy, min_second_derivative: min, at }
}

/// Unit tangent `h = i r′(z₀) conj(r″(z₀)) / |r′(z₀) conj(r″(z₀))|` of the
/// critical curve through `z0`.
pub fn tangent_direction(r: &RationalFn, z0: Complex64) -> Result<Complex64> {
    let [_, d1, d2] = r.derivs(z0)?;
    if (d1.norm() - 1.0).abs() > 1e-6 {
        return Err(Error::Precondition(format!("|r'(z0)| = {} is not on the unit circle", d1.norm())));
    }
    let v = Complex64::i() * d1 * d2.conj();
    if d2.norm() < 1e-12 {
        return Err(Error::Degenerate(format!("r''(z0) = 0 at {z0}")));
    }
    Ok(v / v.norm())
}

/// `Re(r″(z₀) / r′(z₀)^{3/2})` with the principal square root.
///
/// The zero set does not depend on the branch; along traced curves use
/// [`CriticalSample::cusp_value`], which keeps the branch continuous.
pub fn cusp_functional(r: &RationalFn, z0: Complex64) -> Result<f64> {
    let [_, d1, d2] = r.derivs(z0)?;
    let s = d1.sqrt();
    Ok((d2 / (s * s * s)).re)
}

/// Cusp value for a given (unwrapped) θ: `Re(r″ e^{−3iθ/2})`.
pub(crate) fn branch_cusp_value(second: Complex64, theta: f64) -> f64 {
    (second * Complex64::from_polar(1.0, -1.5 * theta)).re
}

/// Newton projection of `guess` onto `r′(z) = e^{iθ}`.
pub(crate) fn project(r: &RationalFn, guess: Complex64, theta: f64, max_iterations: usize) -> Result<Complex64> {
    let target = Complex64::from_polar(1.0, theta);
    let mut z = guess;
    for _ in 0..max_iterations {
        let [_, d1, d2] = r.derivs(z)?;
        if d2.norm() == 0.0 {
            return Err(Error::Degenerate(format!("r'' vanishes at {z}")));
        }
        let step = (d1 - target) / d2;
        z -= step;
        if step.norm() <= 4.0 * f64::EPSILON * (1.0 + z.norm()) {
            break;
        }
    }
    Ok(z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::ComplexPoly;
    use crate::algebra::lens;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn monomial(k: usize) -> RationalFn {
        let mut coeffs = vec![0.0; k + 1];
        coeffs[k] = 1.0;
        RationalFn::polynomial(ComplexPoly::from_real(&coeffs)).unwrap()
    }

    #[test]
    fn tangent_examples() {
        let r = monomial(2);
        assert!((tangent_direction(&r, c(0.5, 0.0)).unwrap() - c(0.0, 1.0)).norm() < 1e-15);
        assert!((tangent_direction(&r, c(0.0, 0.5)).unwrap() - c(-1.0, 0.0)).norm() < 1e-15);
        assert!(tangent_direction(&r, c(0.3, 0.0)).is_err());
    }

    #[test]
    fn tangent_flattens_jacobian() {
        // J(z0 + s h) = O(s²) along the tangent, O(s) across it
        let r = lens::mpw(3, 0.6).unwrap();
        let curves = trace_critical_curves(&r, &Tolerances::default()).unwrap();
        for curve in &curves {
            for s in curve.points.iter().step_by(97) {
                let h = tangent_direction(&r, s.z).unwrap();
                let jac = |z: Complex64| r.derivative_at(z).unwrap().norm_sqr() - 1.0;
                for step in [1e-3, 1e-4] {
                    let along = jac(s.z + h * step).abs();
                    let across = jac(s.z + h * Complex64::i() * step).abs();
                    let bound = 10.0 * (1.0 + r.derivs(s.z).unwrap()[2].norm().powi(2)) * step * step;
                    assert!(along < bound, "along {along} bound {bound}");
                    assert!(across > 10.0 * along);
                }
            }
        }
    }

    #[test]
    fn cusp_functional_branch_independent_zeros() {
        let r = monomial(2);
        let at = |arg: f64| cusp_functional(&r, Complex64::from_polar(0.5, arg)).unwrap();
        for arg in [std::f64::consts::FRAC_PI_3, std::f64::consts::PI, 5.0 * std::f64::consts::FRAC_PI_3] {
            assert!(at(arg).abs() < 1e-12);
        }
        assert!(at(0.0).abs() > 0.5);
    }

    #[test]
    fn nondegenerate_examples() {
        let tol = Tolerances::default();
        for r in [monomial(2), monomial(3), lens::mpw(3, 0.6).unwrap()] {
            let curves = trace_critical_curves(&r, &tol).unwrap();
            let check = check_nondegenerate(&r, &curves, &tol);
            assert!(check.ok, "{check:?}");
        }
    }
}
