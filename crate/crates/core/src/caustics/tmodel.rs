//! Zeros of the local quadratic model `T_{δd}(z) = d z² + z − conj(z) − δd`.

use num_complex::Complex64;
use serde::Serialize;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ZeroClass {
    RealZero,
    NonrealZero,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelZero {
    pub z: Complex64,
    pub class: ZeroClass,
}

/// Relative tolerance for the boundary cases `Re(d⁻¹)² = δ` and `|d⁻²| = δ`.
const BOUNDARY_REL: f64 = 1e-12;

/// Closed-form zeros of `T_{δd}`.
///
/// With `d⁻¹ = α + iβ`, real zeros solve `x² = δ`: `{0}` for `δ = 0`,
/// `±√δ` for `δ > 0`. Non-real zeros have `x = −α` and
/// `y = −β ± √(α² + β² − δ)`, which requires `|d⁻²| ≥ δ` and `y ≠ 0`: both
/// exist when `α² ≠ δ`; when `α² = δ` only `−d⁻¹ − i Im(d⁻¹)` remains (and
/// none if also `β = 0`).
pub fn tmodel_zeros(d: Complex64, delta: f64) -> Result<Vec<ModelZero>> {
    if d.norm() == 0.0 || !(d.re.is_finite() && d.im.is_finite()) {
        return Err(Error::Degenerate("local model coefficient d vanishes".into()));
    }
    if !delta.is_finite() {
        return Err(Error::InvalidInput("delta must be finite".into()));
    }
    let inv = d.inv();
    let (alpha, beta) = (inv.re, inv.im);
    let mut out = Vec::with_capacity(4);

    if delta == 0.0 {
        out.push(ModelZero { z: Complex64::new(0.0, 0.0), class: ZeroClass::RealZero });
    } else if delta > 0.0 {
        let s = delta.sqrt();
        out.push(ModelZero { z: Complex64::new(s, 0.0), class: ZeroClass::RealZero });
        out.push(ModelZero { z: Complex64::new(-s, 0.0), class: ZeroClass::RealZero });
    }

    let inv_sq = inv.norm_sqr();
    let scale = inv_sq.max(delta.abs()).max(f64::MIN_POSITIVE);
    let disc = inv_sq - delta;
    if disc < -BOUNDARY_REL * scale {
        return Ok(out);
    }
    let on_real_boundary = (alpha * alpha - delta).abs() <= BOUNDARY_REL * scale;
    if on_real_boundary {
        if beta != 0.0 {
            out.push(ModelZero { z: -inv - Complex64::i() * beta, class: ZeroClass::NonrealZero });
        }
        return Ok(out);
    }
    let root = disc.max(0.0).sqrt();
    if root == 0.0 {
        // |d⁻²| = δ: the two non-real zeros merge
        out.push(ModelZero { z: -inv, class: ZeroClass::NonrealZero });
    } else {
        out.push(ModelZero { z: -inv + Complex64::i() * root, class: ZeroClass::NonrealZero });
        out.push(ModelZero { z: -inv - Complex64::i() * root, class: ZeroClass::NonrealZero });
    }
    Ok(out)
}

/// `T_{δd}(z)`.
pub fn tmodel_eval(d: Complex64, delta: f64, z: Complex64) -> Complex64 {
    d * z * z + z - z.conj() - d * delta
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sorted(mut v: Vec<ModelZero>) -> Vec<ModelZero> {
        v.sort_by(|a, b| a.z.re.total_cmp(&b.z.re).then(a.z.im.total_cmp(&b.z.im)));
        v
    }

    #[test]
    fn d_one_quarter() {
        let z = sorted(tmodel_zeros(c(1.0, 0.0), 0.25).unwrap());
        let expected = [c(-1.0, -0.75f64.sqrt()), c(-1.0, 0.75f64.sqrt()), c(-0.5, 0.0), c(0.5, 0.0)];
        assert_eq!(z.len(), 4);
        for (a, e) in z.iter().zip(expected) {
            assert!((a.z - e).norm() < 1e-15, "{} vs {e}", a.z);
        }
        assert_eq!(z.iter().filter(|m| m.class == ZeroClass::RealZero).count(), 2);
    }

    #[test]
    fn d_one_zero_shift() {
        let z = tmodel_zeros(c(1.0, 0.0), 0.0).unwrap();
        assert_eq!(z.len(), 3);
        assert!(z.iter().any(|m| m.z == c(0.0, 0.0) && m.class == ZeroClass::RealZero));
        assert!(z.iter().any(|m| (m.z - c(-1.0, 1.0)).norm() < 1e-15));
        assert!(z.iter().any(|m| (m.z - c(-1.0, -1.0)).norm() < 1e-15));
        assert!(tmodel_eval(c(1.0, 0.0), 0.0, c(-1.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn d_i_negative_shift() {
        let z = tmodel_zeros(c(0.0, 1.0), -1.0).unwrap();
        assert_eq!(z.len(), 2);
        assert!(z.iter().all(|m| m.class == ZeroClass::NonrealZero));
        let s = 2f64.sqrt();
        for e in [c(0.0, 1.0 + s), c(0.0, 1.0 - s)] {
            assert!(z.iter().any(|m| (m.z - e).norm() < 1e-14));
        }
        for m in &z {
            assert!(tmodel_eval(c(0.0, 1.0), -1.0, m.z).norm() < 1e-14);
        }
    }

    #[test]
    fn boundary_case_keeps_one_nonreal_zero() {
        // d⁻¹ = 1 + i, δ = Re(d⁻¹)² = 1
        let d = c(1.0, 1.0).inv();
        let z = tmodel_zeros(d, 1.0).unwrap();
        let nonreal: Vec<_> = z.iter().filter(|m| m.class == ZeroClass::NonrealZero).collect();
        assert_eq!(nonreal.len(), 1);
        assert!((nonreal[0].z - c(-1.0, -2.0)).norm() < 1e-14);
        for m in &z {
            assert!(tmodel_eval(d, 1.0, m.z).norm() < 1e-14);
        }
        // real d⁻¹ on the boundary: no non-real zero at all
        let z = tmodel_zeros(c(0.5, 0.0), 4.0).unwrap();
        assert!(z.iter().all(|m| m.class == ZeroClass::RealZero));
    }

    #[test]
    fn zero_d_rejected() {
        assert!(tmodel_zeros(c(0.0, 0.0), 1.0).is_err());
    }

    proptest! {
        #[test]
        fn closed_form_zeros_are_zeros(mag in 0.1f64..10.0, arg in 0.0f64..std::f64::consts::TAU, frac in -2.0f64..2.0) {
            let d = Complex64::from_polar(mag, arg);
            let delta = frac * d.inv().norm_sqr();
            let zeros = tmodel_zeros(d, delta).unwrap();
            prop_assert!(zeros.len() <= 4);
            let alpha = d.inv().re;
            for m in &zeros {
                let scale = 1.0 + m.z.norm() + (d * m.z * m.z).norm();
                prop_assert!(tmodel_eval(d, delta, m.z).norm() < 1e-12 * scale);
                if m.class == ZeroClass::NonrealZero {
                    prop_assert!(m.z.im != 0.0);
                    if alpha != 0.0 {
                        prop_assert!(m.z.norm() >= alpha.abs() * (1.0 - 1e-12));
                    }
                } else {
                    prop_assert!(m.z.im == 0.0);
                }
            }
        }
    }
}
