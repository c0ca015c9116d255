use num_complex::Complex64;

use super::RationalFn;
use crate::{Error, Result, Tolerances};

/// `f_η(z) = r(z) − conj(z) − η`.
#[derive(Debug, Clone)]
pub struct ShiftedFunction {
    r: RationalFn,
    eta: Complex64,
}

impl ShiftedFunction {
    pub fn new(r: RationalFn, eta: Complex64) -> Result<Self> {
        Self::with_tolerances(r, eta, &Tolerances::default())
    }

    /// Rejects `r = αz + p̃/q̃` with `|α| = 1` and `deg p̃ ≤ deg q̃`, for which
    /// `|f(z)|` stays bounded at infinity.
    pub fn with_tolerances(r: RationalFn, eta: Complex64, tol: &Tolerances) -> Result<Self> {
        if !(eta.re.is_finite() && eta.im.is_finite()) {
            return Err(Error::InvalidInput("shift eta must be finite".into()));
        }
        let (p, q) = (r.numerator(), r.denominator());
        if p.deg() == q.deg() + 1 {
            let alpha = p.leading() / q.leading();
            if (alpha.norm() - 1.0).abs() <= tol.admissibility {
                return Err(Error::Inadmissible(format!(
                    "r(z) = αz + O(1) with |α| = 1 (α = {alpha}); |f| does not tend to infinity"
                )));
            }
        }
        Ok(Self { r, eta })
    }

    pub fn r(&self) -> &RationalFn {
        &self.r
    }

    pub fn eta(&self) -> Complex64 {
        self.eta
    }

    /// Same `r`, different shift. Admissibility does not depend on `η`.
    pub fn with_eta(&self, eta: Complex64) -> Self {
        Self { r: self.r.clone(), eta }
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.r.eval(z)? - z.conj() - self.eta)
    }

    /// Unshifted `f(z) = r(z) − conj(z)`.
    pub fn eval_unshifted(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.r.eval(z)? - z.conj())
    }

    /// `J_f(z) = |r′(z)|² − 1`; positive where `f` is sense-preserving.
    pub fn jacobian(&self, z: Complex64) -> Result<f64> {
        jacobian(&self.r, z)
    }
}

pub(crate) fn jacobian(r: &RationalFn, z: Complex64) -> Result<f64> {
    Ok(r.derivative_at(z)?.norm_sqr() - 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{lens, ComplexPoly};

    fn z_squared() -> RationalFn {
        RationalFn::polynomial(ComplexPoly::from_real(&[0.0, 0.0, 1.0])).unwrap()
    }

    #[test]
    fn jacobian_examples() {
        let f = ShiftedFunction::new(z_squared(), Complex64::new(0.0, 0.0)).unwrap();
        assert_eq!(f.jacobian(Complex64::new(0.0, 0.0)).unwrap(), -1.0);
        assert_eq!(f.jacobian(Complex64::new(0.5, 0.0)).unwrap(), 0.0);
        let mpw = ShiftedFunction::new(lens::mpw(3, 0.6).unwrap(), Complex64::new(0.0, 0.0)).unwrap();
        let near = Complex64::new(0.6 + 5e-4, 5e-4);
        assert!(mpw.jacobian(near).unwrap() > 1e4);
        assert!(matches!(mpw.jacobian(Complex64::new(0.6, 0.0)), Err(Error::Pole { .. })));
    }

    #[test]
    fn rejects_unit_linear_part() {
        // r(z) = i z + 1/(z − 2): |α| = 1, deg p̃ ≤ deg q̃
        let p = ComplexPoly::new(vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, -2.0),
            Complex64::new(0.0, 1.0),
        ])
        .unwrap();
        let q = ComplexPoly::from_real(&[-2.0, 1.0]);
        let r = RationalFn::new(p, q).unwrap();
        let err = ShiftedFunction::new(r, Complex64::new(0.0, 0.0)).unwrap_err();
        assert!(matches!(err, Error::Inadmissible(_)));
    }

    #[test]
    fn accepts_non_unit_linear_part() {
        let p = ComplexPoly::from_real(&[1.0, -4.0, 2.0]);
        let q = ComplexPoly::from_real(&[-2.0, 1.0]);
        let r = RationalFn::new(p, q).unwrap();
        assert!(ShiftedFunction::new(r, Complex64::new(0.0, 0.0)).is_ok());
    }
}
