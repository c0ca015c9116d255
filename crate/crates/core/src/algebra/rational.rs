use num_complex::Complex64;
use serde::Serialize;

use super::ComplexPoly;
use crate::roots::all_roots;
use crate::{Error, Result, Tolerances};

/// A pole `v` of `r` with multiplicity `μ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Pole {
    pub location: Complex64,
    pub multiplicity: usize,
}

/// `r = p / q` with cached derivatives and poles.
#[derive(Debug, Clone)]
pub struct RationalFn {
    p: ComplexPoly,
    q: ComplexPoly,
    dp: ComplexPoly,
    dq: ComplexPoly,
    poles: Vec<Pole>,
}

impl RationalFn {
    pub fn new(p: ComplexPoly, q: ComplexPoly) -> Result<Self> {
        Self::with_tolerances(p, q, &Tolerances::default())
    }

    /// Builds `p/q`, locating poles and rejecting common factors.
    ///
    /// A common factor is detected through the normalized resultant
    /// `Res(p, q) ∝ Π p(v_j)`: any factor `|p(v_j)| / Σ|p_k||v_j|^k` below
    /// `tol.gcd` is an input error.
    pub fn with_tolerances(p: ComplexPoly, q: ComplexPoly, tol: &Tolerances) -> Result<Self> {
        if q.is_zero() {
            return Err(Error::InvalidInput("denominator q is the zero polynomial".into()));
        }
        if p.is_zero() {
            return Err(Error::InvalidInput("numerator p is the zero polynomial".into()));
        }
        let degree = p.deg().max(q.deg());
        if degree < 2 {
            return Err(Error::InvalidInput(format!("deg(r) = {degree}, need deg(r) >= 2")));
        }
        let poles = if q.deg() >= 1 { find_poles(&q, tol)? } else { Vec::new() };
        for pole in &poles {
            let v = pole.location;
            let scale = p.abs_scale(v);
            let factor = if scale > 0.0 { p.horner(v).norm() / scale } else { 0.0 };
            if factor < tol.gcd {
                return Err(Error::CommonFactor(factor));
            }
        }
        let dp = p.derivative();
        let dq = q.derivative();
        Ok(Self { p, q, dp, dq, poles })
    }

    /// A polynomial `r = p` (denominator 1).
    pub fn polynomial(p: ComplexPoly) -> Result<Self> {
        Self::new(p, ComplexPoly::constant(Complex64::new(1.0, 0.0)))
    }

    pub fn numerator(&self) -> &ComplexPoly {
        &self.p
    }

    pub fn denominator(&self) -> &ComplexPoly {
        &self.q
    }

    /// `deg(r) = max(deg p, deg q)`.
    pub fn degree(&self) -> usize {
        self.p.deg().max(self.q.deg())
    }

    pub fn poles(&self) -> &[Pole] {
        &self.poles
    }

    /// Total pole multiplicity, equal to `deg q`.
    pub fn pole_count(&self) -> usize {
        self.poles.iter().map(|p| p.multiplicity).sum()
    }

    pub fn nearest_pole(&self, z: Complex64) -> Option<(Pole, f64)> {
        self.poles
            .iter()
            .map(|p| (*p, (p.location - z).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
    }

    fn pole_error(&self, z: Complex64) -> Error {
        Error::Pole { pole: self.nearest_pole(z).map_or(z, |(p, _)| p.location) }
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        let qv = self.q.horner(z);
        if qv.norm() == 0.0 {
            return Err(self.pole_error(z));
        }
        let v = self.p.horner(z) / qv;
        if v.re.is_finite() && v.im.is_finite() {
            Ok(v)
        } else {
            Err(self.pole_error(z))
        }
    }

    /// `[r(z), r′(z), r″(z)]`.
    pub fn derivs(&self, z: Complex64) -> Result<[Complex64; 3]> {
        let [pv, dpv, d2pv] = self.p.eval_derivs(z);
        let [qv, dqv, d2qv] = self.q.eval_derivs(z);
        if qv.norm() == 0.0 {
            return Err(self.pole_error(z));
        }
        let r0 = pv / qv;
        let r1 = (dpv - r0 * dqv) / qv;
        let r2 = (d2pv - r1 * dqv * 2.0 - r0 * d2qv) / qv;
        let out = [r0, r1, r2];
        if out.iter().all(|v| v.re.is_finite() && v.im.is_finite()) {
            Ok(out)
        } else {
            Err(self.pole_error(z))
        }
    }

    pub fn derivative_at(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.derivs(z)?[1])
    }

    /// Polynomials `(P, Q)` with `r′ = P / Q`, reduced so that `Q` vanishes
    /// exactly at the poles with order `μ_j + 1`.
    pub fn derivative_fraction(&self) -> Result<(ComplexPoly, ComplexPoly)> {
        let mut num = &(&self.dp * &self.q) - &(&self.p * &self.dq);
        let mut den = &self.q * &self.q;
        for pole in self.poles.iter().filter(|p| p.multiplicity > 1) {
            let factor = ComplexPoly::from_roots(&[pole.location], Complex64::new(1.0, 0.0));
            for _ in 0..pole.multiplicity - 1 {
                num = num.div_rem(&factor)?.0;
                den = den.div_rem(&factor)?.0;
            }
        }
        Ok((num, den))
    }
}

/// Roots of `q` grouped into poles with multiplicities.
fn find_poles(q: &ComplexPoly, tol: &Tolerances) -> Result<Vec<Pole>> {
    let rs = all_roots(q, tol.tol_res)?;
    let roots = rs.locations();
    let mut assigned = vec![false; roots.len()];
    let mut poles = Vec::new();
    for i in 0..roots.len() {
        if assigned[i] {
            continue;
        }
        let mut members = vec![roots[i]];
        assigned[i] = true;
        // a root of multiplicity m splits into a cluster of radius ~ eps^(1/m)
        let radius = 1e-4 * (1.0 + roots[i].norm());
        for j in i + 1..roots.len() {
            if !assigned[j] && (roots[j] - roots[i]).norm() < radius {
                assigned[j] = true;
                members.push(roots[j]);
            }
        }
        let center = members.iter().sum::<Complex64>() / members.len() as f64;
        poles.push(Pole { location: center, multiplicity: members.len() });
    }
    poles.sort_by(|a, b| {
        a.location.re.total_cmp(&b.location.re).then(a.location.im.total_cmp(&b.location.im))
    });
    Ok(poles)
}
