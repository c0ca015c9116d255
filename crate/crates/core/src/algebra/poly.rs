use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Dense complex polynomial with coefficients in ascending degree.
///
/// Trailing zero coefficients are trimmed so that the leading coefficient is
/// nonzero. The zero polynomial has no coefficients and no degree.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Complex64>", into = "Vec<Complex64>")]
pub struct ComplexPoly {
    coeffs: Vec<Complex64>,
}

impl ComplexPoly {
    pub fn new(mut coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(Error::InvalidInput("polynomial coefficients must be finite".into()));
        }
        while coeffs.last().is_some_and(|c| *c == Complex64::new(0.0, 0.0)) {
            coeffs.pop();
        }
        Ok(Self { coeffs })
    }

    /// Builds a polynomial from real coefficients (ascending).
    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
            .expect("finite real coefficients")
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: Complex64) -> Self {
        Self::trimmed(vec![c])
    }

    /// The monomial `z`.
    pub fn z() -> Self {
        Self::trimmed(vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)])
    }

    /// `Π (z − r_k)` scaled by `lead`.
    pub fn from_roots(roots: &[Complex64], lead: Complex64) -> Self {
        let mut p = Self::constant(lead);
        for &r in roots {
            p = &p * &Self::trimmed(vec![-r, Complex64::new(1.0, 0.0)]);
        }
        p
    }

    pub(crate) fn trimmed(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.last().is_some_and(|c| *c == Complex64::new(0.0, 0.0)) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0; convenient for bounds.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn leading(&self) -> Complex64 {
        self.coeffs.last().copied().unwrap_or_default()
    }

    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Horner evaluation; non-finite results are reported as overflow.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        let v = self.horner(z);
        if v.re.is_finite() && v.im.is_finite() {
            Ok(v)
        } else {
            Err(Error::Overflow(z))
        }
    }

    /// Unchecked Horner evaluation.
    pub fn horner(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// Value together with first and second derivatives.
    pub fn eval_derivs(&self, z: Complex64) -> [Complex64; 3] {
        let zero = Complex64::new(0.0, 0.0);
        let (mut p, mut d1, mut d2) = (zero, zero, zero);
        for &c in self.coeffs.iter().rev() {
            d2 = d2 * z + d1;
            d1 = d1 * z + p;
            p = p * z + c;
        }
        [p, d1, d2 * 2.0]
    }

    /// `Σ |a_k| |z|^k`, the natural scale for backward errors.
    pub fn abs_scale(&self, z: Complex64) -> f64 {
        let a = z.norm();
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * a + c.norm())
    }

    pub fn derivative(&self) -> Self {
        Self::trimmed(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        )
    }

    /// `p*(w) := conj(p(conj w))`, i.e. the polynomial with conjugated
    /// coefficients.
    pub fn conj_reflect(&self) -> Self {
        Self { coeffs: self.coeffs.iter().map(|c| c.conj()).collect() }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::trimmed(self.coeffs.iter().map(|&c| c * s).collect())
    }

    pub fn pow(&self, n: usize) -> Self {
        let mut out = Self::constant(Complex64::new(1.0, 0.0));
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    /// Euclidean division `self = quot·div + rem`.
    pub fn div_rem(&self, div: &Self) -> Result<(Self, Self)> {
        let dd = div
            .degree()
            .ok_or_else(|| Error::InvalidInput("division by the zero polynomial".into()))?;
        let lead = div.leading();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut quot = vec![Complex64::new(0.0, 0.0); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = rem[k + dd] / lead;
            quot[k] = c;
            for (j, &dc) in div.coeffs.iter().enumerate() {
                rem[k + j] -= c * dc;
            }
        }
        rem.truncate(dd);
        Ok((Self::trimmed(quot), Self::trimmed(rem)))
    }

    /// Drops leading coefficients below `rel · max|a_k|`.
    pub(crate) fn trim_relative(&self, rel: f64) -> Self {
        let cutoff = rel * self.max_abs_coeff();
        let mut coeffs = self.coeffs.clone();
        while coeffs.last().is_some_and(|c| c.norm() <= cutoff) {
            coeffs.pop();
        }
        Self { coeffs }
    }
}

impl TryFrom<Vec<Complex64>> for ComplexPoly {
    type Error = Error;
    fn try_from(v: Vec<Complex64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<ComplexPoly> for Vec<Complex64> {
    fn from(p: ComplexPoly) -> Self {
        p.coeffs
    }
}

impl fmt::Debug for ComplexPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if *c == Complex64::new(0.0, 0.0) {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})z")?,
                _ => write!(f, "({c})z^{k}")?,
            }
        }
        Ok(())
    }
}

impl Add for &ComplexPoly {
    type Output = ComplexPoly;
    fn add(self, rhs: Self) -> ComplexPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        ComplexPoly::trimmed((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &ComplexPoly {
    type Output = ComplexPoly;
    fn sub(self, rhs: Self) -> ComplexPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        ComplexPoly::trimmed((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &ComplexPoly {
    type Output = ComplexPoly;
    fn mul(self, rhs: Self) -> ComplexPoly {
        if self.is_zero() || rhs.is_zero() {
            return ComplexPoly::zero();
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        ComplexPoly::trimmed(out)
    }
}

impl Neg for &ComplexPoly {
    type Output = ComplexPoly;
    fn neg(self) -> ComplexPoly {
        ComplexPoly { coeffs: self.coeffs.iter().map(|&c| -c).collect() }
    }
}
