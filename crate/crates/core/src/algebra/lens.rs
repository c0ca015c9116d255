//! Lens presets and the JSON input format.
//!
//! ```json
//! {"type":"rational","p":[[re,im],...],"q":[[re,im],...]}
//! {"type":"point_masses","masses":[m1,...],"positions":[[re,im],...]}
//! ```
//! Coefficients are in ascending degree.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{ComplexPoly, RationalFn};
use crate::{Error, Result, Tolerances};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum LensSpec {
    Rational { p: Vec<[f64; 2]>, q: Vec<[f64; 2]> },
    PointMasses { masses: Vec<f64>, positions: Vec<[f64; 2]> },
}

impl LensSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn build(&self, tol: &Tolerances) -> Result<RationalFn> {
        match self {
            LensSpec::Rational { p, q } => {
                let p = ComplexPoly::new(to_complex(p))
                    .map_err(|_| Error::InvalidInput("field `p`: coefficients must be finite".into()))?;
                let q = ComplexPoly::new(to_complex(q))
                    .map_err(|_| Error::InvalidInput("field `q`: coefficients must be finite".into()))?;
                RationalFn::with_tolerances(p, q, tol)
            }
            LensSpec::PointMasses { masses, positions } => {
                point_masses_with(masses, &to_complex(positions), tol)
            }
        }
    }
}

fn to_complex(v: &[[f64; 2]]) -> Vec<Complex64> {
    v.iter().map(|&[re, im]| Complex64::new(re, im)).collect()
}

/// `r(z) = z^{n−1} / (z^n − ρ^n)`.
pub fn mpw(n: usize, rho: f64) -> Result<RationalFn> {
    if n < 2 {
        return Err(Error::InvalidInput("mpw lens needs n >= 2".into()));
    }
    if !(rho.is_finite() && rho > 0.0) {
        return Err(Error::InvalidInput("mpw lens needs rho > 0".into()));
    }
    let mut p = vec![Complex64::new(0.0, 0.0); n];
    p[n - 1] = Complex64::new(1.0, 0.0);
    let mut q = vec![Complex64::new(0.0, 0.0); n + 1];
    q[0] = Complex64::new(-rho.powi(n as i32), 0.0);
    q[n] = Complex64::new(1.0, 0.0);
    RationalFn::new(ComplexPoly::new(p)?, ComplexPoly::new(q)?)
}

/// `r(z) = ((1+i)z² − i) / (z³ + 1)`.
pub fn second_example() -> Result<RationalFn> {
    let p = ComplexPoly::new(vec![
        Complex64::new(0.0, -1.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(1.0, 1.0),
    ])?;
    let q = ComplexPoly::from_real(&[1.0, 0.0, 0.0, 1.0]);
    RationalFn::new(p, q)
}

/// `r(z) = Σ m_k / (z − z_k)` over a common denominator.
pub fn point_masses(masses: &[f64], positions: &[Complex64]) -> Result<RationalFn> {
    point_masses_with(masses, positions, &Tolerances::default())
}

fn point_masses_with(masses: &[f64], positions: &[Complex64], tol: &Tolerances) -> Result<RationalFn> {
    if masses.len() != positions.len() {
        return Err(Error::InvalidInput(format!(
            "field `positions`: {} positions for {} masses",
            positions.len(),
            masses.len()
        )));
    }
    if masses.is_empty() {
        return Err(Error::InvalidInput("field `masses`: at least one mass required".into()));
    }
    if let Some(m) = masses.iter().find(|m| !(m.is_finite() && **m > 0.0)) {
        return Err(Error::InvalidInput(format!("field `masses`: masses must be > 0, got {m}")));
    }
    if positions.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(Error::InvalidInput("field `positions`: coordinates must be finite".into()));
    }
    let one = Complex64::new(1.0, 0.0);
    let q = ComplexPoly::from_roots(positions, one);
    let mut p = ComplexPoly::zero();
    for (k, &m) in masses.iter().enumerate() {
        let others: Vec<Complex64> =
            positions.iter().enumerate().filter(|&(j, _)| j != k).map(|(_, &z)| z).collect();
        p = &p + &ComplexPoly::from_roots(&others, Complex64::new(m, 0.0));
    }
    RationalFn::with_tolerances(p, q, tol)
}

/// Named presets accepted by the command line.
pub fn preset(name: &str, n: usize, rho: f64) -> Result<RationalFn> {
    match name {
        "mpw" => mpw(n, rho),
        "second" | "example2" => second_example(),
        "quadratic" | "z2" => RationalFn::polynomial(ComplexPoly::from_real(&[0.0, 0.0, 1.0])),
        other => Err(Error::InvalidInput(format!("unknown lens preset `{other}`"))),
    }
}
