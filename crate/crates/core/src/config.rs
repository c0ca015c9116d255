//! Numerical tolerances shared by every module.
//!
//! The zero-count theory is stated with existential ε/δ bounds, so every
//! concrete threshold used by the implementation lives here.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Relative residual accepted for zeros and polynomial roots.
    pub tol_res: f64,
    /// Band on the Jacobian `|r′|² − 1` inside which a zero is singular.
    pub tol_singular: f64,
    /// Accuracy of traced critical samples, `||r′(z)| − 1|`.
    pub curve: f64,
    /// Relative resultant factor below which `p` and `q` share a root.
    pub gcd: f64,
    /// `|leading(p)/leading(q)|` distance from 1 rejected as inadmissible.
    pub admissibility: f64,
    /// Relative cusp test `|Re(r″/r′^{3/2})| < cusp·(1 + |r″|)`.
    pub cusp: f64,
    /// Distance to a critical polyline treated as on-boundary.
    pub boundary: f64,
    /// Minimum `|r″|` on critical curves.
    pub degeneracy: f64,
    /// Number of θ steps on the unit circle when tracing critical curves.
    pub theta_steps: usize,
    /// Smallest θ step allowed by adaptive halving.
    pub min_theta_step: f64,
    /// Iteration caps.
    pub max_aberth_iterations: usize,
    pub max_polish_iterations: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            tol_res: 1e-10,
            tol_singular: 1e-6,
            curve: 1e-9,
            gcd: 1e-10,
            admissibility: 1e-12,
            cusp: 1e-8,
            boundary: 1e-7,
            degeneracy: 1e-8,
            theta_steps: 720,
            min_theta_step: std::f64::consts::TAU / 65536.0,
            max_aberth_iterations: 200,
            max_polish_iterations: 50,
        }
    }
}

impl Tolerances {
    /// Checks that every tolerance is strictly positive and finite.
    pub fn validate(&self) -> Result<()> {
        let named = [
            ("tol_res", self.tol_res),
            ("tol_singular", self.tol_singular),
            ("curve", self.curve),
            ("gcd", self.gcd),
            ("admissibility", self.admissibility),
            ("cusp", self.cusp),
            ("boundary", self.boundary),
            ("degeneracy", self.degeneracy),
            ("min_theta_step", self.min_theta_step),
        ];
        for (name, value) in named {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidInput(format!(
                    "tolerance `{name}` must be positive, got {value}"
                )));
            }
        }
        if self.theta_steps < 8 {
            return Err(Error::InvalidInput("theta_steps must be at least 8".into()));
        }
        if self.max_aberth_iterations == 0 || self.max_polish_iterations == 0 {
            return Err(Error::InvalidInput("iteration caps must be positive".into()));
        }
        Ok(())
    }

    /// A looser profile for quick sweeps.
    pub fn fast() -> Self {
        Self { theta_steps: 360, ..Self::default() }
    }

    /// Looks up a named profile (`default`, `fast`).
    pub fn profile(name: &str) -> Result<Self> {
        match name {
            "default" => Ok(Self::default()),
            "fast" => Ok(Self::fast()),
            other => Err(Error::InvalidInput(format!("unknown tolerance profile `{other}`"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        Tolerances::default().validate().unwrap();
        Tolerances::fast().validate().unwrap();
    }

    #[test]
    fn rejects_nonpositive() {
        let t = Tolerances { tol_res: 0.0, ..Tolerances::default() };
        assert!(t.validate().is_err());
        assert!(Tolerances::profile("bogus").is_err());
    }
}
