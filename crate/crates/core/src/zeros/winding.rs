use std::f64::consts::{FRAC_PI_2, TAU};

use num_complex::Complex64;
use serde::Serialize;

use crate::geometry::point_in_polygon;
use crate::{Error, Result};

/// Total sample budget of one winding computation.
pub const WINDING_BUDGET: usize = 1 << 20;
const INITIAL_SAMPLES: usize = 256;

/// A closed curve in the `z`-plane.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ClosedPath {
    Circle { center: Complex64, radius: f64 },
    /// Vertices of a closed polygon; the last vertex connects to the first.
    Polyline { points: Vec<Complex64> },
}

impl ClosedPath {
    pub fn circle(center: Complex64, radius: f64) -> Self {
        Self::Circle { center, radius }
    }

    /// Point at parameter `s ∈ [0, 1]`, positively oriented for circles.
    pub fn point(&self, s: f64) -> Complex64 {
        match self {
            Self::Circle { center, radius } => center + Complex64::from_polar(*radius, TAU * s),
            Self::Polyline { points } => {
                let n = points.len();
                let x = (s * n as f64).clamp(0.0, n as f64);
                let i = (x.floor() as usize).min(n - 1);
                let t = x - i as f64;
                points[i] + (points[(i + 1) % n] - points[i]) * t
            }
        }
    }

    /// Interior membership (even-odd rule for polygons).
    pub fn contains(&self, z: Complex64) -> bool {
        match self {
            Self::Circle { center, radius } => (z - center).norm() < *radius,
            Self::Polyline { points } => point_in_polygon(z, points),
        }
    }

    /// `+1` for a counter-clockwise curve, `−1` for clockwise.
    pub fn orientation(&self) -> i32 {
        match self {
            Self::Circle { .. } => 1,
            Self::Polyline { points } => {
                if crate::geometry::signed_area(points) >= 0.0 {
                    1
                } else {
                    -1
                }
            }
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            Self::Circle { radius, .. } if !(*radius > 0.0 && radius.is_finite()) => {
                Err(Error::InvalidInput(format!("circle radius must be positive, got {radius}")))
            }
            Self::Polyline { points } if points.len() < 3 => {
                Err(Error::InvalidInput("closed polyline needs at least three points".into()))
            }
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WindingResult {
    /// Accumulated argument change divided by 2π.
    pub value: f64,
    pub rounded: i32,
    pub samples: usize,
    /// Largest argument change between consecutive samples.
    pub max_step: f64,
}

/// Winding number of `g` along `path`.
///
/// Steps are bisected until consecutive values differ by less than half
/// their modulus, which keeps every argument step below π/6 and rules out
/// skipped turns between samples of a smooth `g`.
pub fn winding<G>(g: G, path: &ClosedPath) -> Result<WindingResult>
where
    G: Fn(Complex64) -> Result<Complex64>,
{
    path.validate()?;
    let eval = |s: f64| -> Result<(Complex64, Complex64)> {
        let z = path.point(s);
        let v = g(z)?;
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::Overflow(z));
        }
        Ok((z, v))
    };
    let mut samples = INITIAL_SAMPLES;
    let mut total = 0.0;
    let mut max_step: f64 = 0.0;
    let first = eval(0.0)?;
    let mut floor = first.1.norm();
    let mut stack: Vec<(f64, Complex64, f64, Complex64)> = Vec::new();
    let mut prev = (0.0, first.1);
    for k in 1..=INITIAL_SAMPLES {
        let s = k as f64 / INITIAL_SAMPLES as f64;
        let v = if k == INITIAL_SAMPLES { first.1 } else { eval(s)?.1 };
        stack.push((prev.0, prev.1, s, v));
        prev = (s, v);
        // process in path order: push the segment and drain the stack
        while let Some((s0, v0, s1, v1)) = stack.pop() {
            floor = floor.min(v0.norm()).min(v1.norm());
            if v0.norm() == 0.0 || v1.norm() == 0.0 {
                return Err(Error::OnZero { at: path.point(if v0.norm() == 0.0 { s0 } else { s1 }), modulus: 0.0 });
            }
            let chord = (v1 - v0).norm();
            if chord >= 0.5 * v0.norm().min(v1.norm()) {
                if samples >= WINDING_BUDGET {
                    let at = path.point(0.5 * (s0 + s1));
                    return if floor < 1e-12 {
                        Err(Error::OnZero { at, modulus: floor })
                    } else {
                        Err(Error::RefinementBudget(samples))
                    };
                }
                let sm = 0.5 * (s0 + s1);
                let vm = eval(sm)?.1;
                samples += 1;
                // second half is processed after the first
                stack.push((sm, vm, s1, v1));
                stack.push((s0, v0, sm, vm));
                continue;
            }
            let step = (v1 / v0).arg();
            max_step = max_step.max(step.abs());
            total += step;
        }
    }
    let value = total / TAU;
    let rounded = value.round() as i32;
    debug_assert!(max_step < FRAC_PI_2);
    Ok(WindingResult { value, rounded, samples, max_step })
}
