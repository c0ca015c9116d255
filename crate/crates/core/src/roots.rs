//! Polynomial root finding and Newton polishing of harmonic zeros.
//!
//! [`all_roots`] runs the Aberth–Ehrlich simultaneous iteration with initial
//! points on circles whose radii come from the Newton polygon of the
//! coefficient moduli, followed by a per-root Newton polish.
//! [`newton_polish`] refines a candidate zero of `f_η` by Newton's method on
//! the real 2×2 system `(Re f_η, Im f_η)`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::Serialize;

use crate::algebra::{ComplexPoly, ShiftedFunction};
use crate::{Error, Result};

const EPS: f64 = f64::EPSILON;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Root {
    pub z: Complex64,
    /// Relative condition estimate `Σ|a_k||z|^k / (|z| |p′(z)|)`.
    pub condition: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RootSet {
    pub roots: Vec<Root>,
    pub iterations: usize,
    pub converged: bool,
}

impl RootSet {
    pub fn locations(&self) -> Vec<Complex64> {
        self.roots.iter().map(|r| r.z).collect()
    }
}

/// All `deg p` roots of `p`. `tol` bounds the accepted backward error
/// `|p(z)| / Σ|a_k||z|^k`; roots that miss it leave the set flagged as
/// not converged.
pub fn all_roots(p: &ComplexPoly, tol: f64) -> Result<RootSet> {
    all_roots_with(p, tol, 200, 50)
}

pub fn all_roots_with(
    p: &ComplexPoly,
    tol: f64,
    max_iterations: usize,
    max_polish: usize,
) -> Result<RootSet> {
    let degree = p.degree().unwrap_or(0);
    if degree == 0 {
        return Err(Error::InvalidInput("root finding needs a polynomial of degree >= 1".into()));
    }
    let zero_roots = p.coeffs().iter().take_while(|c| c.norm() == 0.0).count();
    let reduced = ComplexPoly::trimmed(p.coeffs()[zero_roots..].to_vec());
    let mut roots = vec![Complex64::new(0.0, 0.0); zero_roots];
    let mut iterations = 0;
    if reduced.deg() >= 1 {
        let init = initial_guesses(&reduced);
        let (found, its) = aberth(&reduced, init, max_iterations);
        iterations = its;
        roots.extend(found.into_iter().map(|z| polish_root(&reduced, z, max_polish)));
    }
    Ok(finish(p, roots, iterations, tol))
}

fn finish(p: &ComplexPoly, roots: Vec<Complex64>, iterations: usize, tol: f64) -> RootSet {
    let dp = p.derivative();
    let mut converged = true;
    let roots = roots
        .into_iter()
        .map(|z| {
            let scale = p.abs_scale(z);
            let backward = if scale > 0.0 { p.horner(z).norm() / scale } else { 0.0 };
            if !(backward < tol) || !z.re.is_finite() || !z.im.is_finite() {
                converged = false;
            }
            let deriv = dp.horner(z).norm() * z.norm().max(1e-300);
            let condition = if deriv > 0.0 { scale / deriv } else { f64::INFINITY };
            Root { z, condition }
        })
        .collect();
    RootSet { roots, iterations, converged }
}

/// Initial points on circles with radii read off the upper convex hull of
/// `(k, log|a_k|)`.
fn initial_guesses(p: &ComplexPoly) -> Vec<Complex64> {
    let n = p.deg();
    let pts: Vec<(usize, f64)> = p
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| c.norm() > 0.0)
        .map(|(k, c)| (k, c.norm().ln()))
        .collect();
    let mut hull: Vec<(usize, f64)> = Vec::with_capacity(pts.len());
    for &pt in &pts {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (b.0 as f64 - a.0 as f64) * (pt.1 - a.1) - (b.1 - a.1) * (pt.0 as f64 - a.0 as f64);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    let mut guesses = Vec::with_capacity(n);
    for w in hull.windows(2) {
        let (i, li) = w[0];
        let (j, lj) = w[1];
        let count = j - i;
        let radius = ((li - lj) / count as f64).exp();
        for l in 0..count {
            let angle = TAU * l as f64 / count as f64 + TAU * i as f64 / n as f64 + 0.7;
            guesses.push(Complex64::from_polar(radius, angle));
        }
    }
    guesses
}

fn aberth(p: &ComplexPoly, mut z: Vec<Complex64>, max_iterations: usize) -> (Vec<Complex64>, usize) {
    let n = z.len();
    let dp = p.derivative();
    let mut done = vec![false; n];
    let stop = 4.0 * EPS * (n as f64 + 1.0);
    let mut iterations = 0;
    for it in 0..max_iterations {
        iterations = it + 1;
        let mut all_done = true;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let zi = z[i];
            let pv = p.horner(zi);
            if pv.norm() <= stop * p.abs_scale(zi) {
                done[i] = true;
                continue;
            }
            all_done = false;
            let dv = dp.horner(zi);
            let sum: Complex64 = z
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &zj)| {
                    let diff = zi - zj;
                    if diff.norm() == 0.0 {
                        Complex64::new(0.0, 0.0)
                    } else {
                        diff.inv()
                    }
                })
                .sum();
            let ratio = if dv.norm() == 0.0 { Complex64::new(1e-3, 1e-3) * (1.0 + zi.norm()) } else { pv / dv };
            let denom = Complex64::new(1.0, 0.0) - ratio * sum;
            let w = if denom.norm() == 0.0 { ratio } else { ratio / denom };
            let next = zi - w;
            if next.re.is_finite() && next.im.is_finite() {
                z[i] = next;
            }
            if w.norm() <= EPS * next.norm() {
                done[i] = true;
            }
        }
        if all_done {
            break;
        }
    }
    (z, iterations)
}

fn polish_root(p: &ComplexPoly, mut z: Complex64, max_iterations: usize) -> Complex64 {
    let dp = p.derivative();
    let mut val = p.horner(z).norm();
    for _ in 0..max_iterations {
        if val == 0.0 {
            break;
        }
        let d = dp.horner(z);
        if d.norm() == 0.0 {
            break;
        }
        let step = p.horner(z) / d;
        let next = z - step;
        let next_val = p.horner(next).norm();
        if !(next_val < val) {
            break;
        }
        z = next;
        val = next_val;
        if step.norm() <= EPS * z.norm() {
            break;
        }
    }
    z
}

/// Result of [`newton_polish`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Polished {
    pub z: Complex64,
    /// `|f_η(z)|`.
    pub residual: f64,
    /// Residual scale `1 + |z| + |r(z)| + |η|`.
    pub scale: f64,
    /// `J_f(z) = |r′(z)|² − 1` at the result.
    pub jacobian: f64,
    pub iterations: usize,
    /// `residual < tol · scale`.
    pub converged: bool,
    /// The Jacobian fell into the singular band during the iteration.
    pub near_critical: bool,
}

/// Newton's method on `(Re f_η, Im f_η)` in `(Re z, Im z)`.
///
/// With `a = r′(z)` the real 2×2 Jacobian is inverted in closed form:
/// the step solving `aΔ − conj(Δ) = −f` is `Δ = −(conj(a) f + conj(f)) / (|a|² − 1)`.
/// Iteration continues past `tol` until the step stalls, so singular zeros
/// are approached as closely as floating point allows.
pub fn newton_polish(
    f: &ShiftedFunction,
    z0: Complex64,
    tol: f64,
    max_iterations: usize,
    tol_singular: f64,
) -> Result<Polished> {
    let mut z = z0;
    let mut fz = f.eval(z).map_err(|_| Error::Divergence { start: z0 })?;
    let mut near_critical = false;
    let mut iterations = 0;
    for it in 0..max_iterations {
        iterations = it + 1;
        if fz.norm() == 0.0 {
            break;
        }
        let a = f.r().derivs(z).map_err(|_| Error::Divergence { start: z0 })?[1];
        let jac = a.norm_sqr() - 1.0;
        if jac.abs() < tol_singular {
            near_critical = true;
        }
        if jac == 0.0 {
            break;
        }
        let step = -(a.conj() * fz + fz.conj()) / jac;
        let mut lambda = 1.0;
        let mut accepted = None;
        while lambda > 1.0 / 4096.0 {
            let cand = z + step * lambda;
            if let Ok(fc) = f.eval(cand) {
                if fc.norm() < fz.norm() {
                    accepted = Some((cand, fc));
                    break;
                }
            }
            lambda *= 0.5;
        }
        let Some((next, fnext)) = accepted else { break };
        let moved = (next - z).norm();
        z = next;
        fz = fnext;
        if z.norm() > 1e12 {
            return Err(Error::Divergence { start: z0 });
        }
        if moved <= 4.0 * EPS * (1.0 + z.norm()) {
            break;
        }
    }
    let [rz, a, _] = f.r().derivs(z).map_err(|_| Error::Divergence { start: z0 })?;
    let jacobian = a.norm_sqr() - 1.0;
    if jacobian.abs() < tol_singular {
        near_critical = true;
    }
    let scale = 1.0 + z.norm() + rz.norm() + f.eta().norm();
    let residual = fz.norm();
    Ok(Polished {
        z,
        residual,
        scale,
        jacobian,
        iterations,
        converged: residual < tol * scale,
        near_critical,
    })
}
