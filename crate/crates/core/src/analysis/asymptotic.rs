use num_complex::Complex64;
use serde::Serialize;

use super::{census_at, Verdict};
use crate::critical::UNBOUNDED_FACE;
use crate::structure::CriticalStructure;
use crate::zeros::ZeroOrientation;
use crate::{RationalFn, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AsymptoticCount {
    /// `max(deg p − deg q, 1)`.
    pub k: usize,
    /// `deg q + k`.
    pub expected: usize,
    /// Leading coefficient of the polynomial part when `deg p > deg q`.
    pub c: Option<Complex64>,
}

/// Number of zeros of `f_η` for all sufficiently large `|η|`.
pub fn asymptotic_count(r: &RationalFn) -> AsymptoticCount {
    let (p, q) = (r.numerator(), r.denominator());
    let (dp, dq) = (p.deg(), q.deg());
    let k = dp.saturating_sub(dq).max(1);
    let c = (dp > dq).then(|| p.leading() / q.leading());
    AsymptoticCount { k, expected: dq + k, c }
}

#[derive(Debug, Clone, Serialize)]
pub struct PoleCluster {
    pub pole: Complex64,
    pub multiplicity: usize,
    pub zeros: Vec<Complex64>,
    pub all_preserving: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct FarZero {
    pub z: Complex64,
    pub face: Option<usize>,
    pub orientation: ZeroOrientation,
}

#[derive(Debug, Clone, Serialize)]
pub struct AsymptoticReport {
    pub eta: Complex64,
    pub k: usize,
    pub c: Option<Complex64>,
    pub expected: usize,
    pub observed: usize,
    /// Radius of the pole disks, `|η|^{−1/2}`.
    pub epsilon: f64,
    pub poles: Vec<PoleCluster>,
    pub far_zeros: Vec<FarZero>,
    pub verdict: Verdict,
    pub diagnostics: Vec<String>,
}

/// Census at `η = magnitude · e^{i·angle}` checked against the large-shift
/// picture: `μ_j` sense-preserving zeros near each pole `v_j`, and `k`
/// further zeros in the unbounded face.
pub fn large_shift_verify(structure: &CriticalStructure, magnitude: f64, angle: f64) -> Result<AsymptoticReport> {
    let r = &structure.r;
    let eta = Complex64::from_polar(magnitude, angle);
    let census = census_at(structure, eta)?;
    let AsymptoticCount { k, expected, c } = asymptotic_count(r);
    let epsilon = magnitude.powf(-0.5);
    let mut diagnostics = Vec::new();
    let mut used = vec![false; census.zeros.len()];
    let mut poles = Vec::new();
    for pole in r.poles() {
        let mut zeros = Vec::new();
        let mut all_preserving = true;
        for (i, rec) in census.zeros.iter().enumerate() {
            if (rec.z - pole.location).norm() < epsilon {
                used[i] = true;
                zeros.push(rec.z);
                all_preserving &= rec.orientation == ZeroOrientation::Preserving;
            }
        }
        if zeros.len() != pole.multiplicity {
            diagnostics.push(format!(
                "pole {} of multiplicity {} attracts {} zeros",
                pole.location,
                pole.multiplicity,
                zeros.len()
            ));
        }
        if !all_preserving {
            diagnostics.push(format!("a zero near pole {} is not sense-preserving", pole.location));
        }
        poles.push(PoleCluster { pole: pole.location, multiplicity: pole.multiplicity, zeros, all_preserving });
    }
    let far_zeros: Vec<FarZero> = census
        .zeros
        .iter()
        .zip(&used)
        .filter(|(_, &u)| !u)
        .map(|(rec, _)| FarZero { z: rec.z, face: rec.face, orientation: rec.orientation })
        .collect();
    if far_zeros.len() != k {
        diagnostics.push(format!("{} zeros away from the poles, expected {k}", far_zeros.len()));
    }
    for fz in &far_zeros {
        if fz.face != Some(UNBOUNDED_FACE) {
            diagnostics.push(format!("far zero {} lies in face {:?}, not in the unbounded face", fz.z, fz.face));
        }
    }
    if census.counts.n != expected {
        diagnostics.push(format!("{} zeros, expected deg q + k = {expected}", census.counts.n));
    }
    let verdict = if diagnostics.is_empty() {
        Verdict::Pass
    } else if !census.consistent {
        diagnostics.push("census fails the argument-principle balance".into());
        Verdict::Inconclusive
    } else {
        Verdict::Fail
    };
    Ok(AsymptoticReport {
        eta,
        k,
        c,
        expected,
        observed: census.counts.n,
        epsilon,
        poles,
        far_zeros,
        verdict,
        diagnostics,
    })
}
