use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::geometry::polyline_distance;
use crate::structure::CriticalStructure;
use crate::zeros::{find_zeros, Census};
use crate::{Result, ShiftedFunction};

const GRID: usize = 300;
const RING: usize = 256;

#[derive(Debug, Clone, Serialize)]
pub struct SafeShift {
    /// Shifts with `|Δη| < delta` keep one zero of unchanged orientation in
    /// each disk.
    pub delta: f64,
    /// Radius of the disks around the zeros.
    pub epsilon: f64,
    pub centers: Vec<Complex64>,
    /// Smallest sampled `|f|` outside the disks (`delta` is half of it).
    pub min_modulus: f64,
    pub samples: usize,
}

/// Perturbation radius for the shift of `f` that leaves the census
/// unchanged disk by disk.
///
/// `ε` is half the smallest distance between zeros and from zeros to the
/// critical curves; `|f|` is sampled on a grid outside the `ε`-disks, on the
/// disk boundaries and on far rings, and `δ` is half the sampled minimum.
pub fn safe_shift_radius(f: &ShiftedFunction, census: &Census, structure: &CriticalStructure) -> Result<SafeShift> {
    let centers = census.locations();
    let polylines: Vec<Vec<Complex64>> = structure.curves.iter().map(|c| c.locations()).collect();
    let mut epsilon = f64::INFINITY;
    for (i, a) in centers.iter().enumerate() {
        for b in &centers[..i] {
            epsilon = epsilon.min(0.5 * (a - b).norm());
        }
        for poly in &polylines {
            epsilon = epsilon.min(0.5 * polyline_distance(*a, poly));
        }
    }
    if !epsilon.is_finite() {
        epsilon = 1.0;
    }
    let extent = centers
        .iter()
        .copied()
        .chain(structure.r.poles().iter().map(|p| p.location))
        .chain(polylines.iter().flatten().copied())
        .map(|z| z.norm())
        .fold(1.0, f64::max);
    let half = 1.5 * extent;
    let outside = |z: Complex64| centers.iter().all(|c| (z - c).norm() >= epsilon);
    let mut min_modulus = f64::INFINITY;
    let mut samples = 0;
    let mut visit = |z: Complex64| {
        if let Ok(v) = f.eval(z) {
            min_modulus = min_modulus.min(v.norm());
            samples += 1;
        }
    };
    for i in 0..=GRID {
        for j in 0..=GRID {
            let z = Complex64::new(-half + 2.0 * half * i as f64 / GRID as f64, -half + 2.0 * half * j as f64 / GRID as f64);
            if outside(z) {
                visit(z);
            }
        }
    }
    for c in &centers {
        for k in 0..RING {
            visit(c + Complex64::from_polar(epsilon, TAU * k as f64 / RING as f64));
        }
    }
    for m in 0..5 {
        let radius = half * 2f64.powi(m);
        for k in 0..4 * RING {
            visit(Complex64::from_polar(radius, TAU * k as f64 / (4 * RING) as f64));
        }
    }
    Ok(SafeShift { delta: 0.5 * min_modulus, epsilon, centers, min_modulus, samples })
}

#[derive(Debug, Clone, Serialize)]
pub struct SafeShiftCheck {
    pub radius: f64,
    /// `radius ≤ δ`; outside the contract stability is not guaranteed.
    pub in_contract: bool,
    pub shifts: Vec<Complex64>,
    pub stable: Vec<bool>,
    pub all_stable: bool,
}

/// Recounts at `n` random shifts `η + Δ` with `|Δ| < radius` and checks
/// that every `ε`-disk keeps exactly one zero of the same orientation and
/// that no zero appears elsewhere.
pub fn safe_shift_self_test(
    f: &ShiftedFunction,
    census: &Census,
    safe: &SafeShift,
    radius: f64,
    n: usize,
    seed: u64,
    structure: &CriticalStructure,
) -> Result<SafeShiftCheck> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut shifts = Vec::with_capacity(n);
    let mut stable = Vec::with_capacity(n);
    for _ in 0..n {
        let delta = Complex64::from_polar(radius * rng.gen::<f64>().sqrt(), TAU * rng.gen::<f64>());
        let g = f.with_eta(f.eta() + delta);
        let other = find_zeros(&g, &structure.tol)?;
        let ok = other.counts.n == census.counts.n
            && census.zeros.iter().all(|rec| {
                let inside: Vec<_> = other.zeros.iter().filter(|o| (o.z - rec.z).norm() < safe.epsilon).collect();
                inside.len() == 1 && inside[0].orientation == rec.orientation
            });
        shifts.push(f.eta() + delta);
        stable.push(ok);
    }
    Ok(SafeShiftCheck {
        radius,
        in_contract: radius <= safe.delta,
        all_stable: stable.iter().all(|&s| s),
        shifts,
        stable,
    })
}
