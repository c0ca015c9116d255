use std::collections::{BTreeMap, BTreeSet};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::census_at;
use crate::geometry::point_segment_distance;
use crate::structure::CriticalStructure;
use crate::zeros::Counts;
use crate::{Error, Result};

/// Largest grid dimension per axis.
pub const MAX_GRID: usize = 4096;

/// Cell-centred sample grid over a rectangle of shifts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Grid {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
    pub nx: usize,
    pub ny: usize,
}

impl Grid {
    pub fn square(center: Complex64, half: f64, n: usize) -> Self {
        Self { re_min: center.re - half, re_max: center.re + half, im_min: center.im - half, im_max: center.im + half, nx: n, ny: n }
    }

    pub fn validate(&self) -> Result<()> {
        if self.nx == 0 || self.ny == 0 || self.nx > MAX_GRID || self.ny > MAX_GRID {
            return Err(Error::InvalidInput(format!(
                "grid dimensions must be in 1..={MAX_GRID}, got {}x{}",
                self.nx, self.ny
            )));
        }
        if !(self.re_min < self.re_max && self.im_min < self.im_max) {
            return Err(Error::InvalidInput("grid rectangle is empty".into()));
        }
        Ok(())
    }

    fn cell(&self) -> (f64, f64) {
        ((self.re_max - self.re_min) / self.nx as f64, (self.im_max - self.im_min) / self.ny as f64)
    }

    /// Sample `(i, j)`, row-major with `i` along the real axis.
    pub fn point(&self, i: usize, j: usize) -> Complex64 {
        let (dx, dy) = self.cell();
        Complex64::new(self.re_min + dx * (i as f64 + 0.5), self.im_min + dy * (j as f64 + 0.5))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct SampleFlags {
    /// Moved off a caustic by a tiny deterministic offset.
    pub jittered: bool,
    /// Still on a caustic after jittering.
    pub on_caustic: bool,
    /// The census contains singular zeros.
    pub singular: bool,
    /// The census fails the argument-principle balance.
    pub inconsistent: bool,
}

impl SampleFlags {
    pub fn clean(&self) -> bool {
        !(self.on_caustic || self.singular || self.inconsistent)
    }

    /// `|`-separated flag names, empty when no flag is set.
    pub fn label(&self) -> String {
        let mut parts = Vec::new();
        if self.jittered {
            parts.push("jittered");
        }
        if self.on_caustic {
            parts.push("on_caustic");
        }
        if self.singular {
            parts.push("singular");
        }
        if self.inconsistent {
            parts.push("inconsistent");
        }
        parts.join("|")
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CountSample {
    pub eta: Complex64,
    pub counts: Counts,
    pub faces: BTreeMap<usize, Counts>,
    pub flags: SampleFlags,
}

#[derive(Debug, Clone, Serialize)]
pub struct CountMap {
    pub grid: Grid,
    /// Row-major samples, `j * nx + i`.
    pub samples: Vec<CountSample>,
    /// Zero counts observed at clean samples.
    pub levels: BTreeSet<usize>,
}

impl CountMap {
    pub fn sample(&self, i: usize, j: usize) -> &CountSample {
        &self.samples[j * self.grid.nx + i]
    }
}

fn caustic_distance(structure: &CriticalStructure, eta: Complex64) -> f64 {
    let mut best = f64::INFINITY;
    for caustic in &structure.caustics {
        let (lo, hi) = caustic.bbox;
        let outside = (lo.re - eta.re).max(eta.re - hi.re).max(lo.im - eta.im).max(eta.im - hi.im);
        if outside > best {
            continue;
        }
        let n = caustic.len();
        for i in 0..n {
            let d = point_segment_distance(eta, caustic.points[i].w, caustic.points[(i + 1) % n].w).0;
            best = best.min(d);
        }
    }
    best
}

/// Zero counts over a grid of shifts, evaluated in parallel and returned in
/// grid order.
pub fn count_map(structure: &CriticalStructure, grid: &Grid) -> Result<CountMap> {
    grid.validate()?;
    let (dx, dy) = grid.cell();
    let jitter = Complex64::new(dx, dy) * 1e-6;
    let samples = (0..grid.nx * grid.ny)
        .into_par_iter()
        .map(|k| {
            let (i, j) = (k % grid.nx, k / grid.nx);
            let mut eta = grid.point(i, j);
            let mut flags = SampleFlags::default();
            let near = |eta: Complex64| caustic_distance(structure, eta) < structure.tol.boundary * (1.0 + eta.norm());
            if near(eta) {
                eta += jitter;
                flags.jittered = true;
                flags.on_caustic = near(eta);
            }
            let census = census_at(structure, eta)?;
            flags.singular = census.counts.n_s > 0;
            flags.inconsistent = !census.consistent;
            Ok(CountSample { eta, counts: census.counts, faces: census.face_counts(), flags })
        })
        .collect::<Result<Vec<_>>>()?;
    let levels = samples.iter().filter(|s| s.flags.clean()).map(|s| s.counts.n).collect();
    Ok(CountMap { grid: *grid, samples, levels })
}
