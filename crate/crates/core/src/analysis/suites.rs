//! Batches of experiments with a combined verdict, shared by the command
//! line and the acceptance tests.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::Value;

use super::ledger::feature_scale;
use super::{
    cusp_crossing_experiment, fold_crossing_experiment, large_shift_verify, path_invariance_check, Verdict,
};
use crate::caustics::{path_crossings, LocalModel, PointKind};
use crate::structure::CriticalStructure;
use crate::zeros::{find_zeros, verify_argument_principle, ClosedPath};
use crate::{Error, Result, ShiftedFunction};

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub verdict: Verdict,
    pub passed: usize,
    pub failed: usize,
    pub inconclusive: usize,
    pub items: Vec<Value>,
}

impl SuiteReport {
    fn new(suite: &str) -> Self {
        Self { suite: suite.into(), verdict: Verdict::Pass, passed: 0, failed: 0, inconclusive: 0, items: Vec::new() }
    }

    fn record(&mut self, verdict: Verdict, item: Value) {
        match verdict {
            Verdict::Pass => self.passed += 1,
            Verdict::Fail => self.failed += 1,
            Verdict::Inconclusive => self.inconclusive += 1,
        }
        self.verdict = self.verdict.combine(verdict);
        self.items.push(item);
    }

    /// An empty suite proves nothing.
    fn finish(mut self) -> Self {
        if self.items.is_empty() {
            self.verdict = Verdict::Inconclusive;
        }
        self
    }
}

/// Up to `count` fold preimages spread evenly over the critical curves,
/// away from cusps.
pub fn fold_points(structure: &CriticalStructure, count: usize) -> Vec<Complex64> {
    let total: usize = structure.curves.iter().map(|c| c.len()).sum();
    let mut out = Vec::new();
    if total == 0 || count == 0 {
        return out;
    }
    for curve in &structure.curves {
        let n = curve.len();
        let share = ((count * n) as f64 / total as f64).round().max(1.0) as usize;
        let mut cusps = curve.cusp_indices.clone();
        cusps.sort_unstable();
        let min_gap = (0..cusps.len())
            .map(|k| (cusps[(k + 1) % cusps.len()] + n - cusps[k]) % n)
            .filter(|&g| g > 0)
            .min()
            .unwrap_or(n);
        let keep_out = (n / 12).min(min_gap / 4).max(2);
        for k in 0..share {
            // offset by half a slot so that symmetrically placed cusps are
            // not hit head-on; slide forward when too close to one anyway
            let base = ((k as f64 + 0.5) * n as f64 / share as f64) as usize;
            let found = (0..n / 2).map(|step| (base + step) % n).find(|&i| {
                let clear = curve.cusp_indices.iter().all(|&c| {
                    let d = i.abs_diff(c);
                    d.min(n - d) >= keep_out
                });
                clear
                    && LocalModel::at(&structure.r, curve.points[i].z, &structure.tol)
                        .is_ok_and(|m| m.kind == PointKind::Fold)
                    && isolated_fold(structure, curve.curve_id, curve.points[i].z)
            });
            if let Some(i) = found {
                out.push(curve.points[i].z);
            }
        }
    }
    out.truncate(count);
    out
}

/// The fold image is far from cusps and from other caustic arcs, relative
/// to the size of the caustics.
fn isolated_fold(structure: &CriticalStructure, curve_id: usize, z: Complex64) -> bool {
    let Ok(w) = structure.r.eval(z).map(|v| v - z.conj()) else { return false };
    let size = structure.caustics.iter().map(|c| (c.bbox.1 - c.bbox.0).norm()).fold(0.0, f64::max);
    feature_scale(structure, w, curve_id, None) > 1e-2 * size
}

pub fn fold_suite(structure: &CriticalStructure, count: usize) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("fold");
    for z0 in fold_points(structure, count) {
        let ledger = fold_crossing_experiment(structure, z0)?;
        report.record(ledger.verdict, serde_json::to_value(&ledger)?);
    }
    Ok(report.finish())
}

/// Crossing experiments at every detected cusp.
pub fn cusp_suite(structure: &CriticalStructure) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("cusp");
    for curve in &structure.curves {
        for cusp in &curve.cusps {
            let ledger = cusp_crossing_experiment(structure, cusp.z)?;
            report.record(ledger.verdict, serde_json::to_value(&ledger)?);
        }
    }
    Ok(report.finish())
}

/// Large-shift checks in `directions` evenly spaced directions.
pub fn asymptotic_suite(structure: &CriticalStructure, magnitude: f64, directions: usize) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("asymptotic");
    for k in 0..directions {
        let angle = TAU * (k as f64 + 0.125) / directions as f64;
        let r = large_shift_verify(structure, magnitude, angle)?;
        report.record(r.verdict, serde_json::to_value(&r)?);
    }
    Ok(report.finish())
}

/// Bounding box of all caustics padded by 20%, or a unit box without
/// caustics.
pub fn caustic_box(structure: &CriticalStructure) -> (Complex64, Complex64) {
    let mut lo = Complex64::new(-1.0, -1.0);
    let mut hi = Complex64::new(1.0, 1.0);
    for (k, c) in structure.caustics.iter().enumerate() {
        if k == 0 {
            (lo, hi) = c.bbox;
        }
        lo = Complex64::new(lo.re.min(c.bbox.0.re), lo.im.min(c.bbox.0.im));
        hi = Complex64::new(hi.re.max(c.bbox.1.re), hi.im.max(c.bbox.1.im));
    }
    let pad = (hi - lo) * 0.2;
    (lo - pad, hi + pad)
}

/// Random pairs of shifts joined by a segment that avoids the caustics.
pub fn same_face_pairs(structure: &CriticalStructure, pairs: usize, seed: u64) -> Vec<(Complex64, Complex64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (lo, hi) = caustic_box(structure);
    let span = (hi - lo).norm();
    let mut out = Vec::with_capacity(pairs);
    let mut attempts = 0;
    while out.len() < pairs && attempts < 1000 * pairs.max(1) {
        attempts += 1;
        let a = Complex64::new(rng.gen_range(lo.re..hi.re), rng.gen_range(lo.im..hi.im));
        let step = span * 0.1 * rng.gen::<f64>().powi(2);
        let b = a + Complex64::from_polar(step, TAU * rng.gen::<f64>());
        if matches!(path_crossings(structure, &[a, b]), Ok(events) if events.is_empty()) {
            out.push((a, b));
        }
    }
    out
}

pub fn invariance_suite(structure: &CriticalStructure, pairs: usize, seed: u64) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("invariance");
    for (a, b) in same_face_pairs(structure, pairs, seed) {
        let check = path_invariance_check(structure, a, b, None)?;
        report.record(check.verdict, serde_json::to_value(&check)?);
    }
    Ok(report.finish())
}

/// Argument principle on random circles around random shifts of one `r`.
pub fn argument_suite(structure: &CriticalStructure, circles: usize, seed: u64) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = SuiteReport::new("argument");
    let (lo, hi) = caustic_box(structure);
    let poles: Vec<Complex64> = structure.r.poles().iter().map(|p| p.location).collect();
    let mut attempts = 0;
    while report.items.len() < circles && attempts < 100 * circles.max(1) {
        attempts += 1;
        let eta = Complex64::new(rng.gen_range(lo.re..hi.re), rng.gen_range(lo.im..hi.im));
        let f = ShiftedFunction::with_tolerances(structure.r.clone(), eta, &structure.tol)?;
        let census = find_zeros(&f, &structure.tol)?;
        if !census.consistent || census.counts.n_s > 0 {
            continue;
        }
        let extent = census.locations().iter().chain(&poles).map(|z| z.norm()).fold(1.0, f64::max);
        let center = Complex64::new(rng.gen_range(-extent..extent), rng.gen_range(-extent..extent));
        let radius = rng.gen_range(0.05..1.5) * extent;
        let clear = census.locations().iter().chain(&poles).all(|z| ((z - center).norm() - radius).abs() > 1e-3 * extent);
        if !clear {
            continue;
        }
        match verify_argument_principle(&f, &census, &ClosedPath::circle(center, radius)) {
            Ok(ap) => {
                let integral = (ap.winding.value - ap.winding.rounded as f64).abs() < 1e-6;
                let verdict = if ap.holds && integral { Verdict::Pass } else { Verdict::Fail };
                report.record(
                    verdict,
                    serde_json::json!({ "eta": [eta.re, eta.im], "center": [center.re, center.im], "radius": radius, "report": ap }),
                );
            }
            Err(Error::OnZero { .. } | Error::RefinementBudget(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(report.finish())
}
