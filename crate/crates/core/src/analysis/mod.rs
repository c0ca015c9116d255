//! Experiments on the zero-count theory: large shifts, safe shift radii,
//! path invariance, fold and cusp crossings, extremality and count maps.

mod asymptotic;
mod countmap;
mod ledger;
mod safe;
pub mod suites;

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Serialize;

use crate::structure::CriticalStructure;
use crate::zeros::{find_zeros_in, zero_bound, Census, Counts};
use crate::{RationalFn, Result, ShiftedFunction};

pub use asymptotic::{asymptotic_count, large_shift_verify, AsymptoticCount, AsymptoticReport, FarZero, PoleCluster};
pub use countmap::{count_map, CountMap, CountSample, Grid, SampleFlags};
pub use ledger::{
    cusp_crossing_experiment, fold_crossing_experiment, path_invariance_check, path_ledger, CrossingLedger,
    FaceTable, OnCaustic, PathInvariance,
};
pub use safe::{safe_shift_radius, safe_shift_self_test, SafeShift, SafeShiftCheck};

/// Outcome of an experiment. Inconclusive never counts as a pass.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl Verdict {
    pub fn is_pass(self) -> bool {
        self == Verdict::Pass
    }

    /// Fail dominates, then inconclusive.
    pub fn combine(self, other: Verdict) -> Verdict {
        match (self, other) {
            (Verdict::Fail, _) | (_, Verdict::Fail) => Verdict::Fail,
            (Verdict::Inconclusive, _) | (_, Verdict::Inconclusive) => Verdict::Inconclusive,
            _ => Verdict::Pass,
        }
    }

    pub fn all(verdicts: impl IntoIterator<Item = Verdict>) -> Verdict {
        verdicts.into_iter().fold(Verdict::Pass, Verdict::combine)
    }
}

/// Census of `f_η` with faces assigned.
pub fn census_at(structure: &CriticalStructure, eta: Complex64) -> Result<Census> {
    let f = ShiftedFunction::with_tolerances(structure.r.clone(), eta, &structure.tol)?;
    find_zeros_in(&f, &structure.partition, &structure.tol)
}

/// No singular zeros in the census.
pub fn regularity_check(census: &Census) -> bool {
    census.counts.n_s == 0
}

/// The census attains the bound `5 deg r − 5`.
pub fn extremal_check(census: &Census, r: &RationalFn) -> bool {
    census.counts.n == zero_bound(r)
}

#[derive(Debug, Clone, Serialize)]
pub struct Extremality {
    pub eta: Complex64,
    pub counts: Counts,
    pub regular: bool,
    pub extremal: bool,
    /// `N = deg q − 1` with no sense-reversing zeros.
    pub minimal: bool,
    pub bound: usize,
    pub faces: BTreeMap<usize, Counts>,
}

pub fn extremality(structure: &CriticalStructure, eta: Complex64) -> Result<Extremality> {
    let census = census_at(structure, eta)?;
    let r = &structure.r;
    let dq = r.denominator().deg();
    Ok(Extremality {
        eta,
        counts: census.counts,
        regular: regularity_check(&census),
        extremal: extremal_check(&census, r),
        minimal: dq >= 1 && census.counts.n + 1 == dq && census.counts.n_minus == 0,
        bound: zero_bound(r),
        faces: census.face_counts(),
    })
}
