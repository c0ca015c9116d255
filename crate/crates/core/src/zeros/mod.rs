//! Zeros of `f_η`, their classification, windings and Poincaré indices.
//!
//! Zeros are computed as roots of the elimination polynomial, polished by
//! Newton's method on `f_η` itself, deduplicated and classified by the sign
//! of `J_f = |r′|² − 1`. The census is cross-checked against the argument
//! principle on a circle enclosing everything: `N₊ − N₋ + Σ ind(singular)`
//! must equal the far-field winding plus the number of poles.

mod winding;

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Serialize;

use crate::algebra::{elimination_poly, RationalFn, ShiftedFunction};
use crate::critical::RegionPartition;
use crate::roots::{all_roots_with, newton_polish, Polished};
use crate::{Error, Result, Tolerances};

pub use winding::{winding, ClosedPath, WindingResult, WINDING_BUDGET};

/// Residuals between `tol_res` and this (relative) bound are ambiguous.
const AMBIGUOUS_RES: f64 = 1e-6;
/// Zeros closer than this (relative) are duplicates.
const DEDUP: f64 = 1e-8;
/// Nearly-critical zeros closer than this (relative) are one singular zero.
const SINGULAR_MERGE: f64 = 1e-4;
const SINGULAR_MERGE_JACOBIAN: f64 = 1e-3;
/// Nearly-critical zeros up to this (relative) distance apart are also one
/// singular zero when `|f|` stays below `VALLEY_RES` between them.
const VALLEY_MERGE: f64 = 1e-2;
const VALLEY_RES: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ZeroOrientation {
    Preserving,
    Reversing,
    Singular,
}

impl ZeroOrientation {
    pub fn classify(jacobian: f64, tol_singular: f64) -> Self {
        if jacobian > tol_singular {
            Self::Preserving
        } else if jacobian < -tol_singular {
            Self::Reversing
        } else {
            Self::Singular
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Preserving => "preserving",
            Self::Reversing => "reversing",
            Self::Singular => "singular",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZeroRecord {
    pub z: Complex64,
    pub orientation: ZeroOrientation,
    pub jacobian: f64,
    pub residual: f64,
    /// Poincaré index; `None` for a singular zero whose index could not be
    /// computed.
    pub index: Option<i32>,
    /// Face of the critical-curve partition; `None` on the boundary band or
    /// before assignment.
    pub face: Option<usize>,
    /// Number of numerically distinct candidates merged into this record.
    pub merged: usize,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Counts {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "N_plus")]
    pub n_plus: usize,
    #[serde(rename = "N_minus")]
    pub n_minus: usize,
    #[serde(rename = "N_s")]
    pub n_s: usize,
}

impl Counts {
    pub fn of(zeros: &[ZeroRecord]) -> Self {
        let mut c = Counts { n: zeros.len(), ..Default::default() };
        for z in zeros {
            match z.orientation {
                ZeroOrientation::Preserving => c.n_plus += 1,
                ZeroOrientation::Reversing => c.n_minus += 1,
                ZeroOrientation::Singular => c.n_s += 1,
            }
        }
        c
    }
}

/// All zeros of one shifted function.
#[derive(Debug, Clone, Serialize)]
pub struct Census {
    pub eta: Complex64,
    pub zeros: Vec<ZeroRecord>,
    pub counts: Counts,
    /// Polished candidates whose residual is neither clearly zero nor
    /// clearly not.
    pub ambiguous: Vec<Polished>,
    /// `N₊ − N₋ + Σ ind(singular)` required by the argument principle.
    pub expected_balance: i32,
    /// The census satisfies the global argument-principle balance.
    pub consistent: bool,
    /// A multistart Newton search was needed to complete the census.
    pub multistart: bool,
}

impl Census {
    pub fn singular(&self) -> impl Iterator<Item = &ZeroRecord> {
        self.zeros.iter().filter(|z| z.orientation == ZeroOrientation::Singular)
    }

    /// Fills in the face of every zero.
    pub fn assign_faces(&mut self, partition: &RegionPartition) {
        for rec in &mut self.zeros {
            rec.face = partition.face_of(rec.z).face_id();
        }
    }

    /// Counts per face; zeros without a face are skipped.
    pub fn face_counts(&self) -> BTreeMap<usize, Counts> {
        let mut out: BTreeMap<usize, Counts> = BTreeMap::new();
        for rec in &self.zeros {
            if let Some(face) = rec.face {
                let c = out.entry(face).or_default();
                c.n += 1;
                match rec.orientation {
                    ZeroOrientation::Preserving => c.n_plus += 1,
                    ZeroOrientation::Reversing => c.n_minus += 1,
                    ZeroOrientation::Singular => c.n_s += 1,
                }
            }
        }
        out
    }

    pub fn locations(&self) -> Vec<Complex64> {
        self.zeros.iter().map(|z| z.z).collect()
    }
}

/// Winding of `f_η` along a circle enclosing every zero and pole.
///
/// For `r = c z^k + …` with `k ≥ 2` the term `z^k` dominates; for `k = 1`
/// the sign of `|c| − 1` decides between `cz` and `−conj(z)`; otherwise
/// `−conj(z)` dominates.
pub fn far_field_winding(r: &RationalFn) -> i32 {
    let (p, q) = (r.numerator(), r.denominator());
    let (dp, dq) = (p.deg() as i32, q.deg() as i32);
    if dp >= dq + 2 {
        dp - dq
    } else if dp == dq + 1 {
        if (p.leading() / q.leading()).norm() > 1.0 {
            1
        } else {
            -1
        }
    } else {
        -1
    }
}

/// Upper bound `5 deg r − 5` on the number of zeros.
pub fn zero_bound(r: &RationalFn) -> usize {
    5 * r.degree() - 5
}

/// All zeros of `f_η`.
pub fn find_zeros(f: &ShiftedFunction, tol: &Tolerances) -> Result<Census> {
    let r = f.r();
    let poly = elimination_poly(f)?;
    let candidates = if poly.deg() >= 1 {
        all_roots_with(&poly, 1e-12, tol.max_aberth_iterations, tol.max_polish_iterations)?.locations()
    } else {
        Vec::new()
    };
    let mut pool = Pool::default();
    pool.absorb(f, &candidates, tol);

    let expected_balance = far_field_winding(r) + r.denominator().deg() as i32;
    let mut zeros = pool.records(f, tol);
    let mut multistart = false;
    if balance(&zeros) != Some(expected_balance) {
        multistart = true;
        let starts = multistart_points(f, &pool.accepted_locations());
        pool.absorb(f, &starts, tol);
        zeros = pool.records(f, tol);
    }
    let consistent = balance(&zeros) == Some(expected_balance);
    if zeros.len() > zero_bound(r) {
        return Err(Error::Internal(format!(
            "{} zeros found at eta = {}, above the bound 5 deg r - 5 = {}",
            zeros.len(),
            f.eta(),
            zero_bound(r)
        )));
    }
    Ok(Census {
        eta: f.eta(),
        counts: Counts::of(&zeros),
        zeros,
        ambiguous: pool.ambiguous,
        expected_balance,
        consistent,
        multistart,
    })
}

/// `find_zeros` followed by face assignment.
pub fn find_zeros_in(f: &ShiftedFunction, partition: &RegionPartition, tol: &Tolerances) -> Result<Census> {
    let mut census = find_zeros(f, tol)?;
    census.assign_faces(partition);
    Ok(census)
}

fn balance(zeros: &[ZeroRecord]) -> Option<i32> {
    zeros.iter().map(|z| z.index).sum()
}

#[derive(Default)]
struct Pool {
    accepted: Vec<Polished>,
    ambiguous: Vec<Polished>,
}

impl Pool {
    fn accepted_locations(&self) -> Vec<Complex64> {
        self.accepted.iter().map(|p| p.z).collect()
    }

    fn absorb(&mut self, f: &ShiftedFunction, candidates: &[Complex64], tol: &Tolerances) {
        for &z0 in candidates {
            let Ok(p) = newton_polish(f, z0, tol.tol_res, tol.max_polish_iterations, tol.tol_singular) else {
                continue;
            };
            let dup = |q: &Polished| (q.z - p.z).norm() <= DEDUP * (1.0 + p.z.norm());
            if p.converged {
                if let Some(k) = self.accepted.iter().position(dup) {
                    if p.residual < self.accepted[k].residual {
                        self.accepted[k] = p;
                    }
                } else {
                    self.accepted.push(p);
                    self.ambiguous.retain(|q| !dup(q));
                }
            } else if p.residual < AMBIGUOUS_RES * p.scale
                && !self.accepted.iter().any(dup)
                && !self.ambiguous.iter().any(dup)
            {
                self.ambiguous.push(p);
            }
        }
    }

    /// Classified records, with clusters of nearly critical zeros merged into
    /// single singular records.
    fn records(&self, f: &ShiftedFunction, tol: &Tolerances) -> Vec<ZeroRecord> {
        let pts = &self.accepted;
        let n = pts.len();
        let mut cluster: Vec<usize> = (0..n).collect();
        let near_critical = |p: &Polished| p.jacobian.abs() < SINGULAR_MERGE_JACOBIAN;
        for i in 0..n {
            for j in 0..i {
                if !(near_critical(&pts[i]) && near_critical(&pts[j])) {
                    continue;
                }
                let dist = (pts[i].z - pts[j].z).norm();
                let scale = 1.0 + pts[i].z.norm();
                let same = dist < SINGULAR_MERGE * scale
                    || (dist < VALLEY_MERGE * scale && in_one_valley(f, &pts[i], &pts[j]));
                if same {
                    let (a, b) = (find(&mut cluster, i), find(&mut cluster, j));
                    cluster[a.max(b)] = a.min(b);
                }
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for i in 0..n {
            let root = find(&mut cluster, i);
            groups.entry(root).or_default().push(i);
        }
        let mut out = Vec::with_capacity(groups.len());
        let all: Vec<Complex64> = pts.iter().map(|p| p.z).collect();
        for members in groups.values() {
            let best = *members
                .iter()
                .min_by(|&&a, &&b| pts[a].jacobian.abs().total_cmp(&pts[b].jacobian.abs()))
                .unwrap();
            let p = &pts[best];
            let orientation = if members.len() > 1 {
                ZeroOrientation::Singular
            } else {
                ZeroOrientation::classify(p.jacobian, tol.tol_singular)
            };
            let index = match orientation {
                ZeroOrientation::Preserving => Some(1),
                ZeroOrientation::Reversing => Some(-1),
                ZeroOrientation::Singular => {
                    let spread = members.iter().map(|&m| (pts[m].z - p.z).norm()).fold(0.0, f64::max);
                    let others: Vec<Complex64> =
                        (0..n).filter(|k| !members.contains(k)).map(|k| all[k]).collect();
                    let radius = (1e-3 * (1.0 + p.z.norm())).max(10.0 * spread);
                    poincare_index(f, p.z, radius, &others).ok().filter(|i| i.abs() <= 1)
                }
            };
            out.push(ZeroRecord {
                z: p.z,
                orientation,
                jacobian: p.jacobian,
                residual: p.residual,
                index,
                face: None,
                merged: members.len(),
            });
        }
        out.sort_by(|a, b| a.z.re.total_cmp(&b.z.re).then(a.z.im.total_cmp(&b.z.im)));
        out
    }
}

/// `|f|` stays at the residual level along the segment between two
/// polished points. Newton stalls anywhere in the flat valley around a
/// degenerate zero; at a cusp `|f|` grows only cubically along the valley,
/// so stalled points spread over roughly `tol_res^{1/3}`.
fn in_one_valley(f: &ShiftedFunction, a: &Polished, b: &Polished) -> bool {
    let bound = VALLEY_RES * a.scale.max(b.scale);
    (1..16).all(|k| {
        let z = a.z + (b.z - a.z) * (k as f64 / 16.0);
        f.eval(z).is_ok_and(|v| v.norm() < bound)
    })
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

/// Starting points for the multistart fallback: a grid over a box holding
/// the known zeros, poles and the shift, plus rings around each pole.
fn multistart_points(f: &ShiftedFunction, known: &[Complex64]) -> Vec<Complex64> {
    let r = f.r();
    let extent = known
        .iter()
        .copied()
        .chain(r.poles().iter().map(|p| p.location))
        .chain(std::iter::once(f.eta()))
        .map(|z| z.norm())
        .fold(1.0, f64::max);
    let half = 2.0 * extent;
    let m = 48;
    let mut out = Vec::with_capacity(m * m + 48 * r.poles().len());
    for i in 0..m {
        for j in 0..m {
            let x = -half + 2.0 * half * (i as f64 + 0.5) / m as f64;
            let y = -half + 2.0 * half * (j as f64 + 0.5) / m as f64;
            out.push(Complex64::new(x, y));
        }
    }
    for pole in r.poles() {
        for &rad in &[1e-3, 1e-2, 1e-1] {
            for k in 0..16 {
                let angle = std::f64::consts::TAU * (k as f64 + 0.25) / 16.0;
                out.push(pole.location + Complex64::from_polar(rad * (1.0 + pole.location.norm()), angle));
            }
        }
    }
    out
}

/// Poincaré index of `f_η` at `z0`: the winding on a circle around `z0`.
///
/// The radius starts at `radius` and is halved until no point of `others`
/// (other zeros, poles) lies within twice the radius.
pub fn poincare_index(f: &ShiftedFunction, z0: Complex64, radius: f64, others: &[Complex64]) -> Result<i32> {
    let min_radius = 1e-10 * (1.0 + z0.norm());
    let poles: Vec<Complex64> = f.r().poles().iter().map(|p| p.location).collect();
    let mut rho = radius;
    loop {
        let isolated = others.iter().chain(&poles).all(|o| (o - z0).norm() > 2.0 * rho);
        if isolated {
            break;
        }
        rho *= 0.5;
        if rho < min_radius {
            return Err(Error::Isolation(z0));
        }
    }
    Ok(winding(|z| f.eval(z), &ClosedPath::circle(z0, rho))?.rounded)
}

/// Argument principle on a closed curve: `V(f; Γ) = N₊ − N₋ − P` over the
/// interior, with singular zeros contributing their index.
#[derive(Debug, Clone, Serialize)]
pub struct ArgumentPrinciple {
    pub winding: WindingResult,
    pub n_plus: usize,
    pub n_minus: usize,
    /// Sum of indices of singular zeros inside.
    pub singular_index: i32,
    /// Poles inside, counted with multiplicity.
    pub poles: usize,
    /// `N₊ − N₋ + Σ ind(singular) − P`, oriented like the curve.
    pub rhs: i32,
    pub holds: bool,
}

pub fn verify_argument_principle(f: &ShiftedFunction, census: &Census, path: &ClosedPath) -> Result<ArgumentPrinciple> {
    let near = |z: Complex64| match path {
        ClosedPath::Circle { center, radius } => ((z - center).norm() - radius).abs() < 1e-9 * (1.0 + radius),
        ClosedPath::Polyline { points } => {
            crate::geometry::polyline_distance(z, points) < 1e-9 * (1.0 + z.norm())
        }
    };
    for rec in &census.zeros {
        if near(rec.z) {
            return Err(Error::Precondition(format!("zero {} lies on the curve", rec.z)));
        }
    }
    for pole in f.r().poles() {
        if near(pole.location) {
            return Err(Error::Precondition(format!("pole {} lies on the curve", pole.location)));
        }
    }
    let w = winding(|z| f.eval(z), path)?;
    let mut n_plus = 0;
    let mut n_minus = 0;
    let mut singular_index = 0;
    for rec in census.zeros.iter().filter(|r| path.contains(r.z)) {
        match rec.orientation {
            ZeroOrientation::Preserving => n_plus += 1,
            ZeroOrientation::Reversing => n_minus += 1,
            ZeroOrientation::Singular => match rec.index {
                Some(i) => singular_index += i,
                None => return Err(Error::Precondition(format!("singular zero {} without index inside the curve", rec.z))),
            },
        }
    }
    let poles: usize =
        f.r().poles().iter().filter(|p| path.contains(p.location)).map(|p| p.multiplicity).sum();
    let rhs = path.orientation() * (n_plus as i32 - n_minus as i32 + singular_index - poles as i32);
    Ok(ArgumentPrinciple { winding: w, n_plus, n_minus, singular_index, poles, rhs, holds: w.rounded == rhs })
}
