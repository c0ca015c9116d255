use std::collections::{BTreeMap, BTreeSet};

use num_complex::Complex64;
use serde::Serialize;

use super::{census_at, Verdict};
use crate::caustics::{classify_point, crossing_event, path_crossings, CrossingEvent, LocalModel, ObservedDelta, Placement, PointKind};
use crate::critical::project;
use crate::geometry::{point_segment_distance, polyline_distance};
use crate::structure::CriticalStructure;
use crate::zeros::{Census, Counts, ZeroRecord};
use crate::{Error, Result};

/// Counts per face at one shift.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FaceTable {
    pub eta: Complex64,
    pub counts: Counts,
    pub faces: BTreeMap<usize, Counts>,
    pub consistent: bool,
}

impl FaceTable {
    fn from_census(c: &Census) -> Self {
        Self { eta: c.eta, counts: c.counts, faces: c.face_counts(), consistent: c.consistent }
    }

    fn same_counts(&self, other: &Self) -> bool {
        self.counts == other.counts && self.faces == other.faces
    }
}

/// Census at a caustic point.
#[derive(Debug, Clone, Serialize)]
pub struct OnCaustic {
    pub eta: Complex64,
    pub counts: Counts,
    /// Singular records near the critical preimage.
    pub singular: Vec<ZeroRecord>,
    pub faces: BTreeMap<usize, Counts>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CrossingLedger {
    pub path: Vec<Complex64>,
    pub events: Vec<CrossingEvent>,
    /// `tables[k]` holds the counts before the k-th group of coincident
    /// events and `tables[k + 1]` after it.
    pub tables: Vec<FaceTable>,
    /// One verdict per event.
    pub verdicts: Vec<Verdict>,
    pub on_caustic: Option<OnCaustic>,
    /// Distance of the path endpoints from the caustic point, for crossing
    /// experiments.
    pub shift: Option<f64>,
    /// Counts near the critical preimage before and after a cusp crossing.
    pub local_before: Option<Counts>,
    pub local_after: Option<Counts>,
    pub verdict: Verdict,
    pub notes: Vec<String>,
}

fn delta(before: &FaceTable, after: &FaceTable) -> ObservedDelta {
    let keys: BTreeSet<usize> = before.faces.keys().chain(after.faces.keys()).copied().collect();
    let mut faces = BTreeMap::new();
    for k in keys {
        let a = after.faces.get(&k).map_or(0, |c| c.n as i32);
        let b = before.faces.get(&k).map_or(0, |c| c.n as i32);
        if a != b {
            faces.insert(k, a - b);
        }
    }
    ObservedDelta {
        total: after.counts.n as i32 - before.counts.n as i32,
        plus: after.counts.n_plus as i32 - before.counts.n_plus as i32,
        minus: after.counts.n_minus as i32 - before.counts.n_minus as i32,
        faces,
        b_plus: None,
        b_minus: None,
    }
}

/// Sum of the predicted deltas of a group of events, zero entries dropped.
fn predicted_sum(events: &[&CrossingEvent]) -> (i32, i32, i32, BTreeMap<usize, i32>) {
    let mut faces: BTreeMap<usize, i32> = BTreeMap::new();
    let (mut total, mut plus, mut minus) = (0, 0, 0);
    for e in events {
        total += e.predicted.total;
        plus += e.predicted.plus;
        minus += e.predicted.minus;
        for (&k, &v) in &e.predicted.faces {
            *faces.entry(k).or_insert(0) += v;
        }
    }
    faces.retain(|_, v| *v != 0);
    (total, plus, minus, faces)
}

fn matches(events: &[&CrossingEvent], observed: &ObservedDelta) -> bool {
    let (total, plus, minus, faces) = predicted_sum(events);
    observed.total == total && observed.plus == plus && observed.minus == minus && observed.faces == faces
}

fn point_at(path: &[Complex64], param: f64) -> Complex64 {
    let last = path.len() - 2;
    let seg = (param.floor() as usize).min(last);
    let t = param - seg as f64;
    path[seg] + (path[seg + 1] - path[seg]) * t
}

/// Crossings along a polygonal shift path with censuses between them.
///
/// Each interval between consecutive crossing points is sampled at 8
/// interior shifts; the face counts must agree at all of them, and the
/// change from one interval to the next must equal the predicted delta of
/// the crossings in between.
pub fn path_ledger(structure: &CriticalStructure, path: &[Complex64]) -> Result<CrossingLedger> {
    let events = path_crossings(structure, path)?;
    let end = (path.len() - 1) as f64;
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (i, e) in events.iter().enumerate() {
        match groups.last_mut() {
            Some(g) if (e.path_parameter() - events[g[0]].path_parameter()).abs() < 1e-9 => g.push(i),
            _ => groups.push(vec![i]),
        }
    }
    let mut cuts = vec![0.0];
    cuts.extend(groups.iter().map(|g| events[g[0]].path_parameter()));
    cuts.push(end);

    let mut notes = Vec::new();
    let mut tables = Vec::with_capacity(cuts.len() - 1);
    let mut constant = Vec::with_capacity(cuts.len() - 1);
    for w in cuts.windows(2) {
        let mut first: Option<FaceTable> = None;
        let mut same = true;
        for k in 0..8 {
            let param = w[0] + (w[1] - w[0]) * (k as f64 + 1.0) / 9.0;
            let table = FaceTable::from_census(&census_at(structure, point_at(path, param))?);
            match &first {
                None => first = Some(table),
                Some(f) => {
                    if !f.same_counts(&table) {
                        same = false;
                        notes.push(format!("counts change between crossings near {}", table.eta));
                    }
                }
            }
        }
        tables.push(first.expect("eight samples"));
        constant.push(same);
    }

    let mut events = events;
    let mut verdicts = vec![Verdict::Pass; events.len()];
    for (g, members) in groups.iter().enumerate() {
        let observed = delta(&tables[g], &tables[g + 1]);
        let refs: Vec<&CrossingEvent> = members.iter().map(|&i| &events[i]).collect();
        let ok = matches(&refs, &observed);
        let trusted = constant[g]
            && constant[g + 1]
            && tables[g].consistent
            && tables[g + 1].consistent
            && refs.iter().all(|e| e.reliable);
        let verdict = if ok && constant[g] && constant[g + 1] {
            Verdict::Pass
        } else if trusted {
            Verdict::Fail
        } else {
            Verdict::Inconclusive
        };
        if !ok {
            notes.push(format!("crossing at {} observed {:?}", refs[0].point, observed));
        }
        for &i in members {
            events[i].observed = Some(observed.clone());
            verdicts[i] = verdict;
        }
    }
    let mut verdict = Verdict::all(verdicts.iter().copied());
    if constant.iter().any(|c| !c) && verdict == Verdict::Pass {
        verdict = Verdict::Fail;
    }
    Ok(CrossingLedger {
        path: path.to_vec(),
        events,
        tables,
        verdicts,
        on_caustic: None,
        shift: None,
        local_before: None,
        local_after: None,
        verdict,
        notes,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct PathInvariance {
    pub eta1: Complex64,
    pub eta2: Complex64,
    pub before: FaceTable,
    pub after: FaceTable,
    pub verdict: Verdict,
}

/// Per-face counts at both ends of a path that avoids the caustics.
/// Without an explicit path the straight segment is used.
pub fn path_invariance_check(
    structure: &CriticalStructure,
    eta1: Complex64,
    eta2: Complex64,
    path: Option<&[Complex64]>,
) -> Result<PathInvariance> {
    let straight = [eta1, eta2];
    let path = path.unwrap_or(&straight);
    if path.len() < 2 || path[0] != eta1 || path[path.len() - 1] != eta2 {
        return Err(Error::InvalidInput("path must run from eta1 to eta2".into()));
    }
    let crossings = path_crossings(structure, path)?;
    if !crossings.is_empty() {
        let list: Vec<String> = crossings.iter().map(|e| format!("{}", e.point)).collect();
        return Err(Error::Precondition(format!("path crosses caustics at {}", list.join(", "))));
    }
    let before = FaceTable::from_census(&census_at(structure, eta1)?);
    let after = FaceTable::from_census(&census_at(structure, eta2)?);
    let verdict = if before.same_counts(&after) {
        Verdict::Pass
    } else if before.consistent && after.consistent {
        Verdict::Fail
    } else {
        Verdict::Inconclusive
    };
    Ok(PathInvariance { eta1, eta2, before, after, verdict })
}

/// Critical point on the traced curves closest to `z0`, projected back
/// onto `|r′| = 1`, with its curve and nearest sample index.
fn locate_on_curves(structure: &CriticalStructure, z0: Complex64) -> Result<(Complex64, usize, usize)> {
    let (curve_id, dist) = structure
        .curves
        .iter()
        .map(|c| polyline_distance(z0, &c.locations()))
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .ok_or_else(|| Error::Precondition("no critical curves".into()))?;
    let curve = &structure.curves[curve_id];
    if dist > 10.0 * curve.max_segment() {
        return Err(Error::Precondition(format!("{z0} is not on a critical curve (distance {dist:e})")));
    }
    let theta = structure.r.derivative_at(z0)?.arg();
    let z = project(&structure.r, z0, theta, 50)?;
    let index = (0..curve.len())
        .min_by(|&a, &b| (curve.points[a].z - z).norm().total_cmp(&(curve.points[b].z - z).norm()))
        .unwrap_or(0);
    Ok((z, curve_id, index))
}

/// Distance from `w0` to caustic features other than the arc through it
/// on caustic `own`: cusp images, other caustics, and parts of `own` that
/// are close in the plane but far along the caustic.
pub(crate) fn feature_scale(
    structure: &CriticalStructure,
    w0: Complex64,
    own: usize,
    exclude_cusp: Option<Complex64>,
) -> f64 {
    let mut scale = f64::INFINITY;
    for caustic in &structure.caustics {
        let (lo, hi) = caustic.bbox;
        scale = scale.min((hi - lo).norm());
        for cusp in &caustic.cusp_points {
            if exclude_cusp.is_some_and(|z| (z - cusp.z).norm() < 1e-6) {
                continue;
            }
            scale = scale.min((cusp.w - w0).norm());
        }
        let pts = caustic.locations();
        let n = pts.len();
        if caustic.caustic_id != own {
            for i in 0..n {
                scale = scale.min(point_segment_distance(w0, pts[i], pts[(i + 1) % n]).0);
            }
            continue;
        }
        let Some(start) = (0..n).min_by(|&a, &b| (pts[a] - w0).norm().total_cmp(&(pts[b] - w0).norm())) else {
            continue;
        };
        // arclength from the nearest sample, both ways around
        let mut forward = vec![0.0; n];
        for step in 1..n {
            let i = (start + step) % n;
            let prev = (start + step - 1) % n;
            forward[i] = forward[prev] + (pts[i] - pts[prev]).norm();
        }
        let perimeter = forward[(start + n - 1) % n] + (pts[start] - pts[(start + n - 1) % n]).norm();
        for i in 0..n {
            let j = (i + 1) % n;
            let (planar, _) = point_segment_distance(w0, pts[i], pts[j]);
            let along = forward[i].min(perimeter - forward[i]).min(forward[j].min(perimeter - forward[j]));
            if along > 3.0 * planar + 1e-12 {
                scale = scale.min(planar);
            }
        }
    }
    scale
}

/// Shrinks the crossing shift until the censuses on both sides agree at two
/// consecutive magnitudes. Returns the shift and both censuses.
fn stabilized_pair(
    structure: &CriticalStructure,
    w0: Complex64,
    direction: Complex64,
    scale: f64,
) -> Result<Option<(f64, Census, Census)>> {
    let mut s = 1e-2 * scale;
    let floor = 1e-9 * (1.0 + w0.norm());
    let mut previous: Option<(FaceTable, FaceTable)> = None;
    while s > floor {
        let before = census_at(structure, w0 - direction * s)?;
        let after = census_at(structure, w0 + direction * s)?;
        let tables = (FaceTable::from_census(&before), FaceTable::from_census(&after));
        let usable = before.consistent && after.consistent && before.counts.n_s == 0 && after.counts.n_s == 0;
        if usable {
            if let Some((pb, pa)) = &previous {
                if pb.same_counts(&tables.0) && pa.same_counts(&tables.1) {
                    return Ok(Some((s, before, after)));
                }
            }
            previous = Some(tables);
        } else {
            previous = None;
        }
        s *= 0.5;
    }
    Ok(None)
}

fn local_counts(census: &Census, z0: Complex64, radius: f64) -> Counts {
    let near: Vec<ZeroRecord> = census.zeros.iter().filter(|z| (z.z - z0).norm() < radius).cloned().collect();
    Counts::of(&near)
}

fn inconclusive(path: Vec<Complex64>, note: String) -> CrossingLedger {
    CrossingLedger {
        path,
        events: Vec::new(),
        tables: Vec::new(),
        verdicts: Vec::new(),
        on_caustic: None,
        shift: None,
        local_before: None,
        local_after: None,
        verdict: Verdict::Inconclusive,
        notes: vec![note],
    }
}

fn on_caustic_census(structure: &CriticalStructure, w0: Complex64, z0: Complex64, radius: f64) -> Result<OnCaustic> {
    let census = census_at(structure, w0)?;
    let singular = census
        .singular()
        .filter(|rec| (rec.z - z0).norm() < radius)
        .cloned()
        .collect();
    Ok(OnCaustic { eta: w0, counts: census.counts, singular, faces: census.face_counts() })
}

/// Crossing of the caustic at the fold image of `z0`, normal to the caustic
/// towards the side that gains zeros.
pub fn fold_crossing_experiment(structure: &CriticalStructure, z0: Complex64) -> Result<CrossingLedger> {
    let (z0, curve_id, index) = locate_on_curves(structure, z0)?;
    let r = &structure.r;
    let model = LocalModel::at(r, z0, &structure.tol)?;
    if model.kind != PointKind::Fold {
        return Err(Error::Precondition(format!("{z0} is a cusp preimage, not a fold")));
    }
    let w0 = r.eval(z0)? - z0.conj();
    // the open side lies to the right of the caustic tangent
    let normal = -Complex64::i() * model.caustic_tangent / model.caustic_tangent.norm();
    let classification = classify_point(r, z0, &structure.curves, &structure.caustics, &structure.tol)?;
    let mut notes = Vec::new();
    if classification.preimages.len() > 1 {
        notes.push(format!("multiple fold point with {} critical preimages", classification.preimages.len()));
    }
    let scale = feature_scale(structure, w0, curve_id, None);
    let Some((s, before, after)) = stabilized_pair(structure, w0, normal, scale)? else {
        return Ok(inconclusive(vec![w0 - normal * scale * 1e-2, w0 + normal * scale * 1e-2], format!(
            "censuses did not stabilize for shifts below {:e}",
            1e-2 * scale
        )));
    };
    let path = vec![w0 - normal * s, w0 + normal * s];
    let place = Placement { segment: 0, t: 0.5, point: w0, preimage_index: index, angle: std::f64::consts::FRAC_PI_2 };
    let mut events = vec![crossing_event(structure, curve_id, z0, normal, place, false)?];
    for &other in classification.preimages.iter().skip(1) {
        let (zo, co, io) = locate_on_curves(structure, other)?;
        events.push(crossing_event(structure, co, zo, normal, Placement { preimage_index: io, ..place }, false)?);
    }
    let multiplicity = events.len();
    for e in &mut events {
        e.multiplicity = multiplicity;
    }
    let tables = vec![FaceTable::from_census(&before), FaceTable::from_census(&after)];
    let observed = delta(&tables[0], &tables[1]);
    let refs: Vec<&CrossingEvent> = events.iter().collect();
    let deltas_ok = matches(&refs, &observed);
    if !deltas_ok {
        notes.push(format!("observed {observed:?} differs from the prediction"));
    }
    let fold_shape = observed.total.abs() == 2 * multiplicity as i32 && observed.plus == observed.minus;

    let on = on_caustic_census(structure, w0, z0, (1e-3 * (1.0 + z0.norm())).max(10.0 * s.sqrt()))?;
    let singular_ok = on.singular.len() == 1 && on.counts.n_s == multiplicity && on.singular[0].index == Some(0);
    if !singular_ok {
        notes.push(format!(
            "on-caustic census has {} singular records near z0 ({} total), indices {:?}",
            on.singular.len(),
            on.counts.n_s,
            on.singular.iter().map(|z| z.index).collect::<Vec<_>>()
        ));
    }
    let verdict = if deltas_ok && fold_shape && singular_ok { Verdict::Pass } else { Verdict::Fail };
    for e in &mut events {
        e.observed = Some(observed.clone());
    }
    Ok(CrossingLedger {
        path,
        verdicts: vec![verdict; events.len()],
        events,
        tables,
        on_caustic: Some(on),
        shift: Some(s),
        local_before: None,
        local_after: None,
        verdict,
        notes,
    })
}

/// Crossing through the cusp image of `z0` along the cusp axis, from
/// outside into the cusp.
pub fn cusp_crossing_experiment(structure: &CriticalStructure, z0: Complex64) -> Result<CrossingLedger> {
    let (z0, curve_id, index) = locate_on_curves(structure, z0)?;
    let r = &structure.r;
    let model = LocalModel::at(r, z0, &structure.tol)?;
    if model.kind != PointKind::Cusp {
        return Err(Error::Precondition(format!(
            "{z0} is not a cusp preimage (cusp functional {:e})",
            model.cusp_value
        )));
    }
    let w0 = r.eval(z0)? - z0.conj();
    let axis = model.cusp_axis(r)?;
    let classification = classify_point(r, z0, &structure.curves, &structure.caustics, &structure.tol)?;
    if classification.preimages.len() > 1 {
        return Ok(inconclusive(vec![w0], format!(
            "cusp image has {} critical preimages; crossing direction is ambiguous",
            classification.preimages.len()
        )));
    }
    let scale = feature_scale(structure, w0, curve_id, Some(z0));
    let Some((s, before, after)) = stabilized_pair(structure, w0, axis, scale)? else {
        return Ok(inconclusive(vec![w0], format!("censuses did not stabilize for shifts below {:e}", 1e-2 * scale)));
    };
    let path = vec![w0 - axis * s, w0 + axis * s];
    let place = Placement { segment: 0, t: 0.5, point: w0, preimage_index: index, angle: std::f64::consts::FRAC_PI_2 };
    let mut event = crossing_event(structure, curve_id, z0, axis, place, true)?;
    let tables = vec![FaceTable::from_census(&before), FaceTable::from_census(&after)];
    let mut observed = delta(&tables[0], &tables[1]);
    let mut notes = Vec::new();
    let deltas_ok = matches(&[&event], &observed);
    if !deltas_ok {
        notes.push(format!("observed {observed:?} differs from the prediction"));
    }

    let on = on_caustic_census(structure, w0, z0, (1e-3 * (1.0 + z0.norm())).max(10.0 * s.sqrt()))?;
    let singular_ok =
        on.singular.len() == 1 && on.counts.n_s == 1 && matches!(on.singular[0].index, Some(1) | Some(-1));
    if !singular_ok {
        notes.push(format!(
            "on-caustic census has {} singular records near z0 ({} total), indices {:?}",
            on.singular.len(),
            on.counts.n_s,
            on.singular.iter().map(|z| z.index).collect::<Vec<_>>()
        ));
    }
    // b± is what the zero near z0 before the crossing contributes to A±
    let face_count = |t: &BTreeMap<usize, Counts>, f: usize| t.get(&f).map_or(0, |c| c.n as i32);
    let b_plus = face_count(&tables[0].faces, event.face_plus) - face_count(&on.faces, event.face_plus);
    let b_minus = face_count(&tables[0].faces, event.face_minus) - face_count(&on.faces, event.face_minus);
    observed.b_plus = Some(b_plus);
    observed.b_minus = Some(b_minus);
    let bits_ok = b_plus + b_minus == 1 && (0..=1).contains(&b_plus) && (0..=1).contains(&b_minus);
    if !bits_ok {
        notes.push(format!("branch bits (b+, b-) = ({b_plus}, {b_minus}) do not sum to 1"));
    }

    let singular_z = on.singular.first().map_or(z0, |z| z.z);
    let others = after
        .zeros
        .iter()
        .map(|z| (z.z - singular_z).norm())
        .filter(|&d| d > 100.0 * s.sqrt())
        .fold(f64::INFINITY, f64::min);
    let local_radius = (0.5 * others).min(1e-1 * (1.0 + z0.norm()));
    let local_before = local_counts(&before, singular_z, local_radius);
    let local_after = local_counts(&after, singular_z, local_radius);

    let verdict = if deltas_ok && singular_ok && bits_ok { Verdict::Pass } else { Verdict::Fail };
    event.observed = Some(observed);
    Ok(CrossingLedger {
        path,
        events: vec![event],
        tables,
        verdicts: vec![verdict],
        on_caustic: Some(on),
        shift: Some(s),
        local_before: Some(local_before),
        local_after: Some(local_after),
        verdict,
        notes,
    })
}
