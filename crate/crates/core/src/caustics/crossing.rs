use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Serialize;

use super::{LocalModel, PointKind};
use crate::geometry::{cross, point_segment_distance, segment_intersection};
use crate::critical::{project, Orientation};
use crate::structure::CriticalStructure;
use crate::{Error, Result};

/// Intersection angles below this are flagged unreliable.
const ANGLE_TOL: f64 = 1e-3;
/// Crossings within this caustic arclength of a cusp image count as cusp
/// crossings.
const CUSP_ARCLENGTH: f64 = 1e-3;
/// Below this modulus of the caustic tangent the crossing side is read from
/// the cusp axis.
const CUSP_TANGENT: f64 = 1e-6;

/// Zero-count change predicted for a crossing in the direction of travel.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PredictedDelta {
    pub total: i32,
    pub plus: i32,
    pub minus: i32,
    /// Change per face of the critical-curve partition.
    pub faces: BTreeMap<usize, i32>,
}

/// Zero-count change measured from censuses on both sides of a crossing.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ObservedDelta {
    pub total: i32,
    pub plus: i32,
    pub minus: i32,
    pub faces: BTreeMap<usize, i32>,
    /// Branch bits `(b₊, b₋)` read off the on-caustic census (cusps only).
    pub b_plus: Option<i32>,
    pub b_minus: Option<i32>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CrossingEvent {
    /// Index of the path segment.
    pub segment: usize,
    /// Parameter along the segment.
    pub t: f64,
    pub point: Complex64,
    pub caustic_id: usize,
    /// Interpolated critical preimage of the crossing point.
    pub preimage: Complex64,
    pub preimage_index: usize,
    pub kind: PointKind,
    /// `+1` when moving towards the side that gains zeros.
    pub direction: i32,
    /// Angle between path and caustic, in `[0, π/2]`.
    pub angle: f64,
    pub reliable: bool,
    pub phi: f64,
    pub d: Complex64,
    pub open_direction: Complex64,
    /// `sign(Im(d⁻¹))` for cusp events.
    pub im_inverse_sign: Option<i32>,
    /// Sense-preserving and sense-reversing faces adjacent to the preimage.
    pub face_plus: usize,
    pub face_minus: usize,
    /// Number of events sharing this crossing point (multiple folds).
    pub multiplicity: usize,
    pub predicted: PredictedDelta,
    pub observed: Option<ObservedDelta>,
}

impl CrossingEvent {
    /// Position along the whole path, `segment + t`.
    pub fn path_parameter(&self) -> f64 {
        self.segment as f64 + self.t
    }
}

/// All transversal crossings of a polygonal shift path with the caustics,
/// ordered along the path.
pub fn path_crossings(structure: &CriticalStructure, path: &[Complex64]) -> Result<Vec<CrossingEvent>> {
    if path.len() < 2 {
        return Err(Error::InvalidInput("path needs at least two points".into()));
    }
    let boundary = structure.tol.boundary;
    for &end in [path[0], path[path.len() - 1]].iter() {
        for caustic in &structure.caustics {
            let pts = caustic.locations();
            let n = pts.len();
            let hit = (0..n).any(|i| point_segment_distance(end, pts[i], pts[(i + 1) % n]).0 < boundary * (1.0 + end.norm()));
            if hit {
                return Err(Error::EndpointOnCaustic(end));
            }
        }
    }

    let mut events = Vec::new();
    for (segment, w) in path.windows(2).enumerate() {
        let v = w[1] - w[0];
        if v.norm() == 0.0 {
            continue;
        }
        for caustic in &structure.caustics {
            let curve = &structure.curves[caustic.source_curve_id];
            let n = caustic.len();
            let arclength = cumulative_arclength(&caustic.locations());
            for i in 0..n {
                let j = (i + 1) % n;
                let (a, b) = (caustic.points[i].w, caustic.points[j].w);
                let Some((t, u)) = segment_intersection(w[0], w[1], a, b) else { continue };
                let s = b - a;
                let angle = (cross(v, s) / (v.norm() * s.norm())).abs().min(1.0).asin();
                let za = curve.points[i].z;
                let zb = curve.points[j].z;
                let chord = za + (zb - za) * u;
                // back onto |r′| = 1 at the same argument of r′
                let theta = structure.r.derivative_at(chord)?.arg();
                let preimage = project(&structure.r, chord, theta, 20).unwrap_or(chord);
                let at = arclength[i] + u * s.norm();
                let near_cusp = curve.cusp_indices.iter().any(|&c| {
                    let dist = (at - arclength[c]).abs();
                    dist.min(arclength[n] - dist) < CUSP_ARCLENGTH
                });
                let place = Placement { segment, t, point: w[0] + v * t, preimage_index: i, angle };
                events.push(crossing_event(structure, caustic.caustic_id, preimage, v, place, near_cusp)?);
            }
        }
    }
    events.sort_by(|a, b| a.path_parameter().total_cmp(&b.path_parameter()));
    let scale = path.windows(2).map(|w| (w[1] - w[0]).norm()).fold(0.0, f64::max);
    for k in 0..events.len() {
        let here = events[k].point;
        events[k].multiplicity = events.iter().filter(|e| (e.point - here).norm() <= 1e-9 * (1.0 + scale)).count();
    }
    Ok(events)
}

/// Where a crossing happens along a path.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Placement {
    pub segment: usize,
    pub t: f64,
    pub point: Complex64,
    pub preimage_index: usize,
    pub angle: f64,
}

/// Crossing event for a path moving with velocity `v` through the image of
/// the critical point `preimage` on caustic `caustic_id`.
pub(crate) fn crossing_event(
    structure: &CriticalStructure,
    caustic_id: usize,
    preimage: Complex64,
    v: Complex64,
    place: Placement,
    force_cusp: bool,
) -> Result<CrossingEvent> {
    let model = LocalModel::at(&structure.r, preimage, &structure.tol)?;
    let kind = if force_cusp || model.kind == PointKind::Cusp { PointKind::Cusp } else { PointKind::Fold };
    // the open side lies to the right of the caustic tangent r′h − conj(h);
    // at the cusp point itself the tangent vanishes and the cusp axis
    // decides
    let tangent = model.caustic_tangent;
    let direction = if tangent.norm() > CUSP_TANGENT {
        sign(cross(v, tangent))
    } else {
        let axis = model.cusp_axis(&structure.r)?;
        sign((axis.conj() * v).re)
    };
    let (inner, outer) = structure.partition.adjacent_faces(caustic_id);
    let (face_plus, face_minus) = if structure.partition.face(inner).orientation == Orientation::Preserving {
        (inner, outer)
    } else {
        (outer, inner)
    };
    let mut faces = BTreeMap::new();
    faces.insert(face_plus, direction);
    *faces.entry(face_minus).or_insert(0) += direction;
    Ok(CrossingEvent {
        segment: place.segment,
        t: place.t,
        point: place.point,
        caustic_id,
        preimage,
        preimage_index: place.preimage_index,
        kind,
        direction,
        angle: place.angle,
        reliable: place.angle >= ANGLE_TOL && direction != 0,
        phi: model.phi,
        d: model.d,
        open_direction: model.open_direction,
        im_inverse_sign: (kind == PointKind::Cusp).then(|| model.im_inverse_sign()),
        face_plus,
        face_minus,
        multiplicity: 1,
        predicted: PredictedDelta { total: 2 * direction, plus: direction, minus: direction, faces },
        observed: None,
    })
}

fn sign(x: f64) -> i32 {
    if x > 0.0 {
        1
    } else if x < 0.0 {
        -1
    } else {
        0
    }
}

/// Cumulative arclength of a closed polyline; the last entry is the perimeter.
fn cumulative_arclength(pts: &[Complex64]) -> Vec<f64> {
    let n = pts.len();
    let mut acc = Vec::with_capacity(n + 1);
    acc.push(0.0);
    for i in 0..n {
        acc.push(acc[i] + (pts[(i + 1) % n] - pts[i]).norm());
    }
    acc
}
