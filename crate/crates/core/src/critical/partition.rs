use std::collections::BTreeSet;

use num_complex::Complex64;
use serde::Serialize;

use super::CriticalCurve;
use crate::algebra::RationalFn;
use crate::geometry::{point_in_polygon, polyline_distance, signed_area};
use crate::{Error, Result, Tolerances};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Orientation {
    #[serde(rename = "+")]
    Preserving,
    #[serde(rename = "-")]
    Reversing,
}

impl Orientation {
    pub fn from_jacobian(j: f64) -> Self {
        if j > 0.0 {
            Self::Preserving
        } else {
            Self::Reversing
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Self::Preserving => Self::Reversing,
            Self::Reversing => Self::Preserving,
        }
    }
}

/// A connected component of the complement of the critical curves.
#[derive(Debug, Clone, Serialize)]
pub struct Face {
    pub face_id: usize,
    pub orientation: Orientation,
    /// Curves whose interior contains the face.
    pub signature: BTreeSet<usize>,
    pub unbounded: bool,
    /// Curve bounding the face from outside (`None` for the unbounded face).
    pub outer_curve: Option<usize>,
    /// Interior point validated through [`RegionPartition::face_of`].
    pub representative: Complex64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FaceLocation {
    Face { face_id: usize },
    Boundary { curve_id: usize },
}

impl FaceLocation {
    pub fn face_id(self) -> Option<usize> {
        match self {
            Self::Face { face_id } => Some(face_id),
            Self::Boundary { .. } => None,
        }
    }
}

/// The faces `𝒜 = {A_1, …, A_m}` cut out by the critical curves.
///
/// Face 0 is the unbounded face `A_∞`; face `c + 1` is the part of the
/// interior of curve `c` outside every curve nested in it.
#[derive(Debug, Clone)]
pub struct RegionPartition {
    pub faces: Vec<Face>,
    pub curves: Vec<CriticalCurve>,
    r: RationalFn,
    polylines: Vec<Vec<Complex64>>,
    /// Whether the sense-preserving side of each curve is its interior.
    preserving_inside: Vec<bool>,
    /// Distance below which the side of a curve is read from the Jacobian
    /// sign instead of the polygon test.
    bands: Vec<f64>,
    boundary: f64,
    tol_singular: f64,
}

pub const UNBOUNDED_FACE: usize = 0;

/// Builds the face partition from traced curves.
pub fn build_partition(r: &RationalFn, curves: &[CriticalCurve], tol: &Tolerances) -> Result<RegionPartition> {
    let polylines: Vec<Vec<Complex64>> = curves.iter().map(|c| c.locations()).collect();
    // traversal keeps the sense-preserving side on the left, which is the
    // interior for counter-clockwise curves
    let preserving_inside: Vec<bool> = polylines.iter().map(|p| signed_area(p) > 0.0).collect();
    let bands: Vec<f64> = curves.iter().map(|c| 4.0 * c.max_segment()).collect();
    let ancestors: Vec<BTreeSet<usize>> = (0..curves.len())
        .map(|i| {
            (0..curves.len())
                .filter(|&j| j != i && point_in_polygon(polylines[i][0], &polylines[j]))
                .collect()
        })
        .collect();

    let mut partition = RegionPartition {
        faces: Vec::with_capacity(curves.len() + 1),
        curves: curves.to_vec(),
        r: r.clone(),
        polylines,
        preserving_inside,
        bands,
        boundary: tol.boundary,
        tol_singular: tol.tol_singular,
    };

    let unbounded_orientation = match (0..curves.len()).find(|&i| ancestors[i].is_empty()) {
        Some(top) => orientation_inside(partition.preserving_inside[top]).flip(),
        None => {
            let far = 10.0 * (1.0 + r.poles().iter().map(|p| p.location.norm()).fold(0.0, f64::max));
            Orientation::from_jacobian(r.derivative_at(Complex64::new(far, 0.0))?.norm_sqr() - 1.0)
        }
    };
    partition.faces.push(Face {
        face_id: UNBOUNDED_FACE,
        orientation: unbounded_orientation,
        signature: BTreeSet::new(),
        unbounded: true,
        outer_curve: None,
        representative: Complex64::new(0.0, 0.0),
    });
    for (i, anc) in ancestors.iter().enumerate() {
        let mut signature = anc.clone();
        signature.insert(i);
        partition.faces.push(Face {
            face_id: i + 1,
            orientation: orientation_inside(partition.preserving_inside[i]),
            signature,
            unbounded: false,
            outer_curve: Some(i),
            representative: Complex64::new(0.0, 0.0),
        });
    }
    for face_id in 0..partition.faces.len() {
        let rep = partition.find_representative(face_id)?;
        partition.faces[face_id].representative = rep;
    }
    Ok(partition)
}

fn orientation_inside(preserving_inside: bool) -> Orientation {
    if preserving_inside {
        Orientation::Preserving
    } else {
        Orientation::Reversing
    }
}

impl RegionPartition {
    pub fn unbounded_face(&self) -> &Face {
        &self.faces[UNBOUNDED_FACE]
    }

    pub fn face(&self, id: usize) -> &Face {
        &self.faces[id]
    }

    /// Face containing `z`, or the curve `z` lies on.
    ///
    /// Inclusion in each curve is decided by the even-odd polygon test; close
    /// to a curve, where the polyline chord deviates from the true curve, the
    /// sign of the Jacobian decides instead.
    pub fn face_of(&self, z: Complex64) -> FaceLocation {
        let mut signature = BTreeSet::new();
        for (i, poly) in self.polylines.iter().enumerate() {
            let dist = polyline_distance(z, poly);
            if dist < self.boundary {
                return FaceLocation::Boundary { curve_id: i };
            }
            let inside = if dist < self.bands[i] {
                let jac = match self.r.derivative_at(z) {
                    Ok(d) => d.norm_sqr() - 1.0,
                    Err(_) => f64::INFINITY,
                };
                if jac.abs() < self.tol_singular {
                    return FaceLocation::Boundary { curve_id: i };
                }
                (jac > 0.0) == self.preserving_inside[i]
            } else {
                point_in_polygon(z, poly)
            };
            if inside {
                signature.insert(i);
            }
        }
        if let Some(face) = self.faces.iter().find(|f| f.signature == signature) {
            return FaceLocation::Face { face_id: face.face_id };
        }
        // inconsistent nesting can only come from a point in a sliver; fall
        // back to the innermost curve
        let deepest = signature
            .iter()
            .max_by_key(|&&c| self.faces[c + 1].signature.len())
            .map_or(UNBOUNDED_FACE, |&c| c + 1);
        FaceLocation::Face { face_id: deepest }
    }

    /// Faces on either side of a curve: `(inner, outer)`.
    pub fn adjacent_faces(&self, curve_id: usize) -> (usize, usize) {
        let inner = curve_id + 1;
        let sig = &self.faces[inner].signature;
        let outer = self
            .faces
            .iter()
            .find(|f| f.signature.len() + 1 == sig.len() && f.signature.is_subset(sig))
            .map_or(UNBOUNDED_FACE, |f| f.face_id);
        (inner, outer)
    }

    fn find_representative(&self, face_id: usize) -> Result<Complex64> {
        let (curve_id, inward) = match self.faces[face_id].outer_curve {
            Some(c) => (c, true),
            None => match (0..self.curves.len()).find(|&i| self.faces[i + 1].signature.len() == 1) {
                Some(top) => (top, false),
                None => return Ok(Complex64::new(1e3, 0.0)),
            },
        };
        let poly = &self.polylines[curve_id];
        let n = poly.len();
        let ccw = signed_area(poly) > 0.0;
        let diameter = poly.iter().map(|a| (a - poly[0]).norm()).fold(0.0, f64::max);
        for k in 0..8 {
            let i = k * n / 8;
            let dir = poly[(i + 1) % n] - poly[(i + n - 1) % n];
            let normal_left = Complex64::i() * dir / dir.norm();
            let into = if ccw == inward { normal_left } else { -normal_left };
            let mut offset = 0.05 * diameter;
            for _ in 0..12 {
                let cand = poly[i] + into * offset;
                if self.face_of(cand) == (FaceLocation::Face { face_id }) {
                    return Ok(cand);
                }
                offset *= 0.5;
            }
        }
        Err(Error::Internal(format!("no representative point found for face {face_id}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{lens, ComplexPoly};
    use crate::critical::trace_critical_curves;

    fn partition_for(r: &RationalFn) -> RegionPartition {
        let tol = Tolerances::default();
        let curves = trace_critical_curves(r, &tol).unwrap();
        build_partition(r, &curves, &tol).unwrap()
    }

    #[test]
    fn z_squared_two_faces() {
        let r = RationalFn::polynomial(ComplexPoly::from_real(&[0.0, 0.0, 1.0])).unwrap();
        let part = partition_for(&r);
        assert_eq!(part.faces.len(), 2);
        let disk = part.face_of(Complex64::new(0.0, 0.0)).face_id().unwrap();
        assert_eq!(part.face(disk).orientation, Orientation::Reversing);
        assert!(!part.face(disk).unbounded);
        assert_eq!(part.unbounded_face().orientation, Orientation::Preserving);
        assert_eq!(part.face_of(Complex64::new(1e3, 0.0)).face_id(), Some(UNBOUNDED_FACE));
        assert!(matches!(part.face_of(Complex64::new(0.5, 0.0)), FaceLocation::Boundary { .. }));
    }

    #[test]
    fn mpw_faces_alternate() {
        let r = lens::mpw(3, 0.6).unwrap();
        let part = partition_for(&r);
        assert_eq!(part.faces.len(), part.curves.len() + 1);
        assert_eq!(part.faces.iter().filter(|f| f.unbounded).count(), 1);
        for face in &part.faces {
            let jac = r.derivative_at(face.representative).unwrap().norm_sqr() - 1.0;
            assert_eq!(Orientation::from_jacobian(jac), face.orientation, "face {}", face.face_id);
        }
        for c in 0..part.curves.len() {
            let (inner, outer) = part.adjacent_faces(c);
            assert_ne!(part.face(inner).orientation, part.face(outer).orientation);
        }
        assert_eq!(part.face_of(Complex64::new(1e3, 0.0)).face_id(), Some(UNBOUNDED_FACE));
    }

    #[test]
    fn adjacent_faces_have_opposite_jacobian_signs() {
        let r = lens::second_example().unwrap();
        let part = partition_for(&r);
        for curve in &part.curves {
            let n = curve.points.len();
            for i in (0..n).step_by(41) {
                let z = curve.points[i].z;
                let dir = curve.points[(i + 1) % n].z - curve.points[(i + n - 1) % n].z;
                let normal = Complex64::i() * dir / dir.norm();
                let jp = r.derivative_at(z + normal * 1e-5).unwrap().norm_sqr() - 1.0;
                let jm = r.derivative_at(z - normal * 1e-5).unwrap().norm_sqr() - 1.0;
                assert!(jp * jm < 0.0);
                let fp = part.face_of(z + normal * 1e-5).face_id().unwrap();
                let fm = part.face_of(z - normal * 1e-5).face_id().unwrap();
                assert_ne!(fp, fm);
            }
        }
    }
}
