//! Caustics `f(Γ)`, fold/cusp classification, the local quadratic model and
//! crossings of shift paths with caustics.

mod crossing;
mod tmodel;

use num_complex::Complex64;
use serde::Serialize;

use crate::algebra::RationalFn;
use crate::critical::{cusp_functional, tangent_direction, CriticalCurve};
use crate::geometry::{bounding_box, point_segment_distance};
use crate::{Result, Tolerances};

pub(crate) use crossing::{crossing_event, Placement};
pub use crossing::{path_crossings, CrossingEvent, ObservedDelta, PredictedDelta};
pub use tmodel::{tmodel_eval, tmodel_zeros, ModelZero, ZeroClass};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PointKind {
    Fold,
    Cusp,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CausticPoint {
    pub w: Complex64,
    /// Index of the preimage sample on the source curve.
    pub preimage_index: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CuspImage {
    pub w: Complex64,
    pub z: Complex64,
    /// Second-order coefficient of the local model at `z`.
    pub d: Complex64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Caustic {
    pub caustic_id: usize,
    pub source_curve_id: usize,
    pub points: Vec<CausticPoint>,
    pub cusp_points: Vec<CuspImage>,
    pub bbox: (Complex64, Complex64),
    /// Cusp flags per point, mirroring the source curve's cusp indices.
    #[serde(skip)]
    is_cusp: Vec<bool>,
}

impl Caustic {
    pub fn locations(&self) -> Vec<Complex64> {
        self.points.iter().map(|p| p.w).collect()
    }

    pub fn is_cusp(&self, idx: usize) -> bool {
        self.is_cusp[idx]
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Pointwise image `w = r(z) − conj(z)` of a critical curve.
pub fn map_caustic(r: &RationalFn, curve: &CriticalCurve) -> Result<Caustic> {
    let mut points = Vec::with_capacity(curve.len());
    for (i, s) in curve.points.iter().enumerate() {
        // |r′| = 1 on the curve, so a pole can never lie on it
        let w = r.eval(s.z)? - s.z.conj();
        points.push(CausticPoint { w, preimage_index: i });
    }
    let mut cusp_points = Vec::with_capacity(curve.cusps.len());
    for cusp in &curve.cusps {
        let w = r.eval(cusp.z)? - cusp.z.conj();
        let model = LocalModel::at(r, cusp.z, &Tolerances::default())?;
        cusp_points.push(CuspImage { w, z: cusp.z, d: model.d });
    }
    let mut is_cusp = vec![false; curve.len()];
    for &i in &curve.cusp_indices {
        is_cusp[i] = true;
    }
    let bbox = bounding_box(points.iter().map(|p| p.w)).unwrap_or_default();
    Ok(Caustic {
        caustic_id: curve.curve_id,
        source_curve_id: curve.curve_id,
        points,
        cusp_points,
        bbox,
        is_cusp,
    })
}

/// Local quadratic model at a critical point.
///
/// Substituting `z = z₀ + c u` with `c = e^{−iφ/2}` and rotating the image
/// by `c` turns `f(z) − f(z₀)` into `u + d u² − conj(u) + O(u³)` with
/// `d = c³ r″(z₀)/2`. The shift `η = f(z₀) + δ d` in the normalized frame
/// corresponds to `η = f(z₀) + δ D` with `D = r″(z₀) / (2 r′(z₀))` in the
/// original frame, independently of the square-root branch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LocalModel {
    pub z0: Complex64,
    /// `r′(z₀) = e^{iφ}`, `φ ∈ (−π, π]`.
    pub phi: f64,
    pub d: Complex64,
    pub kind: PointKind,
    /// `D = r″(z₀) / (2 r′(z₀))`; at a fold it points to the side of the
    /// caustic that gains zeros.
    pub open_direction: Complex64,
    /// `Re(r″/r′^{3/2})` with the principal branch (equals `2 Re d`).
    pub cusp_value: f64,
    /// Unit tangent of the critical curve at `z₀`.
    pub tangent: Complex64,
    /// Image of the tangent under the linearization, `r′ h − conj(h)`.
    pub caustic_tangent: Complex64,
}

impl LocalModel {
    pub fn at(r: &RationalFn, z0: Complex64, tol: &Tolerances) -> Result<Self> {
        let [_, d1, d2] = r.derivs(z0)?;
        let tangent = tangent_direction(r, z0)?;
        let phi = d1.arg();
        let c = Complex64::from_polar(1.0, -0.5 * phi);
        let d = c * c * c * d2 * 0.5;
        let cusp_value = cusp_functional(r, z0)?;
        let kind = if cusp_value.abs() < tol.cusp * (1.0 + d2.norm()) { PointKind::Cusp } else { PointKind::Fold };
        Ok(Self {
            z0,
            phi,
            d,
            kind,
            open_direction: d2 / (d1 * 2.0),
            cusp_value,
            tangent,
            caustic_tangent: d1 * tangent - tangent.conj(),
        })
    }

    /// Direction from the caustic point into the region between the two
    /// branches of a cusp.
    ///
    /// Near a cusp preimage the caustic is `w₀ + A t² + O(t³)`; `A` is read
    /// off the symmetric second difference of `f` at the critical points
    /// `±ε` along the tangent, which cancels the cubic term. `A` is parallel
    /// to `open_direction` but not always in the same sense: its sign also
    /// depends on `r‴(z₀)`.
    pub fn cusp_axis(&self, r: &RationalFn) -> Result<Complex64> {
        let eps = 1e-3 * (1.0 + self.z0.norm());
        let w0 = r.eval(self.z0)? - self.z0.conj();
        let mut sum = Complex64::new(0.0, 0.0);
        for side in [1.0, -1.0] {
            let guess = self.z0 + self.tangent * (side * eps);
            let theta = r.derivative_at(guess)?.arg();
            let z = crate::critical::project(r, guess, theta, 50)?;
            sum += r.eval(z)? - z.conj() - w0;
        }
        if sum.norm() == 0.0 {
            return Err(crate::Error::Degenerate(format!("no cusp axis at {}", self.z0)));
        }
        Ok(sum / sum.norm())
    }

    /// `sign(Im(d⁻¹))`, recorded for cusp crossings.
    pub fn im_inverse_sign(&self) -> i32 {
        let v = self.d.inv().im;
        if v > 0.0 {
            1
        } else if v < 0.0 {
            -1
        } else {
            0
        }
    }
}

/// Fold/cusp classification of a critical point with the full list of
/// critical preimages of its caustic point.
#[derive(Debug, Clone, Serialize)]
pub struct Classification {
    pub kind: PointKind,
    pub model: LocalModel,
    pub image: Complex64,
    /// `f⁻¹(w*) ∩ 𝒞`, starting with `z0`.
    pub preimages: Vec<Complex64>,
}

/// Classifies `z0` and collects the other critical points mapped to the same
/// caustic point (multiple folds and cusps).
pub fn classify_point(
    r: &RationalFn,
    z0: Complex64,
    curves: &[CriticalCurve],
    caustics: &[Caustic],
    tol: &Tolerances,
) -> Result<Classification> {
    let model = LocalModel::at(r, z0, tol)?;
    let image = r.eval(z0)? - z0.conj();
    let scale = 1.0 + image.norm();
    let mut preimages = vec![z0];
    for caustic in caustics {
        let curve = &curves[caustic.source_curve_id];
        let n = caustic.len();
        for i in 0..n {
            let j = (i + 1) % n;
            let (dist, t) = point_segment_distance(image, caustic.points[i].w, caustic.points[j].w);
            if dist > 1e-7 * scale {
                continue;
            }
            let za = curve.points[i].z;
            let zb = curve.points[j].z;
            let z = za + (zb - za) * t;
            let seg = (zb - za).norm();
            if preimages.iter().all(|p| (p - z).norm() > 2.0 * seg + 1e-9) {
                preimages.push(z);
            }
        }
    }
    Ok(Classification { kind: model.kind, model, image, preimages })
}
