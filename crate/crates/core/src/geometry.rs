//! Planar predicates on complex numbers treated as points.

use num_complex::Complex64;

/// `Im(conj(a) b)`, the z-component of `a × b`.
pub fn cross(a: Complex64, b: Complex64) -> f64 {
    a.re * b.im - a.im * b.re
}

/// Intersection of segments `[p0, p1]` and `[q0, q1]` as parameters
/// `(t, u)` in `[0, 1]²`. Parallel segments never intersect here.
pub fn segment_intersection(
    p0: Complex64,
    p1: Complex64,
    q0: Complex64,
    q1: Complex64,
) -> Option<(f64, f64)> {
    let d = p1 - p0;
    let e = q1 - q0;
    let denom = cross(d, e);
    if denom == 0.0 {
        return None;
    }
    let w = q0 - p0;
    let t = cross(w, e) / denom;
    let u = cross(w, d) / denom;
    ((0.0..=1.0).contains(&t) && (0.0..1.0).contains(&u)).then_some((t, u))
}

/// Distance from `z` to the segment `[a, b]` and the clamped parameter.
pub fn point_segment_distance(z: Complex64, a: Complex64, b: Complex64) -> (f64, f64) {
    let d = b - a;
    let len2 = d.norm_sqr();
    let t = if len2 == 0.0 { 0.0 } else { ((z - a).re * d.re + (z - a).im * d.im) / len2 };
    let t = t.clamp(0.0, 1.0);
    ((z - (a + d * t)).norm(), t)
}

/// Distance from `z` to a closed polyline.
pub fn polyline_distance(z: Complex64, pts: &[Complex64]) -> f64 {
    closed_segments(pts)
        .map(|(a, b)| point_segment_distance(z, a, b).0)
        .fold(f64::INFINITY, f64::min)
}

/// Even-odd point-in-polygon test for a closed polyline (no repeated
/// closing vertex needed).
pub fn point_in_polygon(z: Complex64, pts: &[Complex64]) -> bool {
    let mut inside = false;
    for (a, b) in closed_segments(pts) {
        if (a.im > z.im) != (b.im > z.im) {
            let x = a.re + (z.im - a.im) * (b.re - a.re) / (b.im - a.im);
            if z.re < x {
                inside = !inside;
            }
        }
    }
    inside
}

/// Shoelace area; positive for counter-clockwise traversal.
pub fn signed_area(pts: &[Complex64]) -> f64 {
    0.5 * closed_segments(pts).map(|(a, b)| cross(a, b)).sum::<f64>()
}

pub fn closed_segments(pts: &[Complex64]) -> impl Iterator<Item = (Complex64, Complex64)> + '_ {
    let n = pts.len();
    (0..n).map(move |i| (pts[i], pts[(i + 1) % n]))
}

/// Axis-aligned bounding box `(min, max)`.
pub fn bounding_box(pts: impl IntoIterator<Item = Complex64>) -> Option<(Complex64, Complex64)> {
    pts.into_iter().fold(None, |acc, z| {
        Some(match acc {
            None => (z, z),
            Some((lo, hi)) => (
                Complex64::new(lo.re.min(z.re), lo.im.min(z.im)),
                Complex64::new(hi.re.max(z.re), hi.im.max(z.im)),
            ),
        })
    })
}

/// Whether two closed polylines (or one against itself, when `same`) have
/// strictly crossing non-adjacent segments. Segments are bucketed on a
/// uniform grid so only nearby pairs are tested.
pub fn polylines_intersect(a: &[Complex64], b: &[Complex64], same: bool) -> bool {
    use std::collections::HashMap;
    let (na, nb) = (a.len(), b.len());
    if na < 2 || nb < 2 {
        return false;
    }
    let seg_len = closed_segments(a)
        .chain(closed_segments(b))
        .map(|(p, q)| (q - p).norm())
        .fold(0.0, f64::max)
        .max(1e-12);
    let cell = |z: Complex64| ((z.re / seg_len).floor() as i64, (z.im / seg_len).floor() as i64);
    let mut grid: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    for j in 0..nb {
        let (b0, b1) = (b[j], b[(j + 1) % nb]);
        let (lo, hi) = (cell(Complex64::new(b0.re.min(b1.re), b0.im.min(b1.im))), cell(Complex64::new(b0.re.max(b1.re), b0.im.max(b1.im))));
        for x in lo.0..=hi.0 {
            for y in lo.1..=hi.1 {
                grid.entry((x, y)).or_default().push(j);
            }
        }
    }
    for i in 0..na {
        let (a0, a1) = (a[i], a[(i + 1) % na]);
        let (lo, hi) = (cell(Complex64::new(a0.re.min(a1.re), a0.im.min(a1.im))), cell(Complex64::new(a0.re.max(a1.re), a0.im.max(a1.im))));
        for x in lo.0..=hi.0 {
            for y in lo.1..=hi.1 {
                let Some(cands) = grid.get(&(x, y)) else { continue };
                for &j in cands {
                    if same && (j == i || j == (i + 1) % na || (j + 1) % nb == i) {
                        continue;
                    }
                    if segments_cross_strictly(a0, a1, b[j], b[(j + 1) % nb]) {
                        return true;
                    }
                }
            }
        }
    }
    false
}

fn segments_cross_strictly(p0: Complex64, p1: Complex64, q0: Complex64, q1: Complex64) -> bool {
    let d1 = cross(p1 - p0, q0 - p0);
    let d2 = cross(p1 - p0, q1 - p0);
    let d3 = cross(q1 - q0, p0 - q0);
    let d4 = cross(q1 - q0, p1 - q0);
    d1 * d2 < 0.0 && d3 * d4 < 0.0
}
