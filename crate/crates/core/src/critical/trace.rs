use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use super::{branch_cusp_value, project, CriticalCurve, CriticalSample, CuspLocation};
use crate::algebra::RationalFn;
use crate::geometry::polylines_intersect;
use crate::roots::all_roots;
use crate::{Error, Result, Tolerances};

/// Traces every critical curve as a closed polyline.
///
/// With `r′ = P/Q`, the preimages of `e^{iθ}` are the roots of
/// `P − e^{iθ} Q`. All roots are computed at `θ = 0` and continued in `θ`
/// (predictor `dz/dθ = i e^{iθ} / r″(z)`, Newton corrector), halving the
/// step whenever a root would jump further than a quarter of its distance
/// to the other roots. At every grid angle the continued roots are matched
/// one-to-one against a fresh root solve. After a full turn the roots come
/// back permuted; each cycle of that permutation is one curve.
pub fn trace_critical_curves(r: &RationalFn, tol: &Tolerances) -> Result<Vec<CriticalCurve>> {
    let (num, den) = r.derivative_fraction()?;
    let degree = num.deg().max(den.deg());
    if degree == 0 {
        return Ok(Vec::new());
    }
    if num.deg() == den.deg() {
        let ratio = (num.leading() / den.leading()).norm();
        if (ratio - 1.0).abs() < 1e-9 {
            return Err(Error::Tracing {
                theta: (num.leading() / den.leading()).arg(),
                reason: "|r'| tends to 1 at infinity; critical set is unbounded".into(),
            });
        }
    }
    let equation = |theta: f64| &num - &den.scale(Complex64::from_polar(1.0, theta));

    let start = all_roots(&equation(0.0), tol.tol_res)?;
    let mut tracked: Vec<Complex64> = Vec::with_capacity(degree);
    for root in start.locations() {
        tracked.push(project(r, root, 0.0, 30)?);
    }
    check_distinct(&tracked, 0.0)?;
    let origin = tracked.clone();
    let extent = tracked.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let spread = pairwise_min(&tracked).min(1.0 + extent);
    let seg_max = 0.01 * (extent + spread).max(1e-6);

    let mut branches: Vec<Vec<(f64, Complex64)>> = tracked.iter().map(|&z| vec![(0.0, z)]).collect();
    let steps = tol.theta_steps;
    let mut theta = 0.0;
    for k in 1..=steps {
        let target = TAU * k as f64 / steps as f64;
        while theta < target - 1e-14 {
            let mut h = target - theta;
            loop {
                if h < tol.min_theta_step * 0.999 {
                    return Err(Error::Tracing {
                        theta,
                        reason: "root branches remain ambiguous at the minimum theta step".into(),
                    });
                }
                if let Some(next) = continuation_step(r, &tracked, theta, h, seg_max) {
                    tracked = next;
                    theta += h;
                    break;
                }
                h *= 0.5;
            }
            if theta < TAU - 1e-12 {
                for (b, &z) in branches.iter_mut().zip(&tracked) {
                    b.push((theta, z));
                }
            }
        }
        theta = target;
        if k < steps {
            let fresh = all_roots(&equation(target), tol.tol_res)?.locations();
            match_roots(&tracked, &fresh, target)?;
        }
    }
    // samples stop short of 2π; the tracked roots now sit at 2π
    let mut perm = vec![usize::MAX; degree];
    let mut used = vec![false; degree];
    for (i, z) in tracked.iter().enumerate() {
        let (j, d) = nearest(*z, &origin);
        if used[j] || d > 1e-6 * (1.0 + z.norm()) {
            return Err(Error::Tracing { theta: TAU, reason: "branches fail to close after a full turn".into() });
        }
        used[j] = true;
        perm[i] = j;
    }

    let mut visited = vec![false; degree];
    let mut curves = Vec::new();
    for first in 0..degree {
        if visited[first] {
            continue;
        }
        let mut cycle = vec![first];
        visited[first] = true;
        let mut next = perm[first];
        while next != first {
            visited[next] = true;
            cycle.push(next);
            next = perm[next];
        }
        let last = *cycle.last().unwrap();
        let closure_gap = (tracked[last] - origin[first]).norm();
        let mut forward: Vec<(f64, Complex64)> = Vec::new();
        for &b in &cycle {
            forward.extend(branches[b].iter().copied());
        }
        let curve = build_curve(r, curves.len(), forward, cycle.len(), closure_gap)?;
        curves.push(curve);
    }
    validate_curves(&curves)?;
    Ok(curves)
}

fn continuation_step(
    r: &RationalFn,
    current: &[Complex64],
    theta: f64,
    h: f64,
    seg_max: f64,
) -> Option<Vec<Complex64>> {
    let next_theta = theta + h;
    let mut out = Vec::with_capacity(current.len());
    for (i, &z) in current.iter().enumerate() {
        let [_, _, d2] = r.derivs(z).ok()?;
        if d2.norm() == 0.0 {
            return None;
        }
        let predicted = z + Complex64::i() * Complex64::from_polar(1.0, theta) / d2 * h;
        let corrected = project(r, predicted, next_theta, 12).ok()?;
        let residual = (r.derivative_at(corrected).ok()? - Complex64::from_polar(1.0, next_theta)).norm();
        if !(residual < 1e-11) {
            return None;
        }
        let sep = current
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, w)| (w - z).norm())
            .fold(f64::INFINITY, f64::min);
        let moved = (corrected - z).norm();
        if moved > seg_max || (corrected - predicted).norm() > 0.1 * sep || moved > 0.25 * sep {
            return None;
        }
        out.push(corrected);
    }
    Some(out)
}

fn nearest(z: Complex64, pts: &[Complex64]) -> (usize, f64) {
    pts.iter()
        .enumerate()
        .map(|(j, w)| (j, (w - z).norm()))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap_or((0, f64::INFINITY))
}

fn pairwise_min(pts: &[Complex64]) -> f64 {
    let mut m = f64::INFINITY;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            m = m.min((pts[i] - pts[j]).norm());
        }
    }
    m
}

fn check_distinct(pts: &[Complex64], theta: f64) -> Result<()> {
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            if (pts[i] - pts[j]).norm() < 1e-9 * (1.0 + pts[i].norm()) {
                return Err(Error::Tracing {
                    theta,
                    reason: format!("branches {i} and {j} collide at {}", pts[i]),
                });
            }
        }
    }
    Ok(())
}

/// Every fresh root must be the nearest neighbour of exactly one tracked root.
fn match_roots(tracked: &[Complex64], fresh: &[Complex64], theta: f64) -> Result<()> {
    if fresh.len() != tracked.len() {
        return Err(Error::Tracing { theta, reason: "root count changed".into() });
    }
    let mut used = vec![false; fresh.len()];
    for (i, z) in tracked.iter().enumerate() {
        let (j, d) = nearest(*z, fresh);
        if used[j] || d > 1e-6 * (1.0 + z.norm()) {
            return Err(Error::Tracing {
                theta,
                reason: format!("branch {i} at {z} does not match a unique root (distance {d:.3e})"),
            });
        }
        used[j] = true;
    }
    Ok(())
}

fn wrap(a: f64) -> f64 {
    let mut a = a % TAU;
    if a > PI {
        a -= TAU;
    } else if a <= -PI {
        a += TAU;
    }
    a
}

fn build_curve(
    r: &RationalFn,
    curve_id: usize,
    mut forward: Vec<(f64, Complex64)>,
    turns: usize,
    closure_gap: f64,
) -> Result<CriticalCurve> {
    // sense-preserving side on the left: run against increasing θ
    forward.reverse();
    let n = forward.len();
    let mut unwrapped = Vec::with_capacity(n);
    let mut points = Vec::with_capacity(n);
    for (i, &(theta, z)) in forward.iter().enumerate() {
        let theta = theta.rem_euclid(TAU);
        let u = if i == 0 {
            theta
        } else {
            let prev: f64 = unwrapped[i - 1];
            let step = wrap(theta - prev.rem_euclid(TAU));
            if step.abs() >= PI {
                return Err(Error::BranchJump { index: i - 1, next: i, jump: step.abs() / 2.0 });
            }
            prev + step
        };
        unwrapped.push(u);
        let [_, d1, d2] = r.derivs(z)?;
        let t = Complex64::i() * d1 * d2.conj();
        if t.norm() == 0.0 {
            return Err(Error::Degenerate(format!("r'' vanishes on the critical curve at {z}")));
        }
        points.push(CriticalSample { z, theta, tangent: t / t.norm(), cusp_value: branch_cusp_value(d2, u) });
    }
    let mut curve = CriticalCurve {
        curve_id,
        points,
        cusp_indices: Vec::new(),
        cusps: Vec::new(),
        closure_gap,
        turns,
        unwrapped,
    };
    let cusps = locate_cusps(r, &curve)?;
    let mut idx: Vec<usize> = cusps.iter().map(|c| c.index).collect();
    idx.sort_unstable();
    idx.dedup();
    curve.cusp_indices = idx;
    curve.cusps = cusps;
    Ok(curve)
}

/// Unwrapped θ of the sample after `i` (wrapping to the first sample with
/// the branch continued across the seam).
fn next_unwrapped(curve: &CriticalCurve, i: usize) -> f64 {
    let n = curve.points.len();
    if i + 1 < n {
        curve.unwrapped[i + 1]
    } else {
        let last = curve.unwrapped[n - 1];
        last + wrap(curve.points[0].theta - last.rem_euclid(TAU))
    }
}

/// Refines every sign change of the (branch-continued) cusp value along the
/// curve by bisection in θ until the bracketing preimages are closer than
/// `1e-10`.
pub fn locate_cusps(r: &RationalFn, curve: &CriticalCurve) -> Result<Vec<CuspLocation>> {
    let n = curve.points.len();
    let mut out = Vec::new();
    for i in 0..n {
        let j = (i + 1) % n;
        let (ta, tb) = (curve.unwrapped[i], next_unwrapped(curve, i));
        let va = curve.points[i].cusp_value;
        let vb = branch_cusp_value(r.derivs(curve.points[j].z)?[2], tb);
        if va == 0.0 {
            out.push(CuspLocation { z: curve.points[i].z, theta: curve.points[i].theta, index: i });
            continue;
        }
        if va * vb >= 0.0 {
            continue;
        }
        let (mut lo, mut hi) = (ta, tb);
        let (mut zlo, mut zhi) = (curve.points[i].z, curve.points[j].z);
        let mut vlo = va;
        for _ in 0..200 {
            if (zhi - zlo).norm() < 1e-10 {
                break;
            }
            let mid = 0.5 * (lo + hi);
            let zm = project(r, 0.5 * (zlo + zhi), mid, 30)?;
            let vm = branch_cusp_value(r.derivs(zm)?[2], mid);
            if vm == 0.0 {
                lo = mid;
                hi = mid;
                zlo = zm;
                zhi = zm;
                break;
            }
            if vm * vlo < 0.0 {
                hi = mid;
                zhi = zm;
            } else {
                lo = mid;
                zlo = zm;
                vlo = vm;
            }
        }
        let theta = 0.5 * (lo + hi);
        let z = project(r, 0.5 * (zlo + zhi), theta, 30)?;
        let index = if (z - curve.points[i].z).norm() <= (z - curve.points[j].z).norm() { i } else { j };
        out.push(CuspLocation { z, theta: theta.rem_euclid(TAU), index });
    }
    Ok(out)
}

/// Simple closed curves that do not meet each other.
fn validate_curves(curves: &[CriticalCurve]) -> Result<()> {
    let pts: Vec<Vec<Complex64>> = curves.iter().map(|c| c.locations()).collect();
    for (i, a) in pts.iter().enumerate() {
        if polylines_intersect(a, a, true) {
            return Err(Error::Tracing { theta: 0.0, reason: format!("critical curve {i} self-intersects") });
        }
        for (j, b) in pts.iter().enumerate().skip(i + 1) {
            if polylines_intersect(a, b, false) {
                return Err(Error::Tracing {
                    theta: 0.0,
                    reason: format!("critical curves {i} and {j} intersect (degenerate function)"),
                });
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{lens, ComplexPoly};

    fn monomial(k: usize) -> RationalFn {
        let mut coeffs = vec![0.0; k + 1];
        coeffs[k] = 1.0;
        RationalFn::polynomial(ComplexPoly::from_real(&coeffs)).unwrap()
    }

    #[test]
    fn z_squared_circle() {
        let r = monomial(2);
        let curves = trace_critical_curves(&r, &Tolerances::default()).unwrap();
        assert_eq!(curves.len(), 1);
        let c = &curves[0];
        for s in &c.points {
            assert!((s.z.norm() - 0.5).abs() < 1e-12);
            assert!((r.derivative_at(s.z).unwrap().norm() - 1.0).abs() < 1e-9);
        }
        assert!(c.closure_gap < 1e-9);
        assert_eq!(c.turns, 1);
    }

    #[test]
    fn z_cubed_circle() {
        let r = monomial(3);
        let curves = trace_critical_curves(&r, &Tolerances::default()).unwrap();
        assert_eq!(curves.len(), 1);
        for s in &curves[0].points {
            assert!((s.z.norm() - 3f64.powf(-0.5)).abs() < 1e-12);
        }
        assert_eq!(curves[0].turns, 2);
    }

    #[test]
    fn z_squared_cusps() {
        let r = monomial(2);
        let curves = trace_critical_curves(&r, &Tolerances::default()).unwrap();
        let mut args: Vec<f64> = curves[0].cusps.iter().map(|c| c.z.arg().rem_euclid(TAU)).collect();
        args.sort_by(f64::total_cmp);
        let expected = [PI / 3.0, PI, 5.0 * PI / 3.0];
        assert_eq!(args.len(), 3);
        for (a, e) in args.iter().zip(expected) {
            assert!((a - e).abs() < 1e-9, "{a} vs {e}");
        }
        for cusp in &curves[0].cusps {
            assert!((cusp.z.norm() - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn z_cubed_cusps() {
        let r = monomial(3);
        let curves = trace_critical_curves(&r, &Tolerances::default()).unwrap();
        let mut args: Vec<f64> = curves[0].cusps.iter().map(|c| c.z.arg().rem_euclid(TAU)).collect();
        args.sort_by(f64::total_cmp);
        assert_eq!(args.len(), 4);
        for (k, a) in args.iter().enumerate() {
            assert!((a - (PI / 4.0 + k as f64 * PI / 2.0)).abs() < 1e-9);
        }
    }

    #[test]
    fn fold_samples_have_nonzero_cusp_value() {
        let r = monomial(2);
        let curves = trace_critical_curves(&r, &Tolerances::default()).unwrap();
        let c = &curves[0];
        for (i, s) in c.points.iter().enumerate() {
            if !c.is_cusp_index(i) {
                assert!(s.cusp_value.abs() > 0.0);
            }
        }
    }

    #[test]
    fn mpw_has_two_curves() {
        let r = lens::mpw(3, 0.6).unwrap();
        let curves = trace_critical_curves(&r, &Tolerances::default()).unwrap();
        assert_eq!(curves.len(), 2);
        for c in &curves {
            assert!(c.closure_gap < 1e-9);
            for s in &c.points {
                assert!((r.derivative_at(s.z).unwrap().norm() - 1.0).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn sense_preserving_on_the_left() {
        let r = lens::mpw(3, 0.6).unwrap();
        for c in trace_critical_curves(&r, &Tolerances::default()).unwrap() {
            let n = c.points.len();
            for i in (0..n).step_by(53) {
                let dir = c.points[(i + 1) % n].z - c.points[i].z;
                let left = c.points[i].z + 0.5 * dir + Complex64::i() * dir / dir.norm() * 1e-4;
                assert!(r.derivative_at(left).unwrap().norm() > 1.0);
            }
        }
    }
}
