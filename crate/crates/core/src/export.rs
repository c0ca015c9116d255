//! CSV, JSON and SVG artifacts. All writers are deterministic: identical
//! inputs give byte-identical output.

use std::fmt::Write as _;

use num_complex::Complex64;
use serde_json::{json, Value};

use crate::analysis::CountMap;
use crate::caustics::{Caustic, CrossingEvent};
use crate::critical::CriticalCurve;
use crate::zeros::{Census, ZeroOrientation};
use crate::{RationalFn, Result};

fn pair(z: Complex64) -> Value {
    json!([z.re, z.im])
}

/// `curve_id,idx,theta,re,im,is_cusp,cusp_value`
pub fn curves_csv(curves: &[CriticalCurve]) -> String {
    let mut out = String::from("curve_id,idx,theta,re,im,is_cusp,cusp_value\n");
    for c in curves {
        for (i, s) in c.points.iter().enumerate() {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                c.curve_id,
                i,
                s.theta,
                s.z.re,
                s.z.im,
                u8::from(c.is_cusp_index(i)),
                s.cusp_value
            );
        }
    }
    out
}

/// `caustic_id,idx,re,im,is_cusp`
pub fn caustics_csv(caustics: &[Caustic]) -> String {
    let mut out = String::from("caustic_id,idx,re,im,is_cusp\n");
    for c in caustics {
        for (i, p) in c.points.iter().enumerate() {
            let _ = writeln!(out, "{},{},{},{},{}", c.caustic_id, i, p.w.re, p.w.im, u8::from(c.is_cusp(i)));
        }
    }
    out
}

/// Census JSON: `{"eta", "zeros": [...], "counts": {...}}`.
pub fn census_json(census: &Census) -> Value {
    let zeros: Vec<Value> = census
        .zeros
        .iter()
        .map(|z| {
            json!({
                "z": pair(z.z),
                "orientation": z.orientation.as_str(),
                "jacobian": z.jacobian,
                "residual": z.residual,
                "index": z.index,
                "face": z.face,
            })
        })
        .collect();
    json!({
        "eta": pair(census.eta),
        "zeros": zeros,
        "counts": census.counts,
    })
}

pub fn crossings_json(events: &[CrossingEvent]) -> Result<Value> {
    Ok(serde_json::to_value(events)?)
}

/// `re,im,N,N_plus,N_minus,flags`
pub fn count_map_csv(map: &CountMap) -> String {
    let mut out = String::from("re,im,N,N_plus,N_minus,flags\n");
    for s in &map.samples {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            s.eta.re,
            s.eta.im,
            s.counts.n,
            s.counts.n_plus,
            s.counts.n_minus,
            s.flags.label()
        );
    }
    out
}

/// Everything drawn in a figure.
#[derive(Debug, Clone, Default)]
pub struct Scene<'a> {
    pub curves: &'a [CriticalCurve],
    pub caustics: &'a [Caustic],
    pub census: Option<&'a Census>,
    pub poles: Vec<Complex64>,
    /// Shift paths, drawn dotted.
    pub paths: Vec<Vec<Complex64>>,
}

impl<'a> Scene<'a> {
    pub fn new(r: &RationalFn, curves: &'a [CriticalCurve], caustics: &'a [Caustic], census: Option<&'a Census>) -> Self {
        Self { curves, caustics, census, poles: r.poles().iter().map(|p| p.location).collect(), paths: Vec::new() }
    }

    fn points(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.curves
            .iter()
            .flat_map(|c| c.points.iter().map(|s| s.z))
            .chain(self.caustics.iter().flat_map(|c| c.points.iter().map(|p| p.w)))
            .chain(self.census.into_iter().flat_map(|c| c.zeros.iter().map(|z| z.z)))
            .chain(self.poles.iter().copied())
            .chain(self.paths.iter().flatten().copied())
    }
}

fn f6(x: f64) -> String {
    let s = format!("{x:.6}");
    if s == "-0.000000" {
        "0.000000".into()
    } else {
        s
    }
}

/// SVG figure: solid critical curves, dashed caustics, up/down triangles for
/// sense-preserving/reversing zeros, crosses for singular zeros and squares
/// for poles. The plane is flipped so that the imaginary axis points up.
pub fn svg(scene: &Scene) -> String {
    let (mut lo, mut hi) = (Complex64::new(-1.0, -1.0), Complex64::new(1.0, 1.0));
    let mut first = true;
    for z in scene.points() {
        if !(z.re.is_finite() && z.im.is_finite()) {
            continue;
        }
        if first {
            lo = z;
            hi = z;
            first = false;
        }
        lo = Complex64::new(lo.re.min(z.re), lo.im.min(z.im));
        hi = Complex64::new(hi.re.max(z.re), hi.im.max(z.im));
    }
    let span = (hi.re - lo.re).max(hi.im - lo.im).max(1e-9);
    let margin = 0.1 * span;
    let (x0, y0) = (lo.re - margin, -hi.im - margin);
    let (w, h) = (hi.re - lo.re + 2.0 * margin, hi.im - lo.im + 2.0 * margin);
    let m = 0.012 * span;
    let stroke = 0.002 * span;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}" width="800" height="{}">"#,
        f6(x0),
        f6(y0),
        f6(w),
        f6(h),
        (800.0 * h / w).round() as i64
    );
    let _ = writeln!(out, r#"<rect x="{}" y="{}" width="{}" height="{}" fill="white"/>"#, f6(x0), f6(y0), f6(w), f6(h));
    let polyline = |out: &mut String, pts: &mut dyn Iterator<Item = Complex64>, close: bool, attrs: &str| {
        let mut coords: Vec<String> = pts.map(|z| format!("{},{}", f6(z.re), f6(-z.im))).collect();
        if close {
            if let Some(first) = coords.first().cloned() {
                coords.push(first);
            }
        }
        let _ = writeln!(out, r#"<polyline points="{}" fill="none" {attrs}/>"#, coords.join(" "));
    };
    for c in scene.curves {
        let attrs = format!(r#"class="critical" data-curve="{}" stroke="black" stroke-width="{}""#, c.curve_id, f6(stroke));
        polyline(&mut out, &mut c.points.iter().map(|s| s.z), true, &attrs);
    }
    for c in scene.caustics {
        let attrs = format!(
            r#"class="caustic" data-caustic="{}" stroke="red" stroke-width="{}" stroke-dasharray="{} {}""#,
            c.caustic_id,
            f6(stroke),
            f6(4.0 * stroke),
            f6(2.0 * stroke)
        );
        polyline(&mut out, &mut c.points.iter().map(|p| p.w), true, &attrs);
    }
    for p in &scene.paths {
        let attrs = format!(
            r#"class="path" stroke="gray" stroke-width="{}" stroke-dasharray="{} {}""#,
            f6(stroke),
            f6(stroke),
            f6(2.0 * stroke)
        );
        polyline(&mut out, &mut p.iter().copied(), false, &attrs);
    }
    for (k, v) in scene.poles.iter().enumerate() {
        let _ = writeln!(
            out,
            r#"<rect class="pole" data-pole="{k}" x="{}" y="{}" width="{}" height="{}" fill="black"/>"#,
            f6(v.re - m),
            f6(-v.im - m),
            f6(2.0 * m),
            f6(2.0 * m)
        );
    }
    if let Some(census) = scene.census {
        for (k, z) in census.zeros.iter().enumerate() {
            let (x, y) = (z.z.re, -z.z.im);
            match z.orientation {
                ZeroOrientation::Preserving => {
                    let _ = writeln!(
                        out,
                        r#"<polygon class="zero preserving" data-zero="{k}" points="{},{} {},{} {},{}" fill="blue"/>"#,
                        f6(x),
                        f6(y - m),
                        f6(x - m),
                        f6(y + m),
                        f6(x + m),
                        f6(y + m)
                    );
                }
                ZeroOrientation::Reversing => {
                    let _ = writeln!(
                        out,
                        r#"<polygon class="zero reversing" data-zero="{k}" points="{},{} {},{} {},{}" fill="green"/>"#,
                        f6(x),
                        f6(y + m),
                        f6(x - m),
                        f6(y - m),
                        f6(x + m),
                        f6(y - m)
                    );
                }
                ZeroOrientation::Singular => {
                    let _ = writeln!(
                        out,
                        r#"<path class="zero singular" data-zero="{k}" d="M{} {} L{} {} M{} {} L{} {}" stroke="magenta" stroke-width="{}"/>"#,
                        f6(x - m),
                        f6(y - m),
                        f6(x + m),
                        f6(y + m),
                        f6(x - m),
                        f6(y + m),
                        f6(x + m),
                        f6(y - m),
                        f6(stroke * 1.5)
                    );
                }
            }
        }
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::ComplexPoly;
    use crate::zeros::find_zeros;
    use crate::{CriticalStructure, ShiftedFunction, Tolerances};

    fn setup() -> (CriticalStructure, Census) {
        let r = RationalFn::polynomial(ComplexPoly::from_real(&[0.0, 0.0, 1.0])).unwrap();
        let tol = Tolerances::default();
        let s = CriticalStructure::build(&r, &tol).unwrap();
        let mut census = find_zeros(&ShiftedFunction::new(r, Complex64::new(0.0, 0.0)).unwrap(), &tol).unwrap();
        census.assign_faces(&s.partition);
        (s, census)
    }

    #[test]
    fn census_schema() {
        let (_, census) = setup();
        let v = census_json(&census);
        assert_eq!(v["counts"]["N"], 4);
        assert_eq!(v["counts"]["N_plus"], 3);
        assert_eq!(v["counts"]["N_minus"], 1);
        assert_eq!(v["counts"]["N_s"], 0);
        assert_eq!(v["eta"], json!([0.0, 0.0]));
        let zeros = v["zeros"].as_array().unwrap();
        assert_eq!(zeros.len(), 4);
        for z in zeros {
            assert!(z["z"].is_array());
            assert!(["preserving", "reversing"].contains(&z["orientation"].as_str().unwrap()));
            assert!(z["face"].is_u64());
        }
    }

    #[test]
    fn csv_headers_and_rows() {
        let (s, _) = setup();
        let curves = curves_csv(&s.curves);
        assert!(curves.starts_with("curve_id,idx,theta,re,im,is_cusp,cusp_value\n"));
        assert_eq!(curves.lines().count(), 1 + s.curves[0].len());
        assert_eq!(curves.lines().skip(1).filter(|l| l.split(',').nth(5) == Some("1")).count(), 3);
        let caustics = caustics_csv(&s.caustics);
        assert!(caustics.starts_with("caustic_id,idx,re,im,is_cusp\n"));
    }

    #[test]
    fn svg_markers_match_census() {
        let (s, census) = setup();
        let scene = Scene::new(&s.r, &s.curves, &s.caustics, Some(&census));
        let a = svg(&scene);
        let b = svg(&scene);
        assert_eq!(a, b);
        assert_eq!(a.matches("class=\"zero preserving\"").count(), 3);
        assert_eq!(a.matches("class=\"zero reversing\"").count(), 1);
        assert_eq!(a.matches("class=\"critical\"").count(), 1);
        assert_eq!(a.matches("class=\"caustic\"").count(), 1);
        assert!(a.contains("viewBox"));
    }
}
