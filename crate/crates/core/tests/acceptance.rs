//! Acceptance criteria 1–9. Runs as a plain binary so that every criterion
//! prints its own line; exits non-zero if any criterion does not pass.

use std::f64::consts::{PI, TAU};
use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rhf::algebra::lens;
use rhf::analysis::suites::{self, SuiteReport};
use rhf::analysis::{
    count_map, extremality, large_shift_verify, path_ledger, CountMap, Grid, Verdict,
};
use rhf::caustics::{path_crossings, tmodel_zeros, PointKind};
use rhf::critical::UNBOUNDED_FACE;
use rhf::zeros::{find_zeros, verify_argument_principle, winding, ClosedPath};
use rhf::{Complex64, ComplexPoly, CriticalStructure, RationalFn, ShiftedFunction, Tolerances};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

struct Outcome {
    verdict: Verdict,
    detail: String,
}

impl Outcome {
    fn new(ok: bool, detail: String) -> Self {
        Self { verdict: if ok { Verdict::Pass } else { Verdict::Fail }, detail }
    }
}

type Check = fn() -> Result<Outcome, rhf::Error>;

fn structure(r: &RationalFn) -> CriticalStructure {
    CriticalStructure::build(r, &Tolerances::default()).expect("critical structure")
}

fn quadratic() -> RationalFn {
    RationalFn::polynomial(ComplexPoly::from_real(&[0.0, 0.0, 1.0])).unwrap()
}

fn suite_line(rep: &SuiteReport) -> String {
    format!("{} {}/{} pass", rep.suite, rep.passed, rep.passed + rep.failed + rep.inconclusive)
}

fn caustic_grid(s: &CriticalStructure, n: usize) -> Grid {
    let (lo, hi) = suites::caustic_box(s);
    Grid { re_min: lo.re, re_max: hi.re, im_min: lo.im, im_max: hi.im, nx: n, ny: n }
}

fn clean_sample(map: &CountMap, pred: impl Fn(&rhf::analysis::CountSample) -> bool) -> Vec<Complex64> {
    map.samples.iter().filter(|s| s.flags.clean() && pred(s)).map(|s| s.eta).collect()
}

/// z² − conj z at η = 0.
fn criterion_1() -> Result<Outcome, rhf::Error> {
    let start = Instant::now();
    let f = ShiftedFunction::new(quadratic(), c(0.0, 0.0))?;
    let census = find_zeros(&f, &Tolerances::default())?;
    let w = Complex64::from_polar(1.0, TAU / 3.0);
    let expected = [c(0.0, 0.0), c(1.0, 0.0), w, w.conj()];
    let matched = expected.iter().all(|e| census.zeros.iter().any(|r| (r.z - e).norm() < 1e-9));
    let wind = winding(|z| f.eval(z), &ClosedPath::circle(c(0.0, 0.0), 2.0))?;
    let elapsed = start.elapsed().as_secs_f64();
    let ok = census.counts.n == 4
        && matched
        && census.counts.n_plus == 3
        && census.counts.n_minus == 1
        && wind.rounded == 2
        && (wind.value - 2.0).abs() < 1e-6
        && elapsed < 1.0;
    Ok(Outcome::new(
        ok,
        format!(
            "N={} (+{} -{}), roots matched within 1e-9: {matched}, winding {:.9}, {elapsed:.3}s",
            census.counts.n, census.counts.n_plus, census.counts.n_minus, wind.value
        ),
    ))
}

/// Count levels, extremality and path deltas for three point masses on a ring.
fn criterion_2() -> Result<Outcome, rhf::Error> {
    let start = Instant::now();
    let s = structure(&lens::mpw(3, 0.6)?);
    let map = count_map(&s, &caustic_grid(&s, 100))?;
    let levels: Vec<usize> = map.levels.iter().copied().collect();
    let tens = clean_sample(&map, |x| x.counts.n == 10);
    let fours = clean_sample(&map, |x| x.counts.n == 4);
    let mut extremal = false;
    if let Some(&eta) = tens.first() {
        let e = extremality(&s, eta)?;
        extremal = e.extremal && e.regular && e.bound == 10;
    }
    // a straight path from a 4-zero shift to a 10-zero shift that misses the
    // cusps and visits every level
    let mut path_ok = false;
    let mut path_note = String::from("no fold-only path found");
    'search: for &b in tens.iter().step_by(7) {
        for &a in fours.iter().step_by(11) {
            let Ok(events) = path_crossings(&s, &[a, b]) else { continue };
            if events.is_empty() || events.iter().any(|e| e.kind != PointKind::Fold || !e.reliable) {
                continue;
            }
            let ledger = path_ledger(&s, &[a, b])?;
            let seen: Vec<usize> = ledger.tables.iter().map(|t| t.counts.n).collect();
            if !(seen.contains(&6) && seen.contains(&8)) {
                continue;
            }
            let deltas: Vec<i32> = ledger.events.iter().map(|e| e.observed.as_ref().map_or(0, |o| o.total)).collect();
            path_ok = ledger.verdict == Verdict::Pass && deltas.iter().all(|d| d.abs() == 2);
            path_note = format!("path counts {seen:?}, deltas {deltas:?}");
            break 'search;
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    let ok = levels == [4, 6, 8, 10] && extremal && path_ok && elapsed < 30.0;
    Ok(Outcome::new(ok, format!("levels {levels:?}, extremal+regular at N=10: {extremal}, {path_note}, {elapsed:.1}s")))
}

/// |η| = 10³ in 8 directions for both examples.
fn criterion_3() -> Result<Outcome, rhf::Error> {
    let mut good = 0;
    let mut total = 0;
    for r in [lens::mpw(3, 0.6)?, lens::second_example()?] {
        let s = structure(&r);
        for k in 0..8 {
            total += 1;
            let rep = large_shift_verify(&s, 1e3, TAU * (k as f64 + 0.125) / 8.0)?;
            let near: usize = rep
                .poles
                .iter()
                .map(|p| p.zeros.iter().filter(|z| (*z - p.pole).norm() < 1e-2).count())
                .sum();
            let preserving = rep.poles.iter().all(|p| p.all_preserving);
            let far = rep.far_zeros.len() == 1 && rep.far_zeros[0].face == Some(UNBOUNDED_FACE);
            if rep.verdict == Verdict::Pass && rep.observed == 4 && near == 3 && preserving && far {
                good += 1;
            }
        }
    }
    Ok(Outcome::new(good == total, format!("{good}/{total} shifts: 4 zeros, 3 within 1e-2 of poles, 1 far")))
}

/// Levels of the second example, including a minimal 2-zero face.
fn criterion_4() -> Result<Outcome, rhf::Error> {
    let s = structure(&lens::second_example()?);
    let map = count_map(&s, &caustic_grid(&s, 100))?;
    let levels: Vec<usize> = map.levels.iter().copied().collect();
    let twos = clean_sample(&map, |x| x.counts.n == 2);
    let minimal = match twos.first() {
        Some(&eta) => {
            let e = extremality(&s, eta)?;
            e.minimal && e.counts.n_minus == 0
        }
        None => false,
    };
    let ok = [2, 4, 6].iter().all(|l| levels.contains(l)) && minimal;
    Ok(Outcome::new(ok, format!("levels {levels:?}, 2-zero face with N-=0: {minimal}")))
}

fn criterion_5() -> Result<Outcome, rhf::Error> {
    let a = suites::fold_suite(&structure(&quadratic()), 10)?;
    let b = suites::fold_suite(&structure(&lens::mpw(3, 0.6)?), 10)?;
    let n = a.items.len() + b.items.len();
    let ok = n == 20 && a.verdict.is_pass() && b.verdict.is_pass();
    Ok(Outcome::new(ok, format!("z^2 {}, ring {}", suite_line(&a), suite_line(&b))))
}

fn criterion_6() -> Result<Outcome, rhf::Error> {
    let sq = structure(&quadratic());
    let mut args: Vec<f64> = sq.curves.iter().flat_map(|c| c.cusps.iter().map(|k| k.z.arg().rem_euclid(TAU))).collect();
    args.sort_by(f64::total_cmp);
    let analytic = [PI / 3.0, PI, 5.0 * PI / 3.0];
    let located = args.len() == 3 && args.iter().zip(analytic).all(|(a, b)| (a - b).abs() < 1e-6);
    let a = suites::cusp_suite(&sq)?;
    let b = suites::cusp_suite(&structure(&lens::mpw(3, 0.6)?))?;
    let ok = located && a.verdict.is_pass() && a.items.len() == 3 && b.verdict.is_pass() && !b.items.is_empty();
    Ok(Outcome::new(ok, format!("z^2 cusps at analytic angles: {located}, z^2 {}, ring {}", suite_line(&a), suite_line(&b))))
}

/// Closed-form zeros of the local model against the general pipeline.
fn criterion_7() -> Result<Outcome, rhf::Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let tol = Tolerances::default();
    let mut cases = Vec::new();
    for k in 0..100 {
        let d = Complex64::from_polar(rng.gen_range(0.3..3.0), rng.gen_range(0.0..TAU));
        let inv = d.inv();
        let delta = if k == 0 {
            inv.re * inv.re
        } else {
            rng.gen_range(-1.5..1.5) * inv.norm_sqr()
        };
        cases.push((d, delta));
    }
    let mut worst = 0.0f64;
    let mut bad = 0;
    for &(d, delta) in &cases {
        let r = RationalFn::polynomial(ComplexPoly::new(vec![c(0.0, 0.0), c(1.0, 0.0), d])?)?;
        let f = ShiftedFunction::with_tolerances(r, d * delta, &tol)?;
        let census = find_zeros(&f, &tol)?;
        let model: Vec<Complex64> = tmodel_zeros(d, delta)?.iter().map(|m| m.z).collect();
        let found = census.locations();
        let dist = |a: &[Complex64], b: &[Complex64]| {
            a.iter().map(|x| b.iter().map(|y| (x - y).norm()).fold(f64::INFINITY, f64::min)).fold(0.0, f64::max)
        };
        let err = dist(&model, &found).max(dist(&found, &model));
        worst = worst.max(err);
        if model.len() != found.len() || !(err < 1e-8) {
            bad += 1;
        }
    }
    Ok(Outcome::new(bad == 0, format!("{}/100 agree, worst distance {worst:.2e} (tol 1e-8), includes Re(1/d)^2 = delta", 100 - bad)))
}

/// Random rational function with `max(deg p, deg q)` in 2..=5 and simple
/// poles.
fn random_rational(rng: &mut ChaCha8Rng) -> RationalFn {
    loop {
        let dq = rng.gen_range(0..=5);
        let dp = rng.gen_range(0..=5);
        if dp.max(dq) < 2 {
            continue;
        }
        let mut roots = |n: usize| -> Vec<Complex64> {
            (0..n).map(|_| c(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5))).collect()
        };
        let zs = roots(dp);
        let ps = roots(dq);
        let lead = Complex64::from_polar(rng.gen_range(0.3..2.0), rng.gen_range(0.0..TAU));
        let p = ComplexPoly::from_roots(&zs, lead);
        let q = ComplexPoly::from_roots(&ps, c(1.0, 0.0));
        if let Ok(r) = RationalFn::new(p, q) {
            if r.degree() >= 2 {
                return r;
            }
        }
    }
}

fn criterion_8() -> Result<Outcome, rhf::Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let tol = Tolerances::default();
    let (mut done, mut good, mut worst) = (0, 0, 0.0f64);
    while done < 100 {
        let r = random_rational(&mut rng);
        let eta = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let f = ShiftedFunction::with_tolerances(r.clone(), eta, &tol)?;
        let census = find_zeros(&f, &tol)?;
        let marks: Vec<Complex64> = census.locations().into_iter().chain(r.poles().iter().map(|p| p.location)).collect();
        let extent = marks.iter().map(|z| z.norm()).fold(1.0, f64::max);
        let center = c(rng.gen_range(-extent..extent), rng.gen_range(-extent..extent));
        let radius = rng.gen_range(0.05..1.5) * extent;
        // keep exceptional points off the circle
        if marks.iter().any(|z| ((z - center).norm() - radius).abs() < 1e-3 * extent) {
            continue;
        }
        done += 1;
        if let Ok(ap) = verify_argument_principle(&f, &census, &ClosedPath::circle(center, radius)) {
            let off = (ap.winding.value - ap.winding.rounded as f64).abs();
            worst = worst.max(off);
            if ap.holds && off < 1e-6 {
                good += 1;
            }
        }
    }
    Ok(Outcome::new(good == 100, format!("{good}/100 circles, max distance of V from an integer {worst:.1e} (tol 1e-6)")))
}

fn criterion_9() -> Result<Outcome, rhf::Error> {
    let a = suites::invariance_suite(&structure(&lens::mpw(3, 0.6)?), 25, 9)?;
    let b = suites::invariance_suite(&structure(&lens::second_example()?), 25, 10)?;
    let n = a.items.len() + b.items.len();
    let ok = n == 50 && a.verdict.is_pass() && b.verdict.is_pass();
    Ok(Outcome::new(ok, format!("ring {}, second {}", suite_line(&a), suite_line(&b))))
}

fn main() -> ExitCode {
    let checks: [(&str, Check); 9] = [
        ("quadratic sanity", criterion_1),
        ("ring lens levels", criterion_2),
        ("large shift", criterion_3),
        ("second example levels", criterion_4),
        ("fold crossings", criterion_5),
        ("cusp crossings", criterion_6),
        ("local model", criterion_7),
        ("argument principle", criterion_8),
        ("path invariance", criterion_9),
    ];
    let mut all = Verdict::Pass;
    for (k, (name, check)) in checks.iter().enumerate() {
        let start = Instant::now();
        let outcome = check().unwrap_or_else(|e| Outcome::new(false, format!("error: {e}")));
        let label = match outcome.verdict {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Inconclusive => "INCONCLUSIVE",
        };
        println!(
            "criterion {} [{label}] {name}: {} ({:.2}s)",
            k + 1,
            outcome.detail,
            start.elapsed().as_secs_f64()
        );
        all = all.combine(outcome.verdict);
    }
    if all.is_pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
