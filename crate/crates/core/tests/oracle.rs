//! The zero census against a brute-force oracle that evaluates `r` in
//! factored form and runs plain Newton from many starting points.

use std::f64::consts::TAU;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rhf::caustics::{tmodel_eval, tmodel_zeros};
use rhf::zeros::{find_zeros, ZeroOrientation};
use rhf::{Complex64, ComplexPoly, RationalFn, ShiftedFunction, Tolerances};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `r(z) = lead · Π(z − a) / Π(z − b)` with its logarithmic derivative.
struct Factored {
    lead: Complex64,
    zeros: Vec<Complex64>,
    poles: Vec<Complex64>,
}

impl Factored {
    fn r_and_dr(&self, z: Complex64) -> (Complex64, Complex64) {
        let mut r = self.lead;
        let mut log_d = c(0.0, 0.0);
        for a in &self.zeros {
            r *= z - a;
            log_d += (z - a).inv();
        }
        for b in &self.poles {
            r /= z - b;
            log_d -= (z - b).inv();
        }
        // r′ = r · (log r)′ breaks down at zeros of r; fall back to a product rule
        let dr = if self.zeros.iter().any(|a| (z - a).norm() < 1e-12) {
            let h = 1e-7;
            (self.eval(z + h) - self.eval(z - h)) / (2.0 * h)
        } else {
            r * log_d
        };
        (r, dr)
    }

    fn eval(&self, z: Complex64) -> Complex64 {
        let num: Complex64 = self.zeros.iter().map(|a| z - a).product();
        let den: Complex64 = self.poles.iter().map(|b| z - b).product();
        self.lead * num / den
    }

    fn rational(&self) -> RationalFn {
        RationalFn::new(ComplexPoly::from_roots(&self.zeros, self.lead), ComplexPoly::from_roots(&self.poles, c(1.0, 0.0)))
            .unwrap()
    }

    /// Newton on `r(z) − conj z − η` as a real 2×2 system.
    fn newton(&self, eta: Complex64, mut z: Complex64) -> Option<(Complex64, f64)> {
        for _ in 0..80 {
            let (r, a) = self.r_and_dr(z);
            let f = r - z.conj() - eta;
            let jac = a.norm_sqr() - 1.0;
            if !f.re.is_finite() || jac.abs() < 1e-14 {
                return None;
            }
            let step = -(f.conj() + a.conj() * f) / jac;
            z += step;
            if step.norm() < 1e-14 * (1.0 + z.norm()) {
                break;
            }
        }
        let (r, a) = self.r_and_dr(z);
        let res = (r - z.conj() - eta).norm();
        (res < 1e-10 * (1.0 + z.norm() + r.norm())).then_some((z, a.norm_sqr() - 1.0))
    }

    fn oracle(&self, eta: Complex64) -> Vec<(Complex64, f64)> {
        let mut starts = Vec::new();
        let extent = 3.0 + eta.norm() + self.lead.norm();
        for i in 0..48 {
            for j in 0..48 {
                starts.push(c(-extent + 2.0 * extent * i as f64 / 47.0, -extent + 2.0 * extent * j as f64 / 47.0));
            }
        }
        for b in &self.poles {
            for rad in [1e-3, 1e-2, 1e-1] {
                for k in 0..12 {
                    starts.push(b + Complex64::from_polar(rad, TAU * k as f64 / 12.0));
                }
            }
        }
        let mut found: Vec<(Complex64, f64)> = Vec::new();
        for s in starts {
            if let Some((z, j)) = self.newton(eta, s) {
                if found.iter().all(|(w, _)| (w - z).norm() > 1e-7 * (1.0 + z.norm())) {
                    found.push((z, j));
                }
            }
        }
        found
    }
}

fn random_factored(rng: &mut ChaCha8Rng) -> Factored {
    loop {
        let dp = rng.gen_range(0..=5usize);
        let dq = rng.gen_range(0..=5usize);
        if dp.max(dq) < 2 {
            continue;
        }
        let mut pts = |n: usize| -> Vec<Complex64> {
            (0..n).map(|_| c(rng.gen_range(-1.2..1.2), rng.gen_range(-1.2..1.2))).collect()
        };
        let zeros = pts(dp);
        let poles = pts(dq);
        let separated = poles.iter().enumerate().all(|(i, b)| {
            poles[..i].iter().chain(&zeros).all(|x| (x - b).norm() > 0.1)
        });
        if separated {
            let lead = Complex64::from_polar(rng.gen_range(0.3..1.5), rng.gen_range(0.0..TAU));
            return Factored { lead, zeros, poles };
        }
    }
}

#[test]
fn census_contains_every_oracle_zero() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let tol = Tolerances::default();
    let mut compared = 0;
    let mut equal_counts = 0;
    for _ in 0..200 {
        let fac = random_factored(&mut rng);
        let eta = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let f = ShiftedFunction::with_tolerances(fac.rational(), eta, &tol).unwrap();
        let census = find_zeros(&f, &tol).unwrap();
        let oracle = fac.oracle(eta);
        // nearly singular zeros are where both methods are least reliable
        if oracle.iter().any(|(_, j)| j.abs() < 1e-4) || census.counts.n_s > 0 {
            continue;
        }
        compared += 1;
        for (z, j) in &oracle {
            let rec = census
                .zeros
                .iter()
                .find(|r| (r.z - z).norm() < 1e-6 * (1.0 + z.norm()))
                .unwrap_or_else(|| panic!("oracle zero {z} missing from census {:?}", census.locations()));
            let expect = if *j > 0.0 { ZeroOrientation::Preserving } else { ZeroOrientation::Reversing };
            assert_eq!(rec.orientation, expect, "orientation at {z}");
        }
        for rec in &census.zeros {
            let res = (fac.eval(rec.z) - rec.z.conj() - eta).norm();
            assert!(res < 1e-8 * (1.0 + rec.z.norm() + fac.eval(rec.z).norm()), "census zero {} has residual {res}", rec.z);
        }
        assert!(census.consistent);
        if oracle.len() == census.counts.n {
            equal_counts += 1;
        }
    }
    assert!(compared >= 150, "only {compared} regular cases");
    // a grid of starts may miss zeros packed close to a pole; the census
    // must never have fewer
    assert!(equal_counts * 10 >= compared * 9, "{equal_counts}/{compared}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tmodel_zeros_are_zeros(mag in 0.2f64..5.0, arg in 0.0f64..TAU, t in -2.0f64..2.0) {
        let d = Complex64::from_polar(mag, arg);
        let delta = t * d.inv().norm_sqr();
        let zs = tmodel_zeros(d, delta).unwrap();
        prop_assert!(zs.len() <= 4);
        for m in &zs {
            let v = tmodel_eval(d, delta, m.z);
            prop_assert!(v.norm() < 1e-9 * (1.0 + m.z.norm_sqr() * mag), "T({}) = {}", m.z, v);
        }
        // count parity: 2 real zeros for δ > 0, 0 for δ < 0, plus 0 or 2 non-real
        if delta < 0.0 {
            prop_assert!(zs.len() % 2 == 0);
        }
    }

    #[test]
    fn census_orientation_matches_jacobian(a in -1.0f64..1.0, b in -1.0f64..1.0, e1 in -0.5f64..0.5, e2 in -0.5f64..0.5) {
        let tol = Tolerances::default();
        let r = RationalFn::new(
            ComplexPoly::from_roots(&[c(a, b)], c(1.0, 0.0)),
            ComplexPoly::from_roots(&[c(0.3, -0.2), c(-0.4, 0.5)], c(1.0, 0.0)),
        ).unwrap();
        let f = ShiftedFunction::with_tolerances(r, c(e1, e2), &tol).unwrap();
        let census = find_zeros(&f, &tol).unwrap();
        for rec in &census.zeros {
            let j = f.jacobian(rec.z).unwrap();
            match rec.orientation {
                ZeroOrientation::Preserving => prop_assert!(j > 0.0),
                ZeroOrientation::Reversing => prop_assert!(j < 0.0),
                ZeroOrientation::Singular => prop_assert!(j.abs() < 1e-2),
            }
        }
        prop_assert_eq!(census.counts.n, census.zeros.len());
        prop_assert_eq!(census.counts.n, census.counts.n_plus + census.counts.n_minus + census.counts.n_s);
    }
}
