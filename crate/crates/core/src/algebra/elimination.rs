use num_complex::Complex64;

use super::{ComplexPoly, ShiftedFunction};
use crate::{Error, Result};

/// Single-variable polynomial whose roots contain every zero of `f_η`.
///
/// A zero satisfies `conj(z) = r(z) − η` and, conjugating,
/// `z = r*(conj z) − conj(η)` with `r* = p*/q*`. Substituting the first
/// relation into the second gives `z = r*(r(z) − η) − conj(η)`. Writing
/// `r(z) − η = A/B` with `A = p − ηq`, `B = q` and clearing denominators
/// with `n = deg r` yields
///
/// `P̃(A, B) − (z + conj η) Q̃(A, B) = 0`,
///
/// where `P̃ = Σ conj(p_i) A^i B^{n−i}` and likewise for `Q̃`. The degree is
/// at most `n² + 1`. Extraneous roots (for instance common roots of `P̃` and
/// `Q̃`) are possible and are filtered by the caller.
pub fn elimination_poly(f: &ShiftedFunction) -> Result<ComplexPoly> {
    let r = f.r();
    let (p, q) = (r.numerator(), r.denominator());
    let eta = f.eta();
    let n = r.degree();
    let a = p - &q.scale(eta);
    let b = q.clone();

    let a_pow: Vec<ComplexPoly> = powers(&a, n);
    let b_pow: Vec<ComplexPoly> = powers(&b, n);
    let homogenize = |coeffs: &[Complex64]| {
        coeffs.iter().enumerate().fold(ComplexPoly::zero(), |acc, (i, c)| {
            let term = (&a_pow[i] * &b_pow[n - i]).scale(c.conj());
            &acc + &term
        })
    };
    let p_tilde = homogenize(p.coeffs());
    let q_tilde = homogenize(q.coeffs());
    let shift = ComplexPoly::new(vec![eta.conj(), Complex64::new(1.0, 0.0)])?;
    let full = &p_tilde - &(&shift * &q_tilde);

    let size = p_tilde.max_abs_coeff().max(q_tilde.max_abs_coeff()).max(1e-300);
    if full.max_abs_coeff() <= 1e-13 * size {
        return Err(Error::Degenerate(
            "elimination polynomial vanishes identically (continuum of zeros)".into(),
        ));
    }
    // cancellation in the top coefficients leaves rounding noise, which
    // would otherwise show up as spurious roots near infinity
    Ok(full.trim_relative(1e-14))
}

fn powers(p: &ComplexPoly, n: usize) -> Vec<ComplexPoly> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(ComplexPoly::constant(Complex64::new(1.0, 0.0)));
    for k in 1..=n {
        let next = &out[k - 1] * p;
        out.push(next);
    }
    out
}
