//! Command-line value parsers.

use num_complex::Complex64;

/// Parses `a+bi`, `a-bi`, `a`, `bi`, `i` and `-i` (no spaces).
pub fn complex(text: &str) -> Result<Complex64, String> {
    let s = text.trim();
    if s.is_empty() {
        return Err("empty complex number".into());
    }
    if s.contains(char::is_whitespace) {
        return Err(format!("`{s}`: complex numbers are written without spaces, e.g. 0.5-1.2i"));
    }
    let real = |t: &str| match t.parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(x),
        _ => Err(format!("`{text}` is not a finite complex number of the form a+bi")),
    };
    let Some(body) = s.strip_suffix('i') else {
        return Ok(Complex64::new(real(s)?, 0.0));
    };
    // the sign that separates the parts is the last one not in an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (real(&body[..k])?, &body[k..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        t => real(t)?,
    };
    Ok(Complex64::new(re, im))
}

/// Vertices of a polygonal path.
#[derive(Debug, Clone)]
pub struct Vertices(pub Vec<Complex64>);

/// Comma-separated list of complex numbers.
pub fn complex_list(text: &str) -> Result<Vertices, String> {
    text.split(',').map(complex).collect::<Result<_, _>>().map(Vertices)
}

/// `re_min,re_max,im_min,im_max`.
pub fn rect(text: &str) -> Result<[f64; 4], String> {
    let parts: Vec<f64> = text
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| format!("`{t}` is not a number")))
        .collect::<Result<_, _>>()?;
    let [a, b, c, d] = parts[..] else {
        return Err(format!("expected re_min,re_max,im_min,im_max, got {} values", parts.len()));
    };
    if !(a < b && c < d) {
        return Err("rectangle must satisfy re_min < re_max and im_min < im_max".into());
    }
    Ok([a, b, c, d])
}
