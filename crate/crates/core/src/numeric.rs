//! Multiprecision complex helpers shared by the evaluators.

use rug::float::Constant;
use rug::{Complex, Float};

use crate::error::{Error, Result};

/// Arbitrary-precision complex number; the carrier of all approximate values.
pub type ComplexValue = Complex;

/// Extra bits carried internally on top of the caller's precision.
pub const GUARD_BITS: u32 = 64;

pub fn zero(prec: u32) -> Complex {
    Complex::new(prec)
}

pub fn one(prec: u32) -> Complex {
    Complex::with_val(prec, 1)
}

pub fn from_f64(prec: u32, re: f64, im: f64) -> Complex {
    Complex::with_val(prec, (re, im))
}

pub fn abs_f64(z: &Complex) -> f64 {
    Float::with_val(53, z.abs_ref()).to_f64()
}

pub fn pi(prec: u32) -> Float {
    Float::with_val(prec, Constant::Pi)
}

/// `e^{2πi·k/n}`.
pub fn root_of_unity(prec: u32, k: i64, n: u64) -> Complex {
    let n = n as i64;
    let k = k.rem_euclid(n);
    let mut theta = pi(prec + 16) * 2u32;
    theta *= k;
    theta /= n;
    let (s, c) = theta.sin_cos(Float::new(prec + 16));
    Complex::with_val(prec, (c, s))
}

/// `e^z − 1` without cancellation for small `z`.
pub fn expm1(z: &Complex) -> Complex {
    let prec = z.prec().0;
    let x = z.real();
    let y = z.imag();
    let em1 = Float::with_val(prec, x.exp_m1_ref());
    let ex = Float::with_val(prec, x.exp_ref());
    let (sin_y, cos_y) = Float::with_val(prec, y).sin_cos(Float::new(prec));
    let half = Float::with_val(prec, y / 2u32);
    let sin_half = Float::with_val(prec, half.sin_ref());
    // Re = (e^x − 1)cos y − 2 sin²(y/2)
    let re =
        Float::with_val(prec, &em1 * &cos_y) - Float::with_val(prec, sin_half.square_ref()) * 2u32;
    let im = ex * sin_y;
    Complex::with_val(prec, (re, im))
}

/// `1 − sign·e^z` with `sign = ±1`, stable near the zeros of the expression.
pub fn one_minus_signed_exp(z: &Complex, negative: bool) -> Complex {
    if negative {
        let e = Complex::with_val(z.prec(), z.exp_ref());
        e + 1u32
    } else {
        -expm1(z)
    }
}

/// Formats a float as a decimal string that parses back to the same value.
pub fn format_float(x: &Float) -> String {
    if x.is_zero() {
        return "0".into();
    }
    x.to_string_radix(10, None)
}

pub fn parse_float(text: &str, prec: u32) -> Result<Float> {
    let parsed = Float::parse(text.trim()).map_err(|e| Error::Parse(format!("{text:?}: {e}")))?;
    Ok(Float::with_val(prec, parsed))
}

/// Splits `a`, `bi`, `a+bi`, `a-bi` into real and imaginary literals
/// (`i` alone counts as `1i`).
pub fn split_complex(text: &str) -> Result<(String, String)> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err(Error::Parse("empty complex number".into()));
    }
    let Some(body) = t.strip_suffix('i') else {
        return Ok((t, "0".into()));
    };
    // locate the sign separating real and imaginary parts
    let bytes = body.as_bytes();
    let mut split = None;
    for idx in (1..bytes.len()).rev() {
        let c = bytes[idx];
        if (c == b'+' || c == b'-') && !matches!(bytes[idx - 1], b'e' | b'E') {
            split = Some(idx);
            break;
        }
    }
    let (re_txt, im_txt) = match split {
        Some(idx) => (&body[..idx], &body[idx..]),
        None => ("0", body),
    };
    let im_txt = match im_txt {
        "" | "+" => "1",
        "-" => "-1",
        other => other,
    };
    Ok((re_txt.into(), im_txt.into()))
}

/// Parses `a`, `bi`, `a+bi`, `a-bi` (decimal or scientific parts, `i` alone allowed).
pub fn parse_complex(text: &str, prec: u32) -> Result<Complex> {
    let (re, im) = split_complex(text)?;
    Ok(Complex::with_val(
        prec,
        (parse_float(&re, prec)?, parse_float(&im, prec)?),
    ))
}

/// A point `(s_1, …, s_d)` of ℂ^d.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiComplexPoint {
    coords: Vec<Complex>,
}

impl MultiComplexPoint {
    pub fn new(coords: Vec<Complex>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::DimensionMismatch("depth must be at least 1".into()));
        }
        Ok(MultiComplexPoint { coords })
    }

    pub fn from_f64(prec: u32, coords: &[(f64, f64)]) -> Result<Self> {
        Self::new(coords.iter().map(|&(r, i)| from_f64(prec, r, i)).collect())
    }

    pub fn parse(items: &[&str], prec: u32) -> Result<Self> {
        Self::new(
            items
                .iter()
                .map(|s| parse_complex(s, prec))
                .collect::<Result<_>>()?,
        )
    }

    pub fn depth(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Complex] {
        &self.coords
    }

    /// `s_j`, 1-based.
    pub fn get(&self, j: usize) -> &Complex {
        &self.coords[j - 1]
    }

    pub fn set(&mut self, j: usize, value: Complex) {
        self.coords[j - 1] = value;
    }

    /// `s_d(j) = s_j + ⋯ + s_d` for `1 ≤ j ≤ d + 1` (zero at `d + 1`).
    pub fn suffix(&self, j: usize, prec: u32) -> Complex {
        let mut acc = zero(prec);
        for z in &self.coords[j - 1..] {
            acc += z;
        }
        acc
    }

    /// Real parts of all suffix sums, as `f64`, indexed from `j = 1`.
    pub fn suffix_real_parts(&self) -> Vec<f64> {
        let d = self.depth();
        let mut out = vec![0.0; d];
        let mut acc = 0.0;
        for j in (0..d).rev() {
            acc += self.coords[j].real().to_f64();
            out[j] = acc;
        }
        out
    }

    /// Leading `k` coordinates as a new point.
    pub fn prefix(&self, k: usize) -> Option<MultiComplexPoint> {
        (k >= 1).then(|| MultiComplexPoint {
            coords: self.coords[..k].to_vec(),
        })
    }

    pub fn with_prec(&self, prec: u32) -> MultiComplexPoint {
        MultiComplexPoint {
            coords: self
                .coords
                .iter()
                .map(|z| Complex::with_val(prec, z))
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_parsing() {
        let p = 64;
        assert_eq!(parse_complex("2", p).unwrap(), Complex::with_val(p, (2, 0)));
        assert_eq!(
            parse_complex("2.5-0.5i", p).unwrap(),
            Complex::with_val(p, (2.5, -0.5))
        );
        assert_eq!(
            parse_complex("-i", p).unwrap(),
            Complex::with_val(p, (0, -1))
        );
        assert_eq!(
            parse_complex("0.25i", p).unwrap(),
            Complex::with_val(p, (0, 0.25))
        );
        let expected = Complex::with_val(p, (parse_float("1e-2", p).unwrap(), 30));
        assert_eq!(parse_complex("1e-2+3E1i", p).unwrap(), expected);
        assert!(parse_complex("abc", p).is_err());
    }

    #[test]
    fn float_text_round_trip() {
        let x = Float::with_val(128, 2).sqrt() / 7u32;
        let s = format_float(&x);
        assert_eq!(parse_float(&s, 128).unwrap(), x);
        assert_eq!(format_float(&Float::new(64)), "0");
    }

    #[test]
    fn expm1_small_argument() {
        let z = from_f64(128, 1e-30, -2e-30);
        let e = expm1(&z);
        assert!((e.real().to_f64() - 1e-30).abs() < 1e-45);
        assert!((e.imag().to_f64() + 2e-30).abs() < 1e-45);
        let w = from_f64(128, 0.7, 2.1);
        let direct = Complex::with_val(128, w.exp_ref()) - 1u32;
        assert!(abs_f64(&(expm1(&w) - direct)) < 1e-35);
    }

    #[test]
    fn suffix_sums() {
        let s = MultiComplexPoint::from_f64(64, &[(-1.0, 0.5), (2.0, 0.0)]).unwrap();
        assert_eq!(s.suffix(1, 64), from_f64(64, 1.0, 0.5));
        assert_eq!(s.suffix(2, 64), from_f64(64, 2.0, 0.0));
        assert_eq!(s.suffix(3, 64), zero(64));
        assert_eq!(s.suffix_real_parts(), vec![1.0, 2.0]);
    }

    #[test]
    fn roots_of_unity() {
        let z = root_of_unity(128, 1, 4);
        assert!(abs_f64(&(z - from_f64(128, 0.0, 1.0))) < 1e-35);
        let w = root_of_unity(128, -3, 4);
        assert!(abs_f64(&(w - from_f64(128, 0.0, 1.0))) < 1e-35);
    }
}
