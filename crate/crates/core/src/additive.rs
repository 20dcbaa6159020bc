//! Additive characters `f: ℤ → ℂ^*`, determined by their value at 1.

use std::fmt;

use rug::ops::Pow;
use rug::{Complex, Float, Rational};

use crate::error::{Error, Result};
use crate::numeric::{abs_f64, parse_complex, split_complex};
use crate::rational::{format_rational, parse_rational};

/// The generator value `f(1)`, either as an exact Gaussian rational or as a
/// high-precision complex number.
#[derive(Clone, Debug, PartialEq)]
pub enum AdditiveCharacter {
    Exact { re: Rational, im: Rational },
    Approx(Complex),
}

impl AdditiveCharacter {
    pub fn exact(re: Rational, im: Rational) -> Result<Self> {
        if re == 0 && im == 0 {
            return Err(Error::ZeroCharacterValue);
        }
        Ok(AdditiveCharacter::Exact { re, im })
    }

    pub fn rational(value: Rational) -> Result<Self> {
        Self::exact(value, Rational::new())
    }

    pub fn approx(value: Complex) -> Result<Self> {
        if value.is_zero() {
            return Err(Error::ZeroCharacterValue);
        }
        Ok(AdditiveCharacter::Approx(value))
    }

    /// Accepts `-1`, `1/2`, `0.25`, or a complex literal such as `0.6+0.8i`.
    /// Parts written as fractions or plain decimals are kept exact; anything
    /// else (scientific notation) is stored approximately.
    pub fn parse(text: &str, prec: u32) -> Result<Self> {
        let t = text.trim();
        if let Ok(r) = parse_rational(t) {
            return Self::rational(r);
        }
        let (re, im) = split_complex(t)?;
        match (parse_rational(&re), parse_rational(&im)) {
            (Ok(re), Ok(im)) => Self::exact(re, im),
            _ => Self::approx(parse_complex(t, prec)?),
        }
    }

    /// The value as a rational number, when it is one.
    pub fn as_rational(&self) -> Option<Rational> {
        match self {
            AdditiveCharacter::Exact { re, im } if *im == 0 => Some(re.clone()),
            _ => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, AdditiveCharacter::Exact { .. })
    }

    pub fn to_complex(&self, prec: u32) -> Complex {
        match self {
            AdditiveCharacter::Exact { re, im } => Complex::with_val(prec, (re, im)),
            AdditiveCharacter::Approx(z) => Complex::with_val(prec, z),
        }
    }

    pub fn abs_f64(&self) -> f64 {
        abs_f64(&self.to_complex(128))
    }

    /// `f(1)^n`, exact when `f(1)` is a Gaussian rational.
    pub fn pow(&self, n: i64) -> AdditiveCharacter {
        match self {
            AdditiveCharacter::Exact { re, im } => {
                let (re, im) = gaussian_pow(re, im, n);
                AdditiveCharacter::Exact { re, im }
            }
            AdditiveCharacter::Approx(z) => {
                let prec = z.prec().0;
                AdditiveCharacter::Approx(Complex::with_val(prec, z.clone().pow(n as i32)))
            }
        }
    }

    pub fn mul(&self, other: &AdditiveCharacter) -> AdditiveCharacter {
        match (self, other) {
            (
                AdditiveCharacter::Exact { re: a, im: b },
                AdditiveCharacter::Exact { re: c, im: d },
            ) => {
                let (re, im) = gaussian_mul(a, b, c, d);
                AdditiveCharacter::Exact { re, im }
            }
            _ => {
                let prec = self.prec().max(other.prec());
                AdditiveCharacter::Approx(self.to_complex(prec) * other.to_complex(prec))
            }
        }
    }

    fn prec(&self) -> u32 {
        match self {
            AdditiveCharacter::Exact { .. } => 0,
            AdditiveCharacter::Approx(z) => z.prec().0,
        }
    }

    /// `|f(1)| ≤ 1`, decided exactly for Gaussian rationals.
    pub fn abs_at_most_one(&self) -> bool {
        match self {
            AdditiveCharacter::Exact { re, im } => {
                Rational::from(re.square_ref()) + Rational::from(im.square_ref()) <= 1
            }
            AdditiveCharacter::Approx(z) => {
                let n = Float::with_val(z.prec().0, z.norm_ref());
                n <= 1
            }
        }
    }
}

impl fmt::Display for AdditiveCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AdditiveCharacter::Exact { re, im } if *im == 0 => write!(f, "{}", format_rational(re)),
            AdditiveCharacter::Exact { re, im } => {
                write!(f, "{} + {}*i", format_rational(re), format_rational(im))
            }
            AdditiveCharacter::Approx(z) => write!(f, "{z}"),
        }
    }
}

fn gaussian_mul(a: &Rational, b: &Rational, c: &Rational, d: &Rational) -> (Rational, Rational) {
    let re = Rational::from(a * c) - Rational::from(b * d);
    let im = Rational::from(a * d) + Rational::from(b * c);
    (re, im)
}

fn gaussian_pow(re: &Rational, im: &Rational, n: i64) -> (Rational, Rational) {
    let (mut br, mut bi) = if n < 0 {
        let norm = Rational::from(re.square_ref()) + Rational::from(im.square_ref());
        (Rational::from(re / &norm), -Rational::from(im / &norm))
    } else {
        (re.clone(), im.clone())
    };
    let mut e = n.unsigned_abs();
    let (mut ar, mut ai) = (Rational::from(1), Rational::new());
    while e > 0 {
        if e & 1 == 1 {
            (ar, ai) = gaussian_mul(&ar, &ai, &br, &bi);
        }
        (br, bi) = gaussian_mul(&br, &bi, &br, &bi);
        e >>= 1;
    }
    (ar, ai)
}

/// `f(1)^n` as a free function.
pub fn additive_eval(f: &AdditiveCharacter, n: i64) -> AdditiveCharacter {
    f.pow(n)
}

/// An ordered tuple `f_1, …, f_d` with its partial products
/// `g_j = f_j(1)⋯f_d(1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct AdditiveTuple {
    chars: Vec<AdditiveCharacter>,
    partial: Vec<AdditiveCharacter>,
}

impl AdditiveTuple {
    pub fn new(chars: Vec<AdditiveCharacter>) -> Result<Self> {
        if chars.is_empty() {
            return Err(Error::DimensionMismatch("empty additive tuple".into()));
        }
        let mut partial = chars.clone();
        for j in (0..chars.len() - 1).rev() {
            partial[j] = chars[j].mul(&partial[j + 1]);
        }
        Ok(AdditiveTuple { chars, partial })
    }

    pub fn from_rationals(values: &[Rational]) -> Result<Self> {
        Self::new(
            values
                .iter()
                .map(|v| AdditiveCharacter::rational(v.clone()))
                .collect::<Result<_>>()?,
        )
    }

    pub fn parse(items: &[&str], prec: u32) -> Result<Self> {
        Self::new(
            items
                .iter()
                .map(|t| AdditiveCharacter::parse(t, prec))
                .collect::<Result<_>>()?,
        )
    }

    /// The all-ones tuple of depth `d`.
    pub fn trivial(d: usize) -> Self {
        Self::from_rationals(&vec![Rational::from(1); d]).expect("d >= 1")
    }

    pub fn depth(&self) -> usize {
        self.chars.len()
    }

    pub fn chars(&self) -> &[AdditiveCharacter] {
        &self.chars
    }

    /// `f_j`, 1-based.
    pub fn get(&self, j: usize) -> &AdditiveCharacter {
        &self.chars[j - 1]
    }

    /// `g_j = f_j(1)⋯f_d(1)`, 1-based.
    pub fn partial_product(&self, j: usize) -> &AdditiveCharacter {
        &self.partial[j - 1]
    }

    /// Requires `|g_j| ≤ 1` for every `j`.
    pub fn check_bound(&self) -> Result<()> {
        match self.partial.iter().position(|g| !g.abs_at_most_one()) {
            Some(i) => Err(Error::PartialProductBound { index: i + 1 }),
            None => Ok(()),
        }
    }

    /// All `f_i(1)` rational.
    pub fn rational_values(&self) -> Result<Vec<Rational>> {
        self.chars
            .iter()
            .map(|f| {
                f.as_rational()
                    .ok_or_else(|| Error::NonRationalCharacter(f.to_string()))
            })
            .collect()
    }

    /// The leading `k` characters.
    pub fn prefix(&self, k: usize) -> Option<AdditiveTuple> {
        (k >= 1).then(|| AdditiveTuple::new(self.chars[..k].to_vec()).unwrap())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn powers() {
        let minus = AdditiveCharacter::rational(rat(-1, 1)).unwrap();
        assert_eq!(additive_eval(&minus, 7).as_rational(), Some(rat(-1, 1)));
        let half = AdditiveCharacter::rational(rat(1, 2)).unwrap();
        assert_eq!(additive_eval(&half, 3).as_rational(), Some(rat(1, 8)));
        assert_eq!(additive_eval(&half, -2).as_rational(), Some(rat(4, 1)));
        let i = AdditiveCharacter::exact(rat(0, 1), rat(1, 1)).unwrap();
        assert_eq!(additive_eval(&i, 4).as_rational(), Some(rat(1, 1)));
        assert_eq!(
            additive_eval(&i, -1),
            AdditiveCharacter::exact(rat(0, 1), rat(-1, 1)).unwrap()
        );
    }

    #[test]
    fn zero_is_rejected() {
        assert_eq!(
            AdditiveCharacter::rational(Rational::new()),
            Err(Error::ZeroCharacterValue)
        );
    }

    #[test]
    fn parsing() {
        let f = AdditiveCharacter::parse("1/2", 64).unwrap();
        assert_eq!(f.as_rational(), Some(rat(1, 2)));
        let g = AdditiveCharacter::parse("0.6+0.8i", 64).unwrap();
        assert!(g.is_exact());
        assert!(g.abs_at_most_one());
        assert!(AdditiveCharacter::parse("0", 64).is_err());
    }

    #[test]
    fn partial_products() {
        let t = AdditiveTuple::from_rationals(&[rat(2, 1), rat(1, 2)]).unwrap();
        assert_eq!(t.partial_product(1).as_rational(), Some(rat(1, 1)));
        assert_eq!(t.partial_product(2).as_rational(), Some(rat(1, 2)));
        assert!(t.check_bound().is_ok());
        let bad = AdditiveTuple::from_rationals(&[rat(1, 2), rat(2, 1)]).unwrap();
        assert_eq!(
            bad.check_bound(),
            Err(Error::PartialProductBound { index: 2 })
        );
    }
}
