//! Exact arithmetic in the quadratic field ℚ(√N), N a positive integer.
//!
//! Elements are stored as `a + b·√N` with rational `a`, `b`. When `N` is a
//! perfect square the surd part is folded into the rational part on
//! construction, so `b == 0` is always a faithful rationality test.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use rug::float::Round;
use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};
use crate::rational::{format_rational, parse_rational};

#[derive(Debug)]
struct FieldInner {
    radicand: Integer,
    root: Option<Integer>,
}

/// Handle to the field ℚ(√N). Cloning is cheap.
#[derive(Clone, Debug)]
pub struct QuadField(Arc<FieldInner>);

impl QuadField {
    pub fn new(radicand: Integer) -> Self {
        assert!(radicand > 0, "radicand must be positive");
        let root = if radicand.is_perfect_square() {
            Some(radicand.clone().sqrt())
        } else {
            None
        };
        QuadField(Arc::new(FieldInner { radicand, root }))
    }

    pub fn radicand(&self) -> &Integer {
        &self.0.radicand
    }

    /// True when √N is rational (the field degenerates to ℚ).
    pub fn is_degenerate(&self) -> bool {
        self.0.root.is_some()
    }

    pub fn zero(&self) -> QuadExt {
        QuadExt::from_rational(self, Rational::new())
    }

    pub fn one(&self) -> QuadExt {
        QuadExt::from_rational(self, Rational::from(1))
    }

    /// The element √N.
    pub fn sqrt_radicand(&self) -> QuadExt {
        QuadExt::new(self, Rational::new(), Rational::from(1))
    }
}

impl PartialEq for QuadField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.radicand == other.0.radicand
    }
}

impl Eq for QuadField {}

/// An element `rational_part + surd_part·√N` of ℚ(√N).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadExt {
    rational_part: Rational,
    surd_part: Rational,
    field: QuadField,
}

impl QuadExt {
    pub fn new(field: &QuadField, rational_part: Rational, surd_part: Rational) -> Self {
        let (rational_part, surd_part) = match &field.0.root {
            Some(root) if surd_part != 0 => (rational_part + surd_part * root, Rational::new()),
            _ => (rational_part, surd_part),
        };
        QuadExt {
            rational_part,
            surd_part,
            field: field.clone(),
        }
    }

    pub fn from_rational(field: &QuadField, value: Rational) -> Self {
        QuadExt {
            rational_part: value,
            surd_part: Rational::new(),
            field: field.clone(),
        }
    }

    pub fn rational_part(&self) -> &Rational {
        &self.rational_part
    }

    pub fn surd_part(&self) -> &Rational {
        &self.surd_part
    }

    pub fn field(&self) -> &QuadField {
        &self.field
    }

    pub fn radicand(&self) -> &Integer {
        self.field.radicand()
    }

    pub fn is_zero(&self) -> bool {
        self.rational_part == 0 && self.surd_part == 0
    }

    pub fn is_rational(&self) -> bool {
        self.surd_part == 0
    }

    /// The non-trivial automorphism `a + b√N ↦ a − b√N`.
    pub fn conjugate(&self) -> QuadExt {
        QuadExt {
            rational_part: self.rational_part.clone(),
            surd_part: Rational::from(-&self.surd_part),
            field: self.field.clone(),
        }
    }

    /// Field norm `a² − b²N`.
    pub fn norm(&self) -> Rational {
        let a2 = Rational::from(self.rational_part.square_ref());
        let b2 = Rational::from(self.surd_part.square_ref());
        a2 - b2 * self.field.radicand()
    }

    /// Exact sign of the real embedding (with `√N > 0`).
    pub fn signum(&self) -> std::cmp::Ordering {
        use std::cmp::Ordering::*;
        let sa = self.rational_part.cmp0();
        let sb = self.surd_part.cmp0();
        match (sa, sb) {
            (Equal, s) | (s, Equal) => s,
            (Greater, Greater) => Greater,
            (Less, Less) => Less,
            _ => {
                // opposite signs: compare a² with b²N
                let a2 = Rational::from(self.rational_part.square_ref());
                let b2n = Rational::from(self.surd_part.square_ref()) * self.field.radicand();
                match a2.cmp(&b2n) {
                    Greater => sa,
                    Less => sb,
                    Equal => Equal,
                }
            }
        }
    }

    pub fn trace(&self) -> Rational {
        Rational::from(&self.rational_part * 2u32)
    }

    pub fn scale(&self, factor: &Rational) -> QuadExt {
        QuadExt {
            rational_part: Rational::from(&self.rational_part * factor),
            surd_part: Rational::from(&self.surd_part * factor),
            field: self.field.clone(),
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<QuadExt> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm();
        // N non-square ⇒ norm ≠ 0 for non-zero elements; square N keeps b = 0.
        let inv_n = n.recip();
        Some(self.conjugate().scale(&inv_n))
    }

    pub fn checked_div(&self, rhs: &QuadExt) -> Option<QuadExt> {
        rhs.inv().map(|r| self * &r)
    }

    /// Integer power; negative exponents invert (panics on 0⁻ⁿ).
    pub fn pow(&self, exponent: i64) -> QuadExt {
        let mut base = if exponent < 0 {
            self.inv().expect("zero raised to a negative power")
        } else {
            self.clone()
        };
        let mut e = exponent.unsigned_abs();
        let mut acc = self.field.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Real embedding with `√N > 0`, rounded to `prec` bits.
    ///
    /// Returns the value together with an absolute error bound: zero when the
    /// rounding was exact, otherwise two units in the last place.
    pub fn to_real(&self, prec: u32) -> (Float, Float) {
        quad_to_real(self, prec)
    }

    fn assert_same_field(&self, other: &QuadExt) {
        assert!(
            self.field == other.field,
            "mixing ℚ(√{}) and ℚ(√{})",
            self.field.radicand(),
            other.field.radicand()
        );
    }

    /// Parses `a + b*sqrt(N)` (the form produced by `Display`) or a bare rational.
    pub fn parse(text: &str) -> Result<QuadExt> {
        let t = text.trim();
        let Some(pos) = t.find("*sqrt(") else {
            return Err(Error::Parse(format!("missing *sqrt(N) in {t:?}")));
        };
        let radicand: Integer = t[pos + 6..]
            .trim_end()
            .strip_suffix(')')
            .ok_or_else(|| Error::Parse(format!("unterminated sqrt in {t:?}")))?
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad radicand in {t:?}")))?;
        if radicand <= 0 {
            return Err(Error::Parse("radicand must be positive".into()));
        }
        let head = &t[..pos];
        let split = head
            .rfind(" + ")
            .ok_or_else(|| Error::Parse(format!("expected 'a + b*sqrt(N)' in {t:?}")))?;
        let a = parse_rational(&head[..split])?;
        let b = parse_rational(&head[split + 3..])?;
        Ok(QuadExt::new(&QuadField::new(radicand), a, b))
    }
}

/// Rounds `x` to `prec` bits (at least 8). See [`QuadExt::to_real`].
pub fn quad_to_real(x: &QuadExt, prec: u32) -> (Float, Float) {
    let prec = prec.max(8);
    if x.surd_part == 0 {
        let (v, ord) = Float::with_val_round(prec, &x.rational_part, Round::Nearest);
        let bound = if ord == std::cmp::Ordering::Equal {
            Float::new(prec)
        } else {
            two_ulp(&v, prec)
        };
        return (v, bound);
    }
    let wp = prec + 64;
    let root = Float::with_val(wp, x.field.radicand()).sqrt();
    let mut v = Float::with_val(wp, &x.surd_part) * root;
    v += &x.rational_part;
    let v = Float::with_val(prec, &v);
    let bound = two_ulp(&v, prec);
    (v, bound)
}

fn two_ulp(v: &Float, prec: u32) -> Float {
    match v.get_exp() {
        Some(e) => Float::with_val(prec, Float::i_exp(1, e - prec as i32 + 1)),
        None => Float::new(prec),
    }
}

impl fmt::Display for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} + {}*sqrt({})",
            format_rational(&self.rational_part),
            format_rational(&self.surd_part),
            self.field.radicand()
        )
    }
}

impl<'a> Add<&'a QuadExt> for &'a QuadExt {
    type Output = QuadExt;
    fn add(self, rhs: &QuadExt) -> QuadExt {
        self.assert_same_field(rhs);
        QuadExt {
            rational_part: Rational::from(&self.rational_part + &rhs.rational_part),
            surd_part: Rational::from(&self.surd_part + &rhs.surd_part),
            field: self.field.clone(),
        }
    }
}

impl<'a> Sub<&'a QuadExt> for &'a QuadExt {
    type Output = QuadExt;
    fn sub(self, rhs: &QuadExt) -> QuadExt {
        self.assert_same_field(rhs);
        QuadExt {
            rational_part: Rational::from(&self.rational_part - &rhs.rational_part),
            surd_part: Rational::from(&self.surd_part - &rhs.surd_part),
            field: self.field.clone(),
        }
    }
}

impl<'a> Mul<&'a QuadExt> for &'a QuadExt {
    type Output = QuadExt;
    fn mul(self, rhs: &QuadExt) -> QuadExt {
        self.assert_same_field(rhs);
        let (a, b) = (&self.rational_part, &self.surd_part);
        let (c, d) = (&rhs.rational_part, &rhs.surd_part);
        let bd = Rational::from(b * d) * self.field.radicand();
        let rational_part = Rational::from(a * c) + bd;
        let surd_part = Rational::from(a * d) + Rational::from(b * c);
        QuadExt {
            rational_part,
            surd_part,
            field: self.field.clone(),
        }
    }
}

impl Add for QuadExt {
    type Output = QuadExt;
    fn add(self, rhs: QuadExt) -> QuadExt {
        &self + &rhs
    }
}

impl Sub for QuadExt {
    type Output = QuadExt;
    fn sub(self, rhs: QuadExt) -> QuadExt {
        &self - &rhs
    }
}

impl Mul for QuadExt {
    type Output = QuadExt;
    fn mul(self, rhs: QuadExt) -> QuadExt {
        &self * &rhs
    }
}

impl Neg for QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        QuadExt {
            rational_part: -self.rational_part,
            surd_part: -self.surd_part,
            field: self.field,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q5() -> QuadField {
        QuadField::new(Integer::from(5))
    }

    fn el(f: &QuadField, a: (i64, i64), b: (i64, i64)) -> QuadExt {
        QuadExt::new(f, Rational::from(a), Rational::from(b))
    }

    #[test]
    fn conjugate_and_norm() {
        let f = q5();
        let x = el(&f, (1, 1), (2, 1));
        assert_eq!(x.conjugate(), el(&f, (1, 1), (-2, 1)));
        // (1 + 2√5)(1 − 2√5) = 1 − 20
        assert_eq!(x.norm(), -19);
        assert_eq!(
            (&x * &x.conjugate()),
            QuadExt::from_rational(&f, Rational::from(-19))
        );
    }

    #[test]
    fn inverse_round_trip() {
        let f = q5();
        let x = el(&f, (3, 7), (-2, 5));
        assert_eq!(&x * &x.inv().unwrap(), f.one());
        assert!(f.zero().inv().is_none());
        assert_eq!(x.pow(-3), x.pow(3).inv().unwrap());
        assert_eq!(x.pow(0), f.one());
    }

    #[test]
    fn square_radicand_folds() {
        let f = QuadField::new(Integer::from(9));
        let x = el(&f, (1, 1), (1, 2));
        assert!(x.is_rational());
        assert_eq!(x.rational_part(), &Rational::from((5, 2)));
        assert!(f.is_degenerate());
    }

    #[test]
    fn real_embedding() {
        let f = q5();
        let phi = el(&f, (1, 2), (1, 2));
        let (v, bound) = quad_to_real(&phi, 64);
        let exact = (Float::with_val(256, 5).sqrt() + 1u32) / 2u32;
        let err = Float::with_val(256, &v - &exact).abs();
        assert!(err <= bound);
        assert_eq!(bound, Float::with_val(64, Float::i_exp(1, -62)));
        let (half, b) = quad_to_real(&QuadExt::from_rational(&f, Rational::from((3, 2))), 20);
        assert_eq!(half, 1.5);
        assert_eq!(b, 0);
        let (z, b) = quad_to_real(&f.zero(), 64);
        assert_eq!(z, 0);
        assert_eq!(b, 0);
    }

    #[test]
    fn text_round_trip() {
        let f = QuadField::new(Integer::from(8));
        let x = el(&f, (-1, 2), (3, 4));
        let s = x.to_string();
        assert_eq!(s, "-1/2 + 3/4*sqrt(8)");
        assert_eq!(QuadExt::parse(&s).unwrap(), x);
        assert!(QuadExt::parse("1/2").is_err());
    }

    #[test]
    #[should_panic(expected = "mixing")]
    fn mixed_fields_panic() {
        let a = q5().one();
        let b = QuadField::new(Integer::from(2)).one();
        let _ = &a + &b;
    }

    fn small_rational() -> impl Strategy<Value = Rational> {
        (-50i64..50, 1i64..20).prop_map(|(n, d)| Rational::from((n, d)))
    }

    proptest! {
        #[test]
        fn norm_is_multiplicative(a in small_rational(), b in small_rational(),
                                  c in small_rational(), d in small_rational(),
                                  n in 2i64..40) {
            let f = QuadField::new(Integer::from(n));
            let x = QuadExt::new(&f, a, b);
            let y = QuadExt::new(&f, c, d);
            prop_assert_eq!((&x * &y).norm(), x.norm() * y.norm());
        }

        #[test]
        fn conjugation_is_a_homomorphism(a in small_rational(), b in small_rational(),
                                         c in small_rational(), d in small_rational()) {
            let f = q5();
            let x = QuadExt::new(&f, a, b);
            let y = QuadExt::new(&f, c, d);
            prop_assert_eq!((&x * &y).conjugate(), &x.conjugate() * &y.conjugate());
            prop_assert_eq!((&x + &y).conjugate(), &x.conjugate() + &y.conjugate());
        }

        #[test]
        fn display_parse_round_trip(a in small_rational(), b in small_rational(), n in 2i64..40) {
            let f = QuadField::new(Integer::from(n));
            let x = QuadExt::new(&f, a, b);
            prop_assert_eq!(QuadExt::parse(&x.to_string()).unwrap(), x);
        }
    }
}
