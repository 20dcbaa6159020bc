//! Canonical text form of rationals: `num/den` in lowest terms, `den >= 1`.

use rug::{Integer, Rational};

use crate::error::{Error, Result};

/// Formats `x` as `num/den`; integers keep the explicit `/1`.
pub fn format_rational(x: &Rational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Parses `n`, `n/d` or a finite decimal such as `-0.25`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let t = text.trim();
    if t.is_empty() {
        return Err(Error::Parse("empty rational".into()));
    }
    if let Some((n, d)) = t.split_once('/') {
        let n: Integer = n
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad numerator in {t:?}")))?;
        let d: Integer = d
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad denominator in {t:?}")))?;
        if d == 0 {
            return Err(Error::Parse(format!("zero denominator in {t:?}")));
        }
        return Ok(Rational::from((n, d)));
    }
    if let Some((int_part, frac_part)) = t.split_once('.') {
        let negative = int_part.starts_with('-');
        let digits = format!("{}{}", int_part.trim_start_matches(['-', '+']), frac_part);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::Parse(format!("bad decimal {t:?}")));
        }
        let mut n: Integer = digits.parse().unwrap();
        if negative {
            n = -n;
        }
        let den = Integer::from(Integer::u_pow_u(10, frac_part.len() as u32));
        return Ok(Rational::from((n, den)));
    }
    let n: Integer = t
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational {t:?}")))?;
    Ok(Rational::from(n))
}

/// Exact binomial coefficient C(n, k) for small non-negative arguments.
pub fn binomial(n: u32, k: u32) -> Integer {
    if k > n {
        return Integer::new();
    }
    Integer::from(Integer::binomial_u(n, k))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form() {
        assert_eq!(format_rational(&Rational::from((6, -4))), "-3/2");
        assert_eq!(format_rational(&Rational::new()), "0/1");
        assert_eq!(format_rational(&Rational::from(7)), "7/1");
    }

    #[test]
    fn parses_all_forms() {
        assert_eq!(parse_rational("-3/6").unwrap(), Rational::from((-1, 2)));
        assert_eq!(parse_rational("4").unwrap(), Rational::from(4));
        assert_eq!(parse_rational("-0.25").unwrap(), Rational::from((-1, 4)));
        assert_eq!(parse_rational(" 1.5 ").unwrap(), Rational::from((3, 2)));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(3, 4), 0);
        assert_eq!(binomial(0, 0), 1);
    }
}
