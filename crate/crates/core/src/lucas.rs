//! Lucas sequences of the first kind and their parameter hypotheses.
//!
//! For rational `P`, `Q` the roots of `x² − Px + Q` live in ℚ(√D) with
//! `D = P² − 4Q`. We represent that field with the integer radicand
//! `N = num(D)·den(D)`, so that `√D = √N / den(D)` exactly.

use std::cmp::Ordering;
use std::sync::RwLock;

use rug::float::Constant;
use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};
use crate::quadratic::{QuadExt, QuadField};

/// Number of leading terms on which positivity and monotonicity are checked.
pub const GROWTH_PREFIX: usize = 500;

/// Writes `n = c²·m` pulling out square factors found by trial division.
fn split_square(mut n: Integer) -> (Integer, Integer) {
    let mut c = Integer::from(1);
    if n.is_perfect_square() {
        return (n.sqrt(), Integer::from(1));
    }
    let mut p = 2u32;
    while p < 100_000 && Integer::from(p) * p <= n {
        let pp = p * p;
        while n.is_divisible_u(pp) {
            n /= pp;
            c *= p;
        }
        p += 1;
    }
    (c, n)
}

/// A validated `(P, Q)` pair with derived quantities.
#[derive(Clone, Debug)]
pub struct LucasParams {
    p: Rational,
    q: Rational,
    d: Rational,
    field: QuadField,
    sqrt_d: QuadExt,
    alpha: QuadExt,
    beta: QuadExt,
    d_is_square: bool,
    monotone: bool,
}

impl LucasParams {
    /// Validates `P > 0`, `Q ≠ 0` and the `Q` versus `P − 1` inequality,
    /// then derives `D`, `α`, `β` and checks the growth facts that follow.
    pub fn new(p: Rational, q: Rational) -> Result<Self> {
        if q == 0 {
            return Err(Error::QZero);
        }
        if p <= 0 {
            return Err(Error::NonPositiveP);
        }
        let p_minus_one = Rational::from(&p - 1u32);
        if p <= 2 {
            if q >= p_minus_one {
                return Err(Error::ConstraintViolated(format!(
                    "need Q < P - 1 = {p_minus_one} when 0 < P <= 2"
                )));
            }
        } else if q > p_minus_one {
            return Err(Error::ConstraintViolated(format!(
                "need Q <= P - 1 = {p_minus_one} when P > 2"
            )));
        }

        let d = Rational::from(p.square_ref()) - Rational::from(&q * 4u32);
        debug_assert!(d > 0);
        let (cofactor, radicand) = split_square(Integer::from(d.numer() * d.denom()));
        let field = QuadField::new(radicand);
        let sqrt_d = field
            .sqrt_radicand()
            .scale(&Rational::from((cofactor, d.denom().clone())));
        let half_p = QuadExt::from_rational(&field, Rational::from(&p / 2u32));
        let half_root = sqrt_d.scale(&Rational::from((1, 2)));
        let alpha = &half_p + &half_root;
        let beta = &half_p - &half_root;
        let d_is_square = field.is_degenerate();
        let monotone = q > 0 || p >= 1;

        let params = LucasParams {
            p,
            q,
            d,
            field,
            sqrt_d,
            alpha,
            beta,
            d_is_square,
            monotone,
        };
        params.check_derived()?;
        Ok(params)
    }

    /// Convenience constructor from integer parameters.
    pub fn from_integers(p: i64, q: i64) -> Result<Self> {
        Self::new(Rational::from(p), Rational::from(q))
    }

    fn check_derived(&self) -> Result<()> {
        let one = self.field.one();
        let checks = [
            (
                "alpha > 1",
                (&self.alpha - &one).signum() == Ordering::Greater,
            ),
            (
                "alpha - beta > 0",
                (&self.alpha - &self.beta).signum() == Ordering::Greater,
            ),
            (
                "alpha + beta > 0",
                (&self.alpha + &self.beta).signum() == Ordering::Greater,
            ),
            (
                "alpha * beta = Q",
                &self.alpha * &self.beta == QuadExt::from_rational(&self.field, self.q.clone()),
            ),
        ];
        for (what, ok) in checks {
            if !ok {
                return Err(Error::ConstraintViolated(format!(
                    "derived check failed: {what}"
                )));
            }
        }
        Ok(())
    }

    pub fn p(&self) -> &Rational {
        &self.p
    }

    pub fn q(&self) -> &Rational {
        &self.q
    }

    /// The discriminant `D = P² − 4Q`.
    pub fn d(&self) -> &Rational {
        &self.d
    }

    pub fn field(&self) -> &QuadField {
        &self.field
    }

    /// `√D` as an element of the field.
    pub fn sqrt_d(&self) -> &QuadExt {
        &self.sqrt_d
    }

    pub fn alpha(&self) -> &QuadExt {
        &self.alpha
    }

    pub fn beta(&self) -> &QuadExt {
        &self.beta
    }

    /// Whether `D` is the square of a rational (√D rational).
    pub fn d_is_square(&self) -> bool {
        self.d_is_square
    }

    /// `U_{n+1} ≥ U_n` for all `n ≥ 1`; holds iff `Q > 0` or `P ≥ 1`.
    pub fn is_monotone(&self) -> bool {
        self.monotone
    }

    pub fn q_is_negative(&self) -> bool {
        self.q < 0
    }

    /// `Q = 1` or `Q = −1`.
    pub fn q_is_unit(&self) -> bool {
        self.q == 1 || self.q == -1
    }

    /// `ℓ` for a given k-sum: 0 when `Q > 0`, the k-sum itself when `Q < 0`.
    pub fn ell(&self, k_sum: u64) -> u64 {
        if self.q_is_negative() {
            k_sum
        } else {
            0
        }
    }

    /// Exact `αⁿ`; negative exponents use `α⁻¹ = β/Q`.
    pub fn alpha_power(&self, exponent: i64) -> QuadExt {
        self.alpha.pow(exponent)
    }

    pub fn alpha_real(&self, prec: u32) -> Float {
        let wp = prec + 32;
        Float::with_val(prec, &self.alpha.to_real(wp).0)
    }

    /// `ln α`, computed at the caller's precision (never cached).
    pub fn log_alpha(&self, prec: u32) -> Float {
        let wp = prec + 32;
        let a = self.alpha.to_real(wp).0;
        Float::with_val(prec, a.ln_ref())
    }

    /// `ln |Q|`.
    pub fn log_abs_q(&self, prec: u32) -> Float {
        let wp = prec + 32;
        let q = Float::with_val(wp, Rational::from(self.q.abs_ref()));
        Float::with_val(prec, q.ln_ref())
    }

    /// `ln D`.
    pub fn log_d(&self, prec: u32) -> Float {
        let wp = prec + 32;
        let d = Float::with_val(wp, &self.d);
        Float::with_val(prec, d.ln_ref())
    }

    /// `|β|/α = |Q|/α²`, the geometric ratio of the continuation series.
    pub fn growth_ratio(&self, prec: u32) -> Float {
        let wp = prec + 32;
        let a = self.alpha.to_real(wp).0;
        let q = Float::with_val(wp, Rational::from(self.q.abs_ref()));
        Float::with_val(prec, q / a.square())
    }

    pub fn pi(prec: u32) -> Float {
        Float::with_val(prec, Constant::Pi)
    }

    /// Direct Binet evaluation `(αⁿ − βⁿ)/(α − β)` in the field.
    pub fn binet(&self, n: u32) -> QuadExt {
        let num = &self.alpha.pow(n as i64) - &self.beta.pow(n as i64);
        let den = &self.alpha - &self.beta;
        num.checked_div(&den).expect("alpha != beta")
    }
}

impl PartialEq for LucasParams {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.q == other.q
    }
}

/// `validate_params` as a free function.
pub fn validate_params(p: Rational, q: Rational) -> Result<LucasParams> {
    LucasParams::new(p, q)
}

/// Memoised `U_0, U_1, …` for one parameter pair; safe to share across threads.
#[derive(Debug)]
pub struct LucasSequenceCache {
    params: LucasParams,
    values: RwLock<Vec<Rational>>,
}

impl LucasSequenceCache {
    pub fn new(params: LucasParams) -> Self {
        LucasSequenceCache {
            params,
            values: RwLock::new(vec![Rational::new(), Rational::from(1)]),
        }
    }

    pub fn params(&self) -> &LucasParams {
        &self.params
    }

    /// Exact `U_n` by the recurrence `U_n = P·U_{n−1} − Q·U_{n−2}`.
    pub fn u(&self, n: usize) -> Rational {
        {
            let values = self.values.read().unwrap();
            if let Some(v) = values.get(n) {
                return v.clone();
            }
        }
        let mut values = self.values.write().unwrap();
        while values.len() <= n {
            let k = values.len();
            let next = Rational::from(&self.params.p * &values[k - 1])
                - Rational::from(&self.params.q * &values[k - 2]);
            assert!(next > 0, "U_{k} = {next} is not positive");
            values.push(next);
        }
        values[n].clone()
    }

    /// `U_0..=U_n` in one lock acquisition.
    pub fn prefix(&self, n: usize) -> Vec<Rational> {
        self.u(n);
        self.values.read().unwrap()[..=n].to_vec()
    }

    pub fn len(&self) -> usize {
        self.values.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// `lucas_u` as a free function.
pub fn lucas_u(cache: &LucasSequenceCache, n: usize) -> Rational {
    cache.u(n)
}

/// `alpha_power` as a free function.
pub fn alpha_power(params: &LucasParams, exponent: i64) -> QuadExt {
    params.alpha_power(exponent)
}

/// `galois_conjugate` as a free function.
pub fn galois_conjugate(x: &QuadExt) -> QuadExt {
    x.conjugate()
}

/// Checks `U_n > 0` and (for monotone parameters) `U_{n+1} ≥ U_n` on
/// `1 ≤ n ≤ GROWTH_PREFIX`.
pub fn growth_prefix_holds(cache: &LucasSequenceCache) -> bool {
    let u = cache.prefix(GROWTH_PREFIX + 1);
    let positive = u[1..].iter().all(|x| *x > 0);
    let monotone = !cache.params().is_monotone() || u[1..].windows(2).all(|w| w[1] >= w[0]);
    positive && monotone
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fib() -> LucasParams {
        LucasParams::from_integers(1, -1).unwrap()
    }

    #[test]
    fn fibonacci_parameters() {
        let f = fib();
        assert_eq!(f.d(), &Rational::from(5));
        assert_eq!(f.alpha().to_string(), "1/2 + 1/2*sqrt(5)");
        assert_eq!(f.beta().to_string(), "1/2 + -1/2*sqrt(5)");
        assert!(!f.d_is_square());
        assert!(f.is_monotone());
    }

    #[test]
    fn rejects_bad_parameters() {
        assert_eq!(LucasParams::from_integers(1, 0).unwrap_err(), Error::QZero);
        assert_eq!(
            LucasParams::from_integers(0, -1).unwrap_err(),
            Error::NonPositiveP
        );
        assert!(matches!(
            LucasParams::from_integers(2, 1).unwrap_err(),
            Error::ConstraintViolated(_)
        ));
        // P > 2 admits equality Q = P - 1
        assert!(LucasParams::from_integers(3, 2).is_ok());
        assert!(LucasParams::from_integers(3, 3).is_err());
    }

    #[test]
    fn rational_discriminant() {
        // P = 1/2, Q = -1: D = 17/4, √D = √17/2
        let p = LucasParams::new(Rational::from((1, 2)), Rational::from(-1)).unwrap();
        assert_eq!(p.field().radicand(), &Integer::from(17));
        assert_eq!(
            &p.sqrt_d().pow(2),
            &QuadExt::from_rational(p.field(), Rational::from((17, 4)))
        );
        assert!(!p.is_monotone());
        let c = LucasSequenceCache::new(p);
        assert!(c.u(2) < c.u(1));
        assert!(growth_prefix_holds(&c));
    }

    #[test]
    fn square_discriminant_flagged() {
        let p = LucasParams::from_integers(3, 2).unwrap();
        assert!(p.d_is_square());
        assert_eq!(p.alpha().rational_part(), &Rational::from(2));
    }

    #[test]
    fn sequence_values() {
        let c = LucasSequenceCache::new(fib());
        assert_eq!(lucas_u(&c, 10), 55);
        assert_eq!(lucas_u(&c, 0), 0);
        let m = LucasSequenceCache::new(LucasParams::from_integers(3, 2).unwrap());
        assert_eq!(m.u(5), 31);
        for n in 0..40 {
            assert_eq!(
                m.u(n),
                Rational::from((Integer::from(1) << n as u32) - 1u32)
            );
        }
    }

    #[test]
    fn alpha_powers() {
        let f = fib();
        assert_eq!(alpha_power(&f, 2).to_string(), "3/2 + 1/2*sqrt(5)");
        let inv = alpha_power(&f, -1);
        assert_eq!(inv.to_string(), "-1/2 + 1/2*sqrt(5)");
        assert_eq!(&inv * f.alpha(), f.field().one());
        assert_eq!(alpha_power(&f, 0), f.field().one());
    }

    #[test]
    fn conjugate_of_alpha_is_beta() {
        for (p, q) in [(1, -1), (2, -1), (3, 1), (1, -3), (5, 2)] {
            let params = LucasParams::from_integers(p, q).unwrap();
            assert_eq!(&galois_conjugate(params.alpha()), params.beta());
        }
    }

    #[test]
    fn shared_cache_across_threads() {
        let c = LucasSequenceCache::new(fib());
        std::thread::scope(|s| {
            for t in 0..4 {
                let c = &c;
                s.spawn(move || {
                    for n in (0..200).rev().skip(t) {
                        c.u(n);
                    }
                });
            }
        });
        assert_eq!(c.u(12), 144);
        assert!(c.len() >= 200);
    }

    #[test]
    fn log_alpha_fibonacci() {
        let la = fib().log_alpha(128);
        let expected = Float::with_val(128, 0.481_211_825_059_603_4_f64);
        assert!(Float::with_val(128, &la - &expected).abs() < 1e-15);
    }
}
