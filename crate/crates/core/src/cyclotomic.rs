//! Exact arithmetic in ℚ(ζ_N).
//!
//! An element is a coefficient vector on `1, ζ_N, …, ζ_N^{N−1}`, reduced only
//! by `ζ_N^N = 1`. That basis is redundant, so equality and zero tests first
//! reduce modulo the N-th cyclotomic polynomial.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use rug::{Complex, Integer, Rational};

use crate::numeric::root_of_unity;

#[derive(Clone, Debug)]
pub struct CyclotomicElement {
    order: u64,
    coeffs: Vec<Rational>,
}

impl CyclotomicElement {
    pub fn zero(order: u64) -> Self {
        assert!(order >= 1);
        CyclotomicElement {
            order,
            coeffs: vec![Rational::new(); order as usize],
        }
    }

    pub fn from_rational(order: u64, value: Rational) -> Self {
        let mut z = Self::zero(order);
        z.coeffs[0] = value;
        z
    }

    pub fn one(order: u64) -> Self {
        Self::from_rational(order, Rational::from(1))
    }

    /// `ζ_N^k` for any integer `k`.
    pub fn root(order: u64, k: i64) -> Self {
        let mut z = Self::zero(order);
        z.coeffs[k.rem_euclid(order as i64) as usize] = Rational::from(1);
        z
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Adds `c·ζ_N^k` in place.
    pub fn add_term(&mut self, k: i64, c: &Rational) {
        let idx = k.rem_euclid(self.order as i64) as usize;
        self.coeffs[idx] += c;
    }

    /// Re-expresses the element in ℚ(ζ_M) for a multiple `M` of the order.
    pub fn lift(&self, order: u64) -> Self {
        assert!(
            order.is_multiple_of(self.order),
            "{order} is not a multiple of {}",
            self.order
        );
        let step = order / self.order;
        let mut out = Self::zero(order);
        for (k, c) in self.coeffs.iter().enumerate() {
            if *c != 0 {
                out.coeffs[k * step as usize] = c.clone();
            }
        }
        out
    }

    fn common(&self, other: &Self) -> (Self, Self) {
        if self.order == other.order {
            return (self.clone(), other.clone());
        }
        let m = lcm(self.order, other.order);
        (self.lift(m), other.lift(m))
    }

    pub fn add(&self, other: &Self) -> Self {
        let (mut a, b) = self.common(other);
        for (x, y) in a.coeffs.iter_mut().zip(&b.coeffs) {
            *x += y;
        }
        a
    }

    pub fn sub(&self, other: &Self) -> Self {
        let (mut a, b) = self.common(other);
        for (x, y) in a.coeffs.iter_mut().zip(&b.coeffs) {
            *x -= y;
        }
        a
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = self.common(other);
        let n = a.order as usize;
        let mut out = Self::zero(a.order);
        for (i, x) in a.coeffs.iter().enumerate().filter(|(_, x)| **x != 0) {
            for (j, y) in b.coeffs.iter().enumerate().filter(|(_, y)| **y != 0) {
                out.coeffs[(i + j) % n] += Rational::from(x * y);
            }
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        CyclotomicElement {
            order: self.order,
            coeffs: self.coeffs.iter().map(|x| Rational::from(x * c)).collect(),
        }
    }

    /// Complex conjugation `ζ ↦ ζ⁻¹`.
    pub fn conj(&self) -> Self {
        let n = self.order as usize;
        let mut out = Self::zero(self.order);
        for (k, c) in self.coeffs.iter().enumerate() {
            out.coeffs[(n - k) % n] = c.clone();
        }
        out
    }

    /// Canonical remainder modulo `Φ_N`, of length `φ(N)`.
    pub fn reduced(&self) -> Vec<Rational> {
        let phi = cyclotomic_polynomial(self.order);
        let m = phi.len() - 1;
        let mut r = self.coeffs.clone();
        let nonzero: Vec<(usize, &Integer)> =
            phi.iter().enumerate().filter(|(_, c)| **c != 0).collect();
        for i in (m..r.len()).rev() {
            if r[i] == 0 {
                continue;
            }
            let c = std::mem::take(&mut r[i]);
            for &(j, pj) in &nonzero {
                if j == m {
                    continue;
                }
                r[i - m + j] -= Rational::from(&c * pj);
            }
        }
        r.truncate(m);
        r
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == 0) || self.reduced().iter().all(|c| *c == 0)
    }

    /// The rational value, if the element lies in ℚ.
    pub fn as_rational(&self) -> Option<Rational> {
        let r = self.reduced();
        r.iter()
            .skip(1)
            .all(|c| *c == 0)
            .then(|| r.first().cloned().unwrap_or_default())
    }

    pub fn to_complex(&self, prec: u32) -> Complex {
        let wp = prec + 16;
        let mut acc = Complex::new(wp);
        for (k, c) in self.coeffs.iter().enumerate().filter(|(_, c)| **c != 0) {
            let z = root_of_unity(wp, k as i64, self.order);
            acc += z * c;
        }
        Complex::with_val(prec, acc)
    }
}

impl PartialEq for CyclotomicElement {
    fn eq(&self, other: &Self) -> bool {
        self.sub(other).is_zero()
    }
}

impl fmt::Display for CyclotomicElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().filter(|(_, c)| **c != 0) {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}/{}*z{}^{}", c.numer(), c.denom(), self.order, k)?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// Coefficients (constant first) of the N-th cyclotomic polynomial.
pub fn cyclotomic_polynomial(n: u64) -> Vec<Integer> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Vec<Integer>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return p.clone();
    }
    // x^N − 1 divided by Φ_d for every proper divisor d
    let mut num = vec![Integer::new(); n as usize + 1];
    num[0] = Integer::from(-1);
    num[n as usize] = Integer::from(1);
    for d in (1..n).filter(|d| n.is_multiple_of(*d)) {
        num = poly_div_exact(&num, &cyclotomic_polynomial(d));
    }
    cache.lock().unwrap().insert(n, num.clone());
    num
}

fn poly_div_exact(num: &[Integer], den: &[Integer]) -> Vec<Integer> {
    let m = den.len() - 1;
    let mut r = num.to_vec();
    let mut quot = vec![Integer::new(); num.len() - m];
    for i in (m..r.len()).rev() {
        let c = r[i].clone();
        if c == 0 {
            continue;
        }
        quot[i - m] = c.clone();
        for (j, dj) in den.iter().enumerate() {
            r[i - m + j] -= Integer::from(&c * dj);
        }
    }
    debug_assert!(r.iter().all(|c| *c == 0));
    quot
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<Integer> {
        v.iter().map(|&x| Integer::from(x)).collect()
    }

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), ints(&[-1, 1]));
        assert_eq!(cyclotomic_polynomial(4), ints(&[1, 0, 1]));
        assert_eq!(cyclotomic_polynomial(6), ints(&[1, -1, 1]));
        assert_eq!(cyclotomic_polynomial(12), ints(&[1, 0, -1, 0, 1]));
        assert_eq!(cyclotomic_polynomial(7).len(), 7);
        // Φ_105 is the first with a coefficient outside {-1, 0, 1}
        assert!(cyclotomic_polynomial(105).iter().any(|c| *c == -2));
    }

    #[test]
    fn sum_of_all_roots_vanishes() {
        for n in 2..30u64 {
            let mut s = CyclotomicElement::zero(n);
            for k in 0..n as i64 {
                s.add_term(k, &Rational::from(1));
            }
            assert!(s.is_zero(), "n = {n}");
            assert!(!CyclotomicElement::root(n, 1).is_zero());
        }
    }

    #[test]
    fn lifting_and_mixed_orders() {
        // ζ_4 = ζ_12^3, and i·i = −1
        let i4 = CyclotomicElement::root(4, 1);
        let i12 = CyclotomicElement::root(12, 3);
        assert_eq!(i4, i12);
        assert_eq!(i4.mul(&i12).as_rational(), Some(Rational::from(-1)));
        // ζ_3 + ζ_3² = −1
        let w = CyclotomicElement::root(3, 1).add(&CyclotomicElement::root(3, 2));
        assert_eq!(w.as_rational(), Some(Rational::from(-1)));
    }

    #[test]
    fn embedding_is_multiplicative() {
        let a = CyclotomicElement::root(5, 1)
            .add(&CyclotomicElement::from_rational(5, Rational::from((1, 3))));
        let b = CyclotomicElement::root(5, 3).scale(&Rational::from(-2));
        let prod = a.mul(&b).to_complex(128);
        let direct = a.to_complex(128) * b.to_complex(128);
        assert!(crate::numeric::abs_f64(&(prod - direct)) < 1e-30);
    }

    #[test]
    fn conj_times_self_is_real() {
        let a = CyclotomicElement::root(7, 2)
            .add(&CyclotomicElement::root(7, 5).scale(&Rational::from(3)));
        let n = a.mul(&a.conj());
        let v = n.to_complex(128);
        assert!(v.imag().to_f64().abs() < 1e-30);
    }
}
