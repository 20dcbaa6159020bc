//! Dirichlet characters modulo q, their exact values and Gauss sums.
//!
//! The unit group (ℤ/qℤ)^* is decomposed into cyclic factors through the
//! prime-power factorisation of q; generators are found by brute force, which
//! is fine at the moduli this crate targets (q ≤ 10⁴). A character is an
//! exponent vector on those generators; its values are powers of ζ_φ(q).

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use rug::{Complex, Rational};

use crate::cyclotomic::{gcd, lcm, CyclotomicElement};
use crate::error::{Error, Result};
use crate::numeric::root_of_unity;

/// Cyclic decomposition of (ℤ/qℤ)^* with a discrete-log table.
#[derive(Debug)]
pub struct UnitGroupStructure {
    modulus: u64,
    factors: Vec<(u64, u64)>,
    dlog: HashMap<u64, Vec<u64>>,
}

impl UnitGroupStructure {
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// `(generator, order)` pairs; generators are residues mod q.
    pub fn factors(&self) -> &[(u64, u64)] {
        &self.factors
    }

    pub fn order(&self) -> u64 {
        self.factors.iter().map(|f| f.1).product()
    }

    /// Exponent vector of a unit on the generators.
    pub fn dlog(&self, unit: u64) -> Option<&[u64]> {
        self.dlog.get(&(unit % self.modulus)).map(|v| v.as_slice())
    }
}

pub fn euler_phi(mut n: u64) -> u64 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

fn prime_powers(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        e >>= 1;
    }
    acc
}

fn multiplicative_order(g: u64, m: u64) -> u64 {
    let mut x = g % m;
    let mut k = 1;
    while x != 1 {
        x = mul_mod(x, g, m);
        k += 1;
    }
    k
}

/// The residue mod q that is `g` mod `pe` and 1 mod `q/pe`.
fn crt_lift(g: u64, pe: u64, q: u64) -> u64 {
    let rest = q / pe;
    let mut x = g % pe;
    while x % rest != 1 % rest {
        x += pe;
    }
    x % q
}

/// Decomposes (ℤ/qℤ)^* into cyclic factors.
pub fn unit_group(q: u64) -> UnitGroupStructure {
    assert!(q >= 2, "modulus must be at least 2");
    let mut factors = Vec::new();
    for (p, e) in prime_powers(q) {
        let pe = p.pow(e);
        if p == 2 {
            match e {
                1 => {}
                2 => factors.push((crt_lift(3, pe, q), 2)),
                _ => {
                    factors.push((crt_lift(pe - 1, pe, q), 2));
                    factors.push((crt_lift(5, pe, q), pe / 4));
                }
            }
        } else {
            let phi = pe / p * (p - 1);
            let g = (2..pe)
                .find(|&g| gcd(g, p) == 1 && multiplicative_order(g, pe) == phi)
                .expect("odd prime powers have primitive roots");
            factors.push((crt_lift(g, pe, q), phi));
        }
    }

    let mut dlog = HashMap::new();
    let mut exps = vec![0u64; factors.len()];
    loop {
        let unit = factors.iter().zip(&exps).fold(1 % q, |acc, (&(g, _), &e)| {
            mul_mod(acc, pow_mod(g, e, q), q)
        });
        let prev = dlog.insert(unit, exps.clone());
        assert!(
            prev.is_none(),
            "generators of (Z/{q})^* are not independent"
        );
        if !next_vector(&mut exps, factors.iter().map(|f| f.1)) {
            break;
        }
    }
    debug_assert_eq!(dlog.len() as u64, euler_phi(q));
    UnitGroupStructure {
        modulus: q,
        factors,
        dlog,
    }
}

/// Lexicographic successor in a mixed-radix box; false after the last vector.
fn next_vector(
    v: &mut [u64],
    radices: impl DoubleEndedIterator<Item = u64> + ExactSizeIterator,
) -> bool {
    let radices: Vec<u64> = radices.collect();
    for i in (0..v.len()).rev() {
        v[i] += 1;
        if v[i] < radices[i] {
            return true;
        }
        v[i] = 0;
    }
    false
}

/// A Dirichlet character modulo q.
#[derive(Clone)]
pub struct DirichletCharacter {
    group: Arc<UnitGroupStructure>,
    exponents: Vec<u64>,
    phi: u64,
    /// `values[n]` = `Some(v)` with χ(n) = ζ_φ^v, `None` when gcd(n, q) > 1.
    values: Vec<Option<u64>>,
    index: usize,
}

impl DirichletCharacter {
    fn build(group: Arc<UnitGroupStructure>, exponents: Vec<u64>, index: usize) -> Self {
        let q = group.modulus;
        let phi = group.order();
        let values = (0..q)
            .map(|n| {
                group.dlog(n).map(|e| {
                    group
                        .factors
                        .iter()
                        .zip(e)
                        .zip(&exponents)
                        .map(|((&(_, ord), &en), &a)| a * en % ord * (phi / ord))
                        .sum::<u64>()
                        % phi
                })
            })
            .collect();
        DirichletCharacter {
            group,
            exponents,
            phi,
            values,
            index,
        }
    }

    pub fn modulus(&self) -> u64 {
        self.group.modulus
    }

    /// Position in the [`enumerate_characters`] order.
    pub fn index(&self) -> usize {
        self.index
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    /// φ(q); every value on units is a φ(q)-th root of unity.
    pub fn value_order(&self) -> u64 {
        self.phi
    }

    pub fn group(&self) -> &UnitGroupStructure {
        &self.group
    }

    pub fn is_principal(&self) -> bool {
        self.exponents.iter().all(|&a| a == 0)
    }

    /// `χ(n) = ζ_φ^v`, or `None` off the units.
    pub fn value_exponent(&self, n: i64) -> Option<u64> {
        let q = self.modulus() as i64;
        self.values[n.rem_euclid(q) as usize]
    }

    /// Real-valued (principal or quadratic).
    pub fn is_real(&self) -> bool {
        self.values
            .iter()
            .flatten()
            .all(|&v| (2 * v) % self.phi == 0)
    }

    /// `χ(n) ∈ {−1, 0, 1}` for real characters.
    pub fn real_value(&self, n: i64) -> Option<i64> {
        match self.value_exponent(n) {
            None => Some(0),
            Some(0) => Some(1),
            Some(v) if 2 * v == self.phi => Some(-1),
            Some(_) => None,
        }
    }

    /// Exact value `χ(n)` in ℚ(ζ_φ).
    pub fn value(&self, n: i64) -> CyclotomicElement {
        match self.value_exponent(n) {
            Some(v) => CyclotomicElement::root(self.phi, v as i64),
            None => CyclotomicElement::zero(self.phi),
        }
    }

    pub fn value_complex(&self, n: i64, prec: u32) -> Complex {
        match self.value_exponent(n) {
            Some(v) => root_of_unity(prec, v as i64, self.phi),
            None => Complex::new(prec),
        }
    }

    /// Whether χ descends to modulus `divisor` (is trivial on units ≡ 1 mod it).
    pub fn can_define_mod(&self, divisor: u64) -> Result<bool> {
        let q = self.modulus();
        if divisor == 0 || !q.is_multiple_of(divisor) {
            return Err(Error::DivisibilityError {
                divisor,
                modulus: q,
            });
        }
        Ok((0..q)
            .filter(|u| u % divisor == 1 % divisor)
            .all(|u| matches!(self.value_exponent(u as i64), None | Some(0))))
    }

    /// Not definable modulo any proper divisor of q.
    pub fn is_primitive(&self) -> bool {
        let q = self.modulus();
        (1..q)
            .filter(|d| q.is_multiple_of(*d))
            .all(|d| !self.can_define_mod(d).unwrap())
    }

    /// `τ(χ, n) = Σ_{x mod q} χ(x) ζ_q^{nx}`, exactly, in ℚ(ζ_{lcm(q, φ)}).
    pub fn gauss_sum(&self, n: i64) -> CyclotomicElement {
        let q = self.modulus();
        let order = lcm(q, self.phi);
        let (sq, sphi) = ((order / q) as i64, (order / self.phi) as i64);
        let mut tau = CyclotomicElement::zero(order);
        let one = Rational::from(1);
        for x in 0..q as i64 {
            if let Some(v) = self.value_exponent(x) {
                tau.add_term(v as i64 * sphi + n.rem_euclid(q as i64) * x * sq, &one);
            }
        }
        tau
    }

    /// Label in the CLI addressing scheme.
    pub fn label(&self) -> String {
        format!("{}:{}", self.modulus(), self.index)
    }
}

impl fmt::Debug for DirichletCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DirichletCharacter")
            .field("modulus", &self.modulus())
            .field("index", &self.index)
            .field("exponents", &self.exponents)
            .finish()
    }
}

impl PartialEq for DirichletCharacter {
    fn eq(&self, other: &Self) -> bool {
        self.modulus() == other.modulus() && self.exponents == other.exponents
    }
}

/// All φ(q) characters mod q: principal first, then lexicographic exponent vectors.
pub fn enumerate_characters(q: u64) -> Vec<DirichletCharacter> {
    let group = Arc::new(unit_group(q));
    let radices: Vec<u64> = group.factors.iter().map(|f| f.1).collect();
    let mut exps = vec![0u64; radices.len()];
    let mut out = Vec::new();
    loop {
        out.push(DirichletCharacter::build(
            group.clone(),
            exps.clone(),
            out.len(),
        ));
        if !next_vector(&mut exps, radices.iter().copied()) {
            break;
        }
    }
    out
}

/// Resolves `q:index` or `q:quadratic`.
pub fn character_by_label(label: &str) -> Result<DirichletCharacter> {
    let (q, which) = label
        .split_once(':')
        .ok_or_else(|| Error::Parse(format!("expected q:index or q:quadratic, got {label:?}")))?;
    let q: u64 = q
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad modulus in {label:?}")))?;
    if q < 2 {
        return Err(Error::InvalidArgument("modulus must be at least 2".into()));
    }
    let mut all = enumerate_characters(q);
    if which.trim() == "quadratic" {
        let mut quad: Vec<_> = all
            .into_iter()
            .filter(|c| !c.is_principal() && c.is_real())
            .collect();
        return match quad.len() {
            1 => Ok(quad.pop().unwrap()),
            0 => Err(Error::InvalidArgument(format!(
                "no quadratic character mod {q}"
            ))),
            n => Err(Error::InvalidArgument(format!(
                "{n} quadratic characters mod {q}; address one by index"
            ))),
        };
    }
    let idx: usize = which
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad character index in {label:?}")))?;
    if idx >= all.len() {
        return Err(Error::InvalidArgument(format!(
            "index {idx} out of range: {} characters mod {q}",
            all.len()
        )));
    }
    Ok(all.swap_remove(idx))
}

/// Free-function form of [`DirichletCharacter::value`].
pub fn char_value(chi: &DirichletCharacter, n: i64) -> CyclotomicElement {
    chi.value(n)
}

/// Free-function form of [`DirichletCharacter::gauss_sum`].
pub fn gauss_sum(chi: &DirichletCharacter, n: i64) -> CyclotomicElement {
    chi.gauss_sum(n)
}

/// `(predicted, actual)`: predicted = χ cannot be defined mod q/gcd(a, q);
/// actual = τ(χ, a) vanishes exactly. Only predicted ⇒ actual is claimed.
pub fn gauss_vanishing_check(chi: &DirichletCharacter, a: i64) -> (bool, bool) {
    let q = chi.modulus();
    let g = gcd(a.unsigned_abs(), q);
    let predicted = !chi.can_define_mod(q / g).expect("q/g divides q");
    let actual = chi.gauss_sum(a).is_zero();
    (predicted, actual)
}

/// Checks that a tuple of characters shares one modulus and returns it.
pub fn common_modulus(chars: &[DirichletCharacter]) -> Result<u64> {
    let q = chars
        .first()
        .ok_or_else(|| Error::DimensionMismatch("empty character tuple".into()))?
        .modulus();
    if chars.iter().any(|c| c.modulus() != q) {
        return Err(Error::MixedModuli);
    }
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_group_shapes() {
        let g5 = unit_group(5);
        assert_eq!(g5.factors(), &[(2, 4)]);
        let g8 = unit_group(8);
        assert_eq!(
            g8.factors().iter().map(|f| f.1).collect::<Vec<_>>(),
            vec![2, 2]
        );
        assert!(unit_group(2).factors().is_empty());
        for q in 2..200 {
            let g = unit_group(q);
            assert_eq!(g.order(), euler_phi(q), "q = {q}");
        }
    }

    #[test]
    fn unit_group_q8_by_enumeration() {
        // every unit mod 8 squares to 1, so no element of order 4 exists
        for u in [1u64, 3, 5, 7] {
            assert_eq!(u * u % 8, 1);
        }
        let g = unit_group(8);
        for u in [1u64, 3, 5, 7] {
            assert!(g.dlog(u).is_some());
        }
        assert!(g.dlog(2).is_none());
    }

    #[test]
    fn character_counts() {
        assert_eq!(enumerate_characters(5).len(), 4);
        assert_eq!(enumerate_characters(2).len(), 1);
        assert!(enumerate_characters(2)[0].is_principal());
        let four = enumerate_characters(4);
        assert_eq!(four.len(), 2);
        assert!(four[0].is_principal());
        assert_eq!(four[1].real_value(3), Some(-1));
        assert_eq!(four[1].real_value(1), Some(1));
    }

    #[test]
    fn values() {
        let quad5 = character_by_label("5:quadratic").unwrap();
        assert_eq!(
            char_value(&quad5, 2).as_rational(),
            Some(Rational::from(-1))
        );
        assert_eq!(char_value(&quad5, 4).as_rational(), Some(Rational::from(1)));
        for chi in enumerate_characters(4) {
            assert!(char_value(&chi, 2).is_zero());
            assert_eq!(char_value(&chi, 1).as_rational(), Some(Rational::from(1)));
        }
        assert!(character_by_label("8:quadratic").is_err());
        assert!(character_by_label("5:9").is_err());
        assert_eq!(character_by_label("7:3").unwrap().label(), "7:3");
    }

    #[test]
    fn descent() {
        let principal6 = &enumerate_characters(6)[0];
        assert!(principal6.can_define_mod(1).unwrap());
        let chi4 = &enumerate_characters(4)[1];
        assert!(!chi4.can_define_mod(2).unwrap());
        assert!(chi4.can_define_mod(4).unwrap());
        assert!(matches!(
            chi4.can_define_mod(3),
            Err(Error::DivisibilityError {
                divisor: 3,
                modulus: 4
            })
        ));
        assert!(chi4.is_primitive());
    }

    #[test]
    fn gauss_sums() {
        let quad5 = character_by_label("5:quadratic").unwrap();
        let tau = gauss_sum(&quad5, 1);
        assert_eq!(tau.mul(&tau).as_rational(), Some(Rational::from(5)));
        let chi4 = &enumerate_characters(4)[1];
        assert!(gauss_sum(chi4, 2).is_zero());
        for q in 3..12 {
            for chi in enumerate_characters(q)
                .into_iter()
                .filter(|c| !c.is_principal())
            {
                assert!(gauss_sum(&chi, 0).is_zero());
            }
        }
    }

    #[test]
    fn vanishing_check_examples() {
        let chi4 = &enumerate_characters(4)[1];
        assert_eq!(gauss_vanishing_check(chi4, 2), (true, true));
        let quad5 = character_by_label("5:quadratic").unwrap();
        assert_eq!(gauss_vanishing_check(&quad5, 2), (false, false));
        let principal = &enumerate_characters(6)[0];
        let (pred, _) = gauss_vanishing_check(principal, 6);
        assert!(!pred);
    }
}
