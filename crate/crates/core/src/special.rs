//! Exact special values at negative integers.
//!
//! At `s = −m` every binomial `C(−s_j, k)` becomes `C(m_j, k)`, which
//! vanishes for `k > m_j`, so the continued series collapses to the finite
//! sum
//!
//! ```text
//! ζ(−m | r) = D^{−m_d(1)/2} Σ_{0 ≤ k_t ≤ m_t} ∏_j C(m_j,k_j) γ_j(k; r_j),
//! γ_j(k; r_j) = (−1)^{k_j} Q^{r_j K_j} α^{r_j(m_d(j) − 2K_j)} / (1 − Q^{q K_j} α^{q(m_d(j) − 2K_j)}),
//! ```
//!
//! with `K_j = k_j + ⋯ + k_d`. Every factor lies in ℚ(√D). The conjugation
//! `α ↦ β = Q/α` sends `K_j` to `m_d(j) − K_j`, that is `k` to its fully
//! barred tuple `k̄_t = m_t − k_t`, which is what makes the value rational.
//!
//! Values are stored with `D^{−M/2}` absorbed: `D^{−M/2}` itself when `M` is
//! even, `D^{−(M+1)/2}·√D` when `M` is odd.

use std::collections::HashMap;
use std::fmt;

use rug::ops::Pow;
use rug::{Integer, Rational};

use crate::additive::AdditiveTuple;
use crate::characters::DirichletCharacter;
use crate::continuation::decomposition_terms;
use crate::error::{Error, Result};
use crate::lucas::LucasParams;
use crate::quadratic::QuadExt;
use crate::rational::binomial;
use crate::series::ShiftSpec;

/// A point `s = (−m_1, …, −m_d)` with every `m_i ≥ 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NegIntPoint {
    m: Vec<u32>,
}

impl NegIntPoint {
    pub fn new(m: Vec<u32>) -> Result<Self> {
        if m.is_empty() {
            return Err(Error::DimensionMismatch("empty point".into()));
        }
        if m.contains(&0) {
            return Err(Error::InvalidArgument(
                "every m_i must be at least 1".into(),
            ));
        }
        Ok(NegIntPoint { m })
    }

    pub fn depth(&self) -> usize {
        self.m.len()
    }

    pub fn values(&self) -> &[u32] {
        &self.m
    }

    /// `m_j`, 1-based.
    pub fn m(&self, j: usize) -> u32 {
        self.m[j - 1]
    }

    /// `m_d(j) = m_j + ⋯ + m_d`.
    pub fn suffix(&self, j: usize) -> u32 {
        self.m[j - 1..].iter().sum()
    }

    /// All points of depth `d` with `1 ≤ m_i ≤ max`, lexicographically.
    pub fn grid(d: usize, max: u32) -> Vec<NegIntPoint> {
        let mut out = vec![Vec::new()];
        for _ in 0..d {
            out = out
                .into_iter()
                .flat_map(|p: Vec<u32>| {
                    (1..=max).map(move |v| {
                        let mut next = p.clone();
                        next.push(v);
                        next
                    })
                })
                .collect();
        }
        out.into_iter().map(|m| NegIntPoint { m }).collect()
    }
}

impl fmt::Display for NegIntPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.m.iter().map(|v| format!("-{v}")).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Outcome of an exact evaluation at `−m`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpecialValueResult {
    /// `None` when a denominator vanishes.
    pub value: Option<QuadExt>,
    pub singular: bool,
    /// `√D` coefficient of the absorbed value is zero.
    pub is_rational: bool,
    /// `D` is a rational square, so rationality says nothing.
    pub square_discriminant: bool,
    /// The parity predicate, where one applies.
    pub predicate_holomorphic: Option<bool>,
}

impl SpecialValueResult {
    /// The parity predicate disagrees with the exact denominator scan.
    pub fn predicate_disagrees(&self) -> bool {
        self.predicate_holomorphic
            .is_some_and(|h| h == self.singular)
    }
}

/// The parity criterion for holomorphy at `−m`: for `Q = 1` every `m_d(j)`
/// odd, for `Q = −1` every `q·m_d(j) ≢ 0 (mod 4)`, for other `Q` with `√D`
/// irrational always holomorphic. With `Q ≠ ±1` and `D` a square the answer
/// comes from the exact denominator scan.
///
/// For `q ≡ 0 (mod 4)` and `Q = −1` this reports a singularity at odd
/// `m_d(j)` where the denominators do not vanish; [`singular_by_scan`] is
/// authoritative.
pub fn holomorphic_at_neg(params: &LucasParams, q: u64, m: &NegIntPoint) -> bool {
    let suffixes = (1..=m.depth()).map(|j| m.suffix(j) as u64);
    if *params.q() == 1 {
        suffixes.clone().all(|s| s % 2 == 1)
    } else if *params.q() == -1 {
        suffixes.clone().all(|s| !(q * s).is_multiple_of(4))
    } else if !params.d_is_square() {
        true
    } else {
        !singular_by_scan(params, q, m)
    }
}

/// `y = Q^K α^{M − 2K}`, the quantity whose `q`-th power sits in the
/// denominators at `−m`.
fn lattice_base(params: &LucasParams, big_m: u32, k: u32, alpha: &mut AlphaPowers) -> QuadExt {
    let qk = params.q().clone().pow(k as i32);
    alpha.get(params, big_m as i64 - 2 * k as i64).scale(&qk)
}

struct AlphaPowers(HashMap<i64, QuadExt>);

impl AlphaPowers {
    fn new() -> Self {
        AlphaPowers(HashMap::new())
    }

    fn get(&mut self, params: &LucasParams, e: i64) -> QuadExt {
        self.0
            .entry(e)
            .or_insert_with(|| params.alpha_power(e))
            .clone()
    }
}

/// Exact check whether some denominator `1 − Q^{qK} α^{q(m_d(j) − 2K)}`,
/// `0 ≤ K ≤ m_d(j)`, vanishes.
pub fn singular_by_scan(params: &LucasParams, q: u64, m: &NegIntPoint) -> bool {
    let mut alpha = AlphaPowers::new();
    let one = params.field().one();
    (1..=m.depth()).any(|j| {
        let big_m = m.suffix(j);
        (0..=big_m).any(|k| {
            let y = lattice_base(params, big_m, k, &mut alpha);
            (&one - &y.pow(q as i64)).is_zero()
        })
    })
}

/// `D^{−M/2}` in ℚ(√D).
fn d_power(params: &LucasParams, big_m: u32) -> QuadExt {
    let field = params.field();
    let d = params.d().clone();
    if big_m.is_multiple_of(2) {
        let v = d.pow(big_m as i32 / 2).recip();
        QuadExt::from_rational(field, v)
    } else {
        let v = d.pow((big_m as i32 + 1) / 2).recip();
        params.sqrt_d().scale(&v)
    }
}

/// `F_j(K)` for `0 ≤ K ≤ m_d(j)`, or `None` if some denominator vanishes.
type FactorTable = Vec<Vec<QuadExt>>;

fn shifted_factors(
    params: &LucasParams,
    shift: &ShiftSpec,
    m: &NegIntPoint,
) -> Option<FactorTable> {
    let mut alpha = AlphaPowers::new();
    let one = params.field().one();
    let q = shift.q() as i64;
    (1..=m.depth())
        .map(|j| {
            let big_m = m.suffix(j);
            let r = shift.r(j) as i64;
            (0..=big_m)
                .map(|k| {
                    let y = lattice_base(params, big_m, k, &mut alpha);
                    y.pow(r).checked_div(&(&one - &y.pow(q)))
                })
                .collect::<Option<Vec<_>>>()
        })
        .collect()
}

fn additive_factors(params: &LucasParams, g: &[Rational], m: &NegIntPoint) -> Option<FactorTable> {
    let mut alpha = AlphaPowers::new();
    let one = params.field().one();
    (1..=m.depth())
        .map(|j| {
            let big_m = m.suffix(j);
            (0..=big_m)
                .map(|k| {
                    let x = lattice_base(params, big_m, k, &mut alpha).scale(&g[j - 1]);
                    x.checked_div(&(&one - &x))
                })
                .collect::<Option<Vec<_>>>()
        })
        .collect()
}

/// `Σ_k ∏_j C(m_j,k_j)(−1)^{k_j} F_j(K_j)` by dynamic programming over the
/// suffix sums.
fn finite_sum(params: &LucasParams, m: &NegIntPoint, factors: &FactorTable) -> QuadExt {
    let field = params.field();
    let d = m.depth();
    let signed = |j: usize, k: u32| {
        let c = Rational::from(binomial(m.m(j), k));
        if k % 2 == 1 {
            -c
        } else {
            c
        }
    };
    // level[K] = Σ_{k_j+⋯+k_d = K} ∏_{i≥j} C(m_i,k_i)(−1)^{k_i} F_i(K_i)
    let mut level: Vec<QuadExt> = (0..=m.m(d))
        .map(|k| factors[d - 1][k as usize].scale(&signed(d, k)))
        .collect();
    for j in (1..d).rev() {
        let top = m.suffix(j);
        level = (0..=top)
            .map(|big_k| {
                let mut acc = field.zero();
                for k in 0..=m.m(j).min(big_k) {
                    if let Some(inner) = level.get((big_k - k) as usize) {
                        acc = acc + inner.scale(&signed(j, k));
                    }
                }
                &acc * &factors[j - 1][big_k as usize]
            })
            .collect();
    }
    level.iter().fold(field.zero(), |acc, t| acc + t.clone())
}

fn finish(
    params: &LucasParams,
    m: &NegIntPoint,
    sum: Option<QuadExt>,
    predicate: Option<bool>,
) -> SpecialValueResult {
    let value = sum.map(|s| &s * &d_power(params, m.suffix(1)));
    SpecialValueResult {
        singular: value.is_none(),
        is_rational: value.as_ref().is_some_and(QuadExt::is_rational),
        value,
        square_discriminant: params.d_is_square(),
        predicate_holomorphic: predicate,
    }
}

fn check_depth(expected: usize, m: &NegIntPoint) -> Result<()> {
    if expected != m.depth() {
        return Err(Error::DimensionMismatch(format!(
            "depth-{expected} function at a depth-{} point",
            m.depth()
        )));
    }
    Ok(())
}

/// Exact `ζ(−m | r)`.
pub fn special_zeta_exact(
    params: &LucasParams,
    shift: &ShiftSpec,
    m: &NegIntPoint,
) -> Result<SpecialValueResult> {
    check_depth(shift.depth(), m)?;
    let sum = shifted_factors(params, shift, m).map(|f| finite_sum(params, m, &f));
    Ok(finish(
        params,
        m,
        sum,
        Some(holomorphic_at_neg(params, shift.q(), m)),
    ))
}

/// One term `σ_B(k)` of the `2^d`-fold symmetrized sum: the tuple `k` with
/// the entries in `B` replaced by `m_t − k_t`.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetrizedTerm {
    pub k: Vec<u32>,
    pub barred: Vec<bool>,
    /// `∏ C(m_t, k_t)`.
    pub weight: Integer,
    /// `γ_j` evaluated at the barred tuple.
    pub gammas: Vec<QuadExt>,
    pub sigma: QuadExt,
}

fn box_tuples(m: &NegIntPoint) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for &mt in m.values() {
        out = out
            .into_iter()
            .flat_map(|p: Vec<u32>| {
                (0..=mt).map(move |v| {
                    let mut next = p.clone();
                    next.push(v);
                    next
                })
            })
            .collect();
    }
    out
}

fn gammas_at(k: &[u32], factors: &FactorTable) -> Vec<QuadExt> {
    let d = k.len();
    (0..d)
        .map(|j| {
            let big_k: u32 = k[j..].iter().sum();
            let f = &factors[j][big_k as usize];
            if k[j] % 2 == 1 {
                -f.clone()
            } else {
                f.clone()
            }
        })
        .collect()
}

/// `ζ(−m | r)` through the symmetrized form
/// `D^{−M/2} 2^{−d} Σ_k ∏C(m_t,k_t) Σ_B σ_B(k)`, with the term list.
pub fn symmetrized_special_zeta(
    params: &LucasParams,
    shift: &ShiftSpec,
    m: &NegIntPoint,
) -> Result<(SpecialValueResult, Vec<SymmetrizedTerm>)> {
    check_depth(shift.depth(), m)?;
    let predicate = Some(holomorphic_at_neg(params, shift.q(), m));
    let Some(factors) = shifted_factors(params, shift, m) else {
        return Ok((finish(params, m, None, predicate), Vec::new()));
    };
    let d = m.depth();
    let field = params.field();
    let mut terms = Vec::new();
    let mut total = field.zero();
    for k in box_tuples(m) {
        let weight = k
            .iter()
            .zip(m.values())
            .fold(Integer::from(1), |acc, (&kt, &mt)| acc * binomial(mt, kt));
        for mask in 0..(1u32 << d) {
            let barred: Vec<bool> = (0..d).map(|t| mask >> t & 1 == 1).collect();
            let kb: Vec<u32> = (0..d)
                .map(|t| {
                    if barred[t] {
                        m.values()[t] - k[t]
                    } else {
                        k[t]
                    }
                })
                .collect();
            let gammas = gammas_at(&kb, &factors);
            let sigma = gammas
                .iter()
                .skip(1)
                .fold(gammas[0].clone(), |acc, g| &acc * g);
            total = total + sigma.scale(&Rational::from(&weight));
            terms.push(SymmetrizedTerm {
                k: k.clone(),
                barred,
                weight: weight.clone(),
                gammas,
                sigma,
            });
        }
    }
    let total = total.scale(&Rational::from((1, 1u64 << d)));
    Ok((finish(params, m, Some(total), predicate), terms))
}

/// Checks `ψ(σ_B(k)) = (−1)^{m_d(1)} σ_{B^c}(k)` for every term, with `ψ`
/// the conjugation `√D ↦ −√D`.
pub fn galois_audit(terms: &[SymmetrizedTerm], m: &NegIntPoint) -> bool {
    let index: HashMap<(&[u32], &[bool]), &QuadExt> = terms
        .iter()
        .map(|t| ((t.k.as_slice(), t.barred.as_slice()), &t.sigma))
        .collect();
    let odd = m.suffix(1) % 2 == 1;
    terms.iter().all(|t| {
        let complement: Vec<bool> = t.barred.iter().map(|b| !b).collect();
        match index.get(&(t.k.as_slice(), complement.as_slice())) {
            Some(partner) => {
                let lhs = t.sigma.conjugate();
                if odd {
                    lhs == -(*partner).clone()
                } else {
                    lhs == **partner
                }
            }
            None => false,
        }
    })
}

/// The rational value, when the result is non-singular with `√D`
/// irrational and zero `√D` coefficient.
pub fn assert_rational(result: &SpecialValueResult) -> Result<Rational> {
    let value = result.value.as_ref().ok_or(Error::SingularPoint)?;
    if result.square_discriminant {
        return Err(Error::SquareDiscriminant);
    }
    if !value.is_rational() {
        return Err(Error::NotRational(value.to_string()));
    }
    Ok(value.rational_part().clone())
}

/// Exact `L(−m | χ)` for real characters as the `χ`-weighted sum of
/// shifted special values.
pub fn special_l_exact(
    params: &LucasParams,
    chars: &[DirichletCharacter],
    m: &NegIntPoint,
) -> Result<SpecialValueResult> {
    check_depth(chars.len(), m)?;
    if let Some(chi) = chars.iter().find(|c| !c.is_real()) {
        return Err(Error::NonQuadraticCharacter(chi.label()));
    }
    let q = chars[0].modulus();
    let mut total = params.field().zero();
    for (r, _) in decomposition_terms(chars)? {
        let mut acc = 0u64;
        let mut weight = 1i64;
        for (chi, &ri) in chars.iter().zip(&r) {
            acc += ri;
            weight *= chi.real_value(acc as i64).unwrap_or(0);
        }
        let shift = ShiftSpec::new(q, r)?;
        let part = special_zeta_exact(params, &shift, m)?;
        match part.value {
            Some(v) => total = total + v.scale(&Rational::from(weight)),
            None => return Ok(finish(params, m, None, part.predicate_holomorphic)),
        }
    }
    let predicate = Some(holomorphic_at_neg(params, q, m));
    Ok(SpecialValueResult {
        singular: false,
        is_rational: total.is_rational(),
        value: Some(total),
        square_discriminant: params.d_is_square(),
        predicate_holomorphic: predicate,
    })
}

/// Rational `L(−m | χ)` for quadratic or principal real characters.
pub fn special_l_quadratic(
    params: &LucasParams,
    chars: &[DirichletCharacter],
    m: &NegIntPoint,
) -> Result<Rational> {
    assert_rational(&special_l_exact(params, chars, m)?)
}

/// Exact `ℒ(−m | f)` for rational `f_i(1)` with `|g_j| ≤ 1`.
pub fn special_additive_exact(
    params: &LucasParams,
    f: &AdditiveTuple,
    m: &NegIntPoint,
) -> Result<SpecialValueResult> {
    check_depth(f.depth(), m)?;
    f.rational_values()?;
    f.check_bound()?;
    let g: Vec<Rational> = (1..=f.depth())
        .map(|j| f.partial_product(j).as_rational().expect("rational tuple"))
        .collect();
    let sum = additive_factors(params, &g, m).map(|t| finite_sum(params, m, &t));
    Ok(finish(params, m, sum, None))
}

/// Rational `ℒ(−m | f)`.
pub fn special_additive(
    params: &LucasParams,
    f: &AdditiveTuple,
    m: &NegIntPoint,
) -> Result<Rational> {
    assert_rational(&special_additive_exact(params, f, m)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::enumerate_characters;

    fn fib() -> LucasParams {
        LucasParams::from_integers(1, -1).unwrap()
    }

    fn pt(m: &[u32]) -> NegIntPoint {
        NegIntPoint::new(m.to_vec()).unwrap()
    }

    #[test]
    fn fibonacci_minus_one_is_zero() {
        let shift = ShiftSpec::new(2, vec![1]).unwrap();
        let r = special_zeta_exact(&fib(), &shift, &pt(&[1])).unwrap();
        assert_eq!(assert_rational(&r).unwrap(), 0);
        let (sym, terms) = symmetrized_special_zeta(&fib(), &shift, &pt(&[1])).unwrap();
        assert_eq!(sym.value, r.value);
        assert_eq!(terms.len(), 4);
        assert!(galois_audit(&terms, &pt(&[1])));
    }

    #[test]
    fn singular_points() {
        let shift = ShiftSpec::new(2, vec![1]).unwrap();
        let r = special_zeta_exact(&fib(), &shift, &pt(&[2])).unwrap();
        assert!(r.singular);
        assert!(!r.predicate_disagrees());
        assert_eq!(assert_rational(&r), Err(Error::SingularPoint));
        let p31 = LucasParams::from_integers(3, 1).unwrap();
        assert!(!holomorphic_at_neg(&p31, 2, &pt(&[2])));
        assert!(holomorphic_at_neg(&fib(), 2, &pt(&[1])));
    }

    #[test]
    fn mod_four_predicate_mismatch() {
        let shift = ShiftSpec::new(4, vec![1]).unwrap();
        let r = special_zeta_exact(&fib(), &shift, &pt(&[1])).unwrap();
        assert!(!r.singular);
        assert_eq!(r.predicate_holomorphic, Some(false));
        assert!(r.predicate_disagrees());
    }

    #[test]
    fn pell_value_is_rational() {
        let pell = LucasParams::from_integers(2, -1).unwrap();
        let shift = ShiftSpec::new(2, vec![1]).unwrap();
        let r = special_zeta_exact(&pell, &shift, &pt(&[1])).unwrap();
        assert!(r.is_rational);
    }

    #[test]
    fn depth_two_symmetrization() {
        let p = LucasParams::from_integers(3, 1).unwrap();
        let shift = ShiftSpec::new(3, vec![2, 1]).unwrap();
        let m = pt(&[2, 1]);
        let direct = special_zeta_exact(&p, &shift, &m).unwrap();
        let (sym, terms) = symmetrized_special_zeta(&p, &shift, &m).unwrap();
        assert_eq!(direct.value, sym.value);
        assert!(direct.is_rational);
        assert!(galois_audit(&terms, &m));
        assert_eq!(terms.len(), 3 * 2 * 4);
    }

    #[test]
    fn characters_and_additive() {
        let pell = LucasParams::from_integers(2, -1).unwrap();
        let chi = enumerate_characters(3);
        special_l_quadratic(&pell, &chi[..1], &pt(&[1])).unwrap();
        special_l_quadratic(&pell, &[chi[1].clone(), chi[1].clone()], &pt(&[1, 1])).unwrap();
        let f = AdditiveTuple::from_rationals(&[Rational::from(-1)]).unwrap();
        special_additive(&fib(), &f, &pt(&[1])).unwrap();
        let ones = AdditiveTuple::trivial(2);
        let via_zeta = special_zeta_exact(
            &fib(),
            &ShiftSpec::new(1, vec![1, 1]).unwrap(),
            &pt(&[1, 3]),
        )
        .unwrap();
        let via_f = special_additive_exact(&fib(), &ones, &pt(&[1, 3])).unwrap();
        assert_eq!(via_zeta.value, via_f.value);
    }
}
