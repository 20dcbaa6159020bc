//! Direct truncated summation of the defining series inside the convergence
//! domain, with certified truncation bounds.
//!
//! Every oracle reduces to one of two nested sums over a weight table
//! `w_i(t)`:
//!
//! * strict: `Σ_{0<n_1<⋯<n_d} ∏ w_i(n_i)` (multiple zeta, Dirichlet and
//!   additive L-functions);
//! * shifted: `Σ_{0≤t_1≤⋯≤t_d} ∏ w_i(t_i)` with `t_i = n_1+⋯+n_i` and
//!   `w_i(t) = U_{qt+R_i}^{-s_i}`.
//!
//! Both are evaluated in `O(d·N)` with running prefix sums and truncated on
//! the last index. The tail bound comes from the two-sided Binet estimate
//! `(1−ρ)αⁿ/√D ≤ U_n ≤ (1+ρ)αⁿ/√D`, `ρ = |Q|/α²`.

use rayon::prelude::*;
use rug::ops::Pow;
use rug::{Complex, Float, Rational};

use crate::additive::{AdditiveCharacter, AdditiveTuple};
use crate::characters::{common_modulus, DirichletCharacter};
use crate::error::{Error, Result};
use crate::lucas::LucasSequenceCache;
use crate::numeric::{abs_f64, MultiComplexPoint, GUARD_BITS};

/// Largest sequence index an oracle will sum up to.
pub const MAX_DIRECT_INDEX: usize = 20_000;

/// Modulus and residues `(q; r_1, …, r_d)` of a shifted zeta function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftSpec {
    q: u64,
    r: Vec<u64>,
}

impl ShiftSpec {
    pub fn new(q: u64, r: Vec<u64>) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidArgument(
                "shift modulus must be at least 1".into(),
            ));
        }
        if r.is_empty() {
            return Err(Error::DimensionMismatch("empty residue list".into()));
        }
        if r.contains(&0) {
            return Err(Error::InvalidArgument("residues must be positive".into()));
        }
        Ok(ShiftSpec { q, r })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn residues(&self) -> &[u64] {
        &self.r
    }

    pub fn depth(&self) -> usize {
        self.r.len()
    }

    /// `r_j`, 1-based.
    pub fn r(&self, j: usize) -> u64 {
        self.r[j - 1]
    }

    /// `r_d(j) = r_j + ⋯ + r_d`.
    pub fn suffix(&self, j: usize) -> u64 {
        self.r[j - 1..].iter().sum()
    }

    /// `R_i = r_1 + ⋯ + r_i`.
    pub fn prefix_sum(&self, i: usize) -> u64 {
        self.r[..i].iter().sum()
    }

    /// Leading `k` residues.
    pub fn prefix(&self, k: usize) -> Option<ShiftSpec> {
        (k >= 1).then(|| ShiftSpec {
            q: self.q,
            r: self.r[..k].to_vec(),
        })
    }
}

/// A numerical value with its error budget.
#[derive(Clone, Debug, PartialEq)]
pub struct EvalResult {
    pub value: Complex,
    /// Bound on the omitted part of the series.
    pub truncation_tail_bound: f64,
    /// Bound on accumulated floating-point error.
    pub rounding_bound: f64,
    pub terms_used: usize,
}

impl EvalResult {
    /// `truncation_tail_bound + rounding_bound`.
    pub fn error_bound(&self) -> f64 {
        self.truncation_tail_bound + self.rounding_bound
    }
}

/// Smallest suffix sum of real parts, `min_j Re(s_j + ⋯ + s_d)`.
pub fn domain_margin(s: &MultiComplexPoint) -> f64 {
    s.suffix_real_parts()
        .into_iter()
        .fold(f64::INFINITY, f64::min)
}

/// Whether every suffix sum of real parts is at least `delta`.
pub fn in_domain(s: &MultiComplexPoint, delta: f64) -> bool {
    s.suffix_real_parts().iter().all(|&x| x >= delta)
}

fn require_domain(s: &MultiComplexPoint) -> Result<f64> {
    let margin = domain_margin(s);
    if margin > 0.0 {
        Ok(margin)
    } else {
        Err(Error::OutOfDomain { margin })
    }
}

/// `ln U_n` for the requested indices, computed in parallel.
fn log_u(cache: &LucasSequenceCache, indices: &[usize], wp: u32) -> Vec<Float> {
    if let Some(&max) = indices.iter().max() {
        cache.u(max);
    }
    indices
        .par_iter()
        .map(|&n| {
            let u = cache.u(n);
            let num = Float::with_val(wp, u.numer()).ln();
            if *u.denom() == 1 {
                num
            } else {
                num - Float::with_val(wp, u.denom()).ln()
            }
        })
        .collect()
}

/// `U^{-s} = exp(−s·ln U)`.
fn inv_power(log_u: &Float, s: &Complex, wp: u32) -> Complex {
    let mut e = Complex::with_val(wp, s * log_u);
    e = -e;
    e.exp()
}

/// Constants of the Binet estimate, as natural logs.
struct Growth {
    ln_alpha: f64,
    ln_c_lo: f64,
    ln_c_hi: f64,
}

impl Growth {
    fn new(cache: &LucasSequenceCache) -> Self {
        let p = cache.params();
        let rho = p.growth_ratio(64).to_f64();
        let half_ln_d = p.log_d(64).to_f64() / 2.0;
        Growth {
            ln_alpha: p.log_alpha(64).to_f64(),
            ln_c_lo: (1.0 - rho).ln() - half_ln_d,
            ln_c_hi: (1.0 + rho).ln() - half_ln_d,
        }
    }

    /// `ln sup |U_n^{-s}| α^{nσ}` over `n ≥ 1`, with `σ = Re s`.
    fn ln_const(&self, sigma: f64) -> f64 {
        if sigma >= 0.0 {
            -sigma * self.ln_c_lo
        } else {
            -sigma * self.ln_c_hi
        }
    }
}

fn ln_binomial(n: f64, k: usize) -> f64 {
    (1..=k)
        .map(|i| ((n - k as f64 + i as f64) / i as f64).ln())
        .sum()
}

/// `ln Σ_{M>N} C(M + shift, d − 1) x^M`, or `+∞` when the geometric
/// majorant does not yet apply at `M = N + 1`.
fn ln_tail(n: usize, d: usize, shift: i64, ln_x: f64) -> f64 {
    let m0 = (n + 1) as f64;
    let top = m0 + shift as f64;
    if top < (d - 1) as f64 {
        return f64::INFINITY;
    }
    let ln_t0 = ln_binomial(top, d - 1) + m0 * ln_x;
    // t_{M+1}/t_M = (M+shift+1)/(M+shift−d+2)·x, decreasing in M
    let ratio = (top + 1.0) / (top - d as f64 + 2.0) * ln_x.exp();
    if ratio >= 1.0 {
        return f64::INFINITY;
    }
    ln_t0 - (1.0 - ratio).ln()
}

/// Smallest cutoff whose tail bound is below `eps`, with the bound itself.
fn choose_cutoff(min_n: usize, eps: f64, tail: impl Fn(usize) -> f64) -> Result<(usize, f64)> {
    let ln_eps = eps.ln();
    let mut hi = min_n.max(4);
    while tail(hi) > ln_eps {
        hi *= 2;
        if hi > 4 * MAX_DIRECT_INDEX {
            return Err(Error::AccuracyUnreachable {
                cap: MAX_DIRECT_INDEX,
            });
        }
    }
    let mut lo = min_n;
    while lo < hi {
        let mid = (lo + hi) / 2;
        if tail(mid) <= ln_eps {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok((hi, tail(hi).exp() * (1.0 + 1e-9)))
}

/// Prefix-sum evaluation of the nested sum; `w[i][t]` is the weight of
/// coordinate `i` at position `t`.
fn nested_sum(w: &[Vec<Complex>], strict: bool, wp: u32) -> Complex {
    let len = w[0].len();
    let mut prev = vec![Complex::with_val(wp, 1); len];
    for (i, wi) in w.iter().enumerate() {
        let mut acc = Complex::new(wp);
        let mut next = Vec::with_capacity(len);
        for t in 0..len {
            let inner = if strict && i > 0 {
                if t == 0 {
                    None
                } else {
                    Some(&prev[t - 1])
                }
            } else {
                Some(&prev[t])
            };
            if let Some(inner) = inner {
                if !wi[t].is_zero() {
                    acc += Complex::with_val(wp, &wi[t] * inner);
                }
            }
            next.push(acc.clone());
        }
        prev = next;
    }
    prev.pop().unwrap()
}

/// Same recursion on absolute values; returns `Σ|terms|` over the truncation.
fn nested_abs(w: &[Vec<f64>], strict: bool) -> f64 {
    let len = w[0].len();
    let mut prev = vec![1.0; len];
    for (i, wi) in w.iter().enumerate() {
        let mut acc = 0.0;
        let mut next = Vec::with_capacity(len);
        for t in 0..len {
            let inner = match (strict && i > 0, t) {
                (true, 0) => 0.0,
                (true, _) => prev[t - 1],
                (false, _) => prev[t],
            };
            acc += wi[t] * inner;
            next.push(acc);
        }
        prev = next;
    }
    prev[len - 1]
}

fn finish(value: Complex, abs_sum: f64, tail: f64, d: usize, len: usize, prec: u32) -> EvalResult {
    let wp = value.prec().0;
    let unit = (-(wp as f64 - 1.0)).exp2();
    let ops = (4 * d * (len + 4)) as f64;
    let out = Complex::with_val(prec, &value);
    let final_round = abs_f64(&out) * (-(prec as f64 - 1.0)).exp2();
    EvalResult {
        value: out,
        truncation_tail_bound: tail,
        rounding_bound: ops * unit * abs_sum * 1.01 + final_round,
        terms_used: d * len,
    }
}

fn check_depth(s: &MultiComplexPoint, d: usize) -> Result<()> {
    if s.depth() != d {
        return Err(Error::DimensionMismatch(format!(
            "point has depth {}, expected {d}",
            s.depth()
        )));
    }
    Ok(())
}

/// Strict nested sum `Σ_{0<n_1<⋯<n_d} ∏ c_i(n_i) U_{n_i}^{-s_i}` with `|c_i| ≤ 1`
/// in the product sense required by the domination argument.
fn strict_series(
    cache: &LucasSequenceCache,
    s: &MultiComplexPoint,
    eps: f64,
    prec: u32,
    coeff: impl Fn(usize, usize, u32) -> Option<Complex> + Sync,
) -> Result<EvalResult> {
    if !(eps > 0.0) {
        return Err(Error::InvalidArgument(
            "target accuracy must be positive".into(),
        ));
    }
    let margin = require_domain(s)?;
    let d = s.depth();
    let g = Growth::new(cache);
    let sigmas: Vec<f64> = s.coords().iter().map(|z| z.real().to_f64()).collect();
    let ln_c: f64 = sigmas.iter().map(|&x| g.ln_const(x)).sum();
    let ln_x = -g.ln_alpha * margin;
    let (n_max, tail) = choose_cutoff(d, eps, |n| ln_c + ln_tail(n, d, -1, ln_x))?;
    if n_max > MAX_DIRECT_INDEX {
        return Err(Error::AccuracyUnreachable {
            cap: MAX_DIRECT_INDEX,
        });
    }

    let wp = prec + GUARD_BITS;
    let indices: Vec<usize> = (1..=n_max).collect();
    let logs = log_u(cache, &indices, wp);
    let s_wp = s.with_prec(wp);
    let w: Vec<Vec<Complex>> = (0..d)
        .map(|i| {
            logs.par_iter()
                .zip(&indices)
                .map(|(l, &n)| match coeff(i, n, wp) {
                    Some(c) => c * inv_power(l, s_wp.get(i + 1), wp),
                    None => Complex::new(wp),
                })
                .collect()
        })
        .collect();
    let w_abs: Vec<Vec<f64>> = w
        .iter()
        .map(|row| row.iter().map(abs_f64).collect())
        .collect();
    let value = nested_sum(&w, true, wp);
    let abs_sum = nested_abs(&w_abs, true);
    Ok(finish(value, abs_sum, tail, d, n_max, prec))
}

/// Direct multiple Lucas zeta `Σ_{0<n_1<⋯<n_d} ∏ U_{n_i}^{-s_i}`.
pub fn direct_multiple_zeta(
    cache: &LucasSequenceCache,
    s: &MultiComplexPoint,
    eps: f64,
    prec: u32,
) -> Result<EvalResult> {
    strict_series(cache, s, eps, prec, |_, _, wp| {
        Some(Complex::with_val(wp, 1))
    })
}

/// Direct multiple shifted zeta
/// `Σ_{n_i ≥ 0} ∏_i U_{q(n_1+⋯+n_i) + (r_1+⋯+r_i)}^{-s_i}`.
pub fn direct_shifted_zeta(
    cache: &LucasSequenceCache,
    shift: &ShiftSpec,
    s: &MultiComplexPoint,
    eps: f64,
    prec: u32,
) -> Result<EvalResult> {
    if !(eps > 0.0) {
        return Err(Error::InvalidArgument(
            "target accuracy must be positive".into(),
        ));
    }
    let d = s.depth();
    if shift.depth() != d {
        return Err(Error::DimensionMismatch(format!(
            "{} residues for a depth-{d} point",
            shift.depth()
        )));
    }
    let margin = require_domain(s)?;
    let g = Growth::new(cache);
    let q = shift.q() as f64;
    let sigmas: Vec<f64> = s.coords().iter().map(|z| z.real().to_f64()).collect();
    let suffix = s.suffix_real_parts();
    // ∏ α^{-σ_i R_i} = ∏_j α^{-S_j r_j}
    let ln_c: f64 = sigmas.iter().map(|&x| g.ln_const(x)).sum::<f64>()
        - g.ln_alpha
            * suffix
                .iter()
                .zip(shift.residues())
                .map(|(sj, &rj)| sj * rj as f64)
                .sum::<f64>();
    let ln_y = -g.ln_alpha * q * margin;
    let (t_max, tail) = choose_cutoff(0, eps, |t| ln_c + ln_tail(t, d, d as i64 - 1, ln_y))?;
    let top = shift.q() as usize * t_max + shift.suffix(1) as usize;
    if top > MAX_DIRECT_INDEX {
        return Err(Error::AccuracyUnreachable {
            cap: MAX_DIRECT_INDEX,
        });
    }

    let wp = prec + GUARD_BITS;
    let s_wp = s.with_prec(wp);
    let w: Vec<Vec<Complex>> = (0..d)
        .map(|i| {
            let ri = shift.prefix_sum(i + 1) as usize;
            let indices: Vec<usize> = (0..=t_max).map(|t| shift.q() as usize * t + ri).collect();
            let logs = log_u(cache, &indices, wp);
            logs.par_iter()
                .map(|l| inv_power(l, s_wp.get(i + 1), wp))
                .collect()
        })
        .collect();
    let w_abs: Vec<Vec<f64>> = w
        .iter()
        .map(|row| row.iter().map(abs_f64).collect())
        .collect();
    let value = nested_sum(&w, false, wp);
    let abs_sum = nested_abs(&w_abs, false);
    Ok(finish(value, abs_sum, tail, d, t_max + 1, prec))
}

/// Direct multiple Lucas L-function `Σ_{0<n_1<⋯<n_d} ∏ χ_i(n_i) U_{n_i}^{-s_i}`.
pub fn direct_dirichlet_l(
    cache: &LucasSequenceCache,
    chars: &[DirichletCharacter],
    s: &MultiComplexPoint,
    eps: f64,
    prec: u32,
) -> Result<EvalResult> {
    common_modulus(chars)?;
    check_depth(s, chars.len())?;
    strict_series(cache, s, eps, prec, |i, n, wp| {
        chars[i]
            .value_exponent(n as i64)
            .map(|_| chars[i].value_complex(n as i64, wp))
    })
}

/// Direct additive L-function `Σ_{0<n_1<⋯<n_d} ∏ f_i(1)^{n_i} U_{n_i}^{-s_i}`.
pub fn direct_additive_l(
    cache: &LucasSequenceCache,
    f: &AdditiveTuple,
    s: &MultiComplexPoint,
    eps: f64,
    prec: u32,
) -> Result<EvalResult> {
    check_depth(s, f.depth())?;
    f.check_bound()?;
    strict_series(cache, s, eps, prec, |i, n, wp| {
        Some(power(f.get(i + 1), n, wp))
    })
}

fn power(f: &AdditiveCharacter, n: usize, wp: u32) -> Complex {
    match f {
        AdditiveCharacter::Exact { .. } => f.pow(n as i64).to_complex(wp),
        AdditiveCharacter::Approx(z) => {
            let z = Complex::with_val(wp + 32, z);
            Complex::with_val(wp, z.pow(n as u32))
        }
    }
}

/// `Σ_{n ≥ 1} c(n)·U_n^{-s}` for a single coordinate; shared by tests and
/// the CLI for spot checks.
pub fn direct_single(
    cache: &LucasSequenceCache,
    s: &Complex,
    eps: f64,
    prec: u32,
) -> Result<EvalResult> {
    let point = MultiComplexPoint::new(vec![s.clone()])?;
    direct_multiple_zeta(cache, &point, eps, prec)
}

/// Exact partial sum `Σ_{n=1}^{N} U_n^{-m}` for a non-negative integer `m`,
/// used as a rational cross-check.
pub fn exact_partial_sum(cache: &LucasSequenceCache, m: u32, n: usize) -> Rational {
    (1..=n)
        .map(|k| {
            let u = cache.u(k);
            u.pow(m as i32).recip()
        })
        .fold(Rational::new(), |acc, x| acc + x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lucas::LucasParams;

    fn fib() -> LucasSequenceCache {
        LucasSequenceCache::new(LucasParams::from_integers(1, -1).unwrap())
    }

    fn pt(c: &[(f64, f64)]) -> MultiComplexPoint {
        MultiComplexPoint::from_f64(128, c).unwrap()
    }

    #[test]
    fn domain_predicate() {
        assert!(in_domain(&pt(&[(2.0, 0.0)]), 0.0));
        assert!(in_domain(&pt(&[(-1.0, 0.0), (2.0, 0.0)]), 0.0));
        assert!(!in_domain(&pt(&[(2.0, 0.0), (-3.0, 0.0)]), 0.0));
    }

    #[test]
    fn reciprocal_fibonacci_square_sum() {
        let c = fib();
        let r = direct_multiple_zeta(&c, &pt(&[(2.0, 0.0)]), 1e-30, 128).unwrap();
        // Σ 1/F_n² = 2.42638...
        assert!((r.value.real().to_f64() - 2.426_320_751_167_241).abs() < 1e-12);
        assert!(r.truncation_tail_bound <= 1e-30);
    }

    #[test]
    fn matches_exact_partial_sum() {
        let c = fib();
        let r = direct_multiple_zeta(&c, &pt(&[(3.0, 0.0)]), 1e-25, 128).unwrap();
        let partial = exact_partial_sum(&c, 3, 200);
        let diff = r.value.real().to_f64() - partial.to_f64();
        assert!(diff.abs() < 1e-15);
    }

    #[test]
    fn shifted_examples() {
        let c = fib();
        let odd = direct_shifted_zeta(
            &c,
            &ShiftSpec::new(2, vec![1]).unwrap(),
            &pt(&[(2.0, 0.0)]),
            1e-25,
            128,
        )
        .unwrap();
        let even = direct_shifted_zeta(
            &c,
            &ShiftSpec::new(2, vec![2]).unwrap(),
            &pt(&[(2.0, 0.0)]),
            1e-25,
            128,
        )
        .unwrap();
        let all = direct_multiple_zeta(&c, &pt(&[(2.0, 0.0)]), 1e-25, 128).unwrap();
        let sum = Complex::with_val(128, &odd.value + &even.value);
        assert!(abs_f64(&(sum - &all.value)) < 1e-22);
        assert!((odd.value.real().to_f64() - 1.29).abs() < 0.01);
        assert!((even.value.real().to_f64() - 1.128).abs() < 0.01);
    }

    #[test]
    fn q_one_is_multiple_zeta() {
        let c = fib();
        let s = pt(&[(1.0, 0.5), (2.0, -0.25)]);
        let a = direct_shifted_zeta(&c, &ShiftSpec::new(1, vec![1, 1]).unwrap(), &s, 1e-22, 128)
            .unwrap();
        let b = direct_multiple_zeta(&c, &s, 1e-22, 128).unwrap();
        assert!(abs_f64(&(a.value - b.value)) < 1e-20);
    }

    #[test]
    fn huge_real_part() {
        let c = fib();
        let r = direct_multiple_zeta(&c, &pt(&[(200.0, 0.0)]), 1e-30, 128).unwrap();
        // U_1 = U_2 = 1 for Fibonacci
        assert!((r.value.real().to_f64() - 2.0).abs() < 1e-30);
    }

    #[test]
    fn refuses_boundary() {
        let c = fib();
        let err = direct_multiple_zeta(&c, &pt(&[(0.0, 1.0)]), 1e-10, 64).unwrap_err();
        assert!(matches!(err, Error::OutOfDomain { .. }));
    }
}
