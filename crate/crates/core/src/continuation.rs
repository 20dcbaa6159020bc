//! Meromorphic continuation by binomial expansion of `U_n^{-s}`.
//!
//! Writing `U_n^{-s} = D^{s/2} Σ_k C(−s,k)(−1)^k Q^{nk} α^{−n(s+2k)}` and
//! summing the geometric series in each gap variable turns a depth-`d`
//! series into
//!
//! ```text
//! D^{s_d(1)/2} Σ_{k_1..k_d ≥ 0} ∏_j b_j[k_j] · ∏_j F_j(k_d(j))
//! ```
//!
//! with `b_j[k] = C(−s_j,k)(−1)^k` and a factor `F_j` that depends only on
//! the suffix sums `s_d(j)` and `k_d(j)`. For the shifted zeta function
//!
//! ```text
//! F_j(K) = e^{r_j Λ} / (1 − e^{q Λ}),   Λ = K ln Q − (s_d(j) + 2K) ln α,
//! ```
//!
//! and for additive characters `F_j(K) = x/(1 − x)` with
//! `x = g_j Q^K α^{−(s_d(j)+2K)}`. Because `F_j` only sees the total
//! `K = k_d(j)`, the multi-index sum collapses to a convolution recursion
//!
//! ```text
//! H_{d+1}(K) = [K = 0],   H_j(K) = F_j(K) Σ_{k ≤ K} b_j[k] H_{j+1}(K − k),
//! ```
//!
//! and the series is `D^{s_d(1)/2} Σ_K H_1(K)`, truncated on the total
//! `K`. Every term is `O(ρ^K)` up to polynomial factors, `ρ = |Q|/α²`.

use rayon::prelude::*;
use rug::float::Constant;
use rug::{Assign, Complex, Float};

use crate::additive::AdditiveTuple;
use crate::characters::{common_modulus, DirichletCharacter};
use crate::error::{Error, Result};
use crate::lucas::LucasParams;
use crate::numeric::{abs_f64, expm1, format_float, root_of_unity, MultiComplexPoint, GUARD_BITS};
use crate::series::{EvalResult, ShiftSpec};

/// Cutoff schedule and stopping rule for the continued series.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncationPolicy {
    /// First total-k cutoff tried.
    pub initial_cutoff: usize,
    /// Factor by which the cutoff grows between checks.
    pub growth: usize,
    pub max_cutoff: usize,
    /// Target absolute accuracy.
    pub epsilon: f64,
    /// Minimal distance, in a suffix coordinate, to any pole hyperplane.
    pub pole_guard: f64,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        TruncationPolicy {
            initial_cutoff: 16,
            growth: 2,
            max_cutoff: 4096,
            epsilon: 1e-20,
            pole_guard: 1e-6,
        }
    }
}

impl TruncationPolicy {
    pub fn with_epsilon(epsilon: f64) -> Self {
        TruncationPolicy {
            epsilon,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0) {
            return Err(Error::InvalidArgument("epsilon must be positive".into()));
        }
        if !(self.pole_guard > 0.0) {
            return Err(Error::InvalidArgument("pole guard must be positive".into()));
        }
        if self.growth < 2 || self.initial_cutoff < 2 {
            return Err(Error::InvalidArgument(
                "cutoff growth and initial cutoff must be at least 2".into(),
            ));
        }
        Ok(())
    }
}

/// `C(−s, k) = ∏_{i<k} (−s − i)/(i + 1)`.
pub fn binom_complex(s: &Complex, k: u32) -> Complex {
    let prec = s.prec();
    let mut acc = Complex::with_val(prec, 1);
    for i in 0..k {
        let num = Complex::with_val(prec, -s) - i;
        acc *= num;
        acc /= i + 1;
    }
    acc
}

/// `b[k] = C(−s,k)(−1)^k = (s)_k / k!` for `k < len`, by the ratio recurrence.
fn signed_binomials(s: &Complex, len: usize, wp: u32) -> Vec<Complex> {
    let mut out = Vec::with_capacity(len);
    let mut b = Complex::with_val(wp, 1);
    for k in 0..len {
        out.push(b.clone());
        let next = Complex::with_val(wp, s + k as u32);
        b *= next;
        b /= (k + 1) as u32;
    }
    out
}

fn extend_binomials(b: &mut Vec<Complex>, s: &Complex, len: usize, wp: u32) {
    while b.len() < len {
        let k = b.len() - 1;
        let next = Complex::with_val(wp, s + k as u32) * &b[k] / (k + 1) as u32;
        b.push(next);
    }
}

#[derive(Clone, Debug)]
enum FactorKind {
    /// Multipliers `(r_j, q)` on `Λ` in numerator and denominator.
    Shifted { q: u64, r: Vec<u64> },
    /// Principal `log g_j` added to `Λ`.
    Additive { log_g: Vec<Complex> },
}

/// A continued depth-`d` series at a fixed working precision.
#[derive(Clone, Debug)]
pub struct ContinuationSeries {
    kind: FactorKind,
    depth: usize,
    prec: u32,
    wp: u32,
    ln_alpha: Float,
    ln_abs_q: Float,
    half_ln_d: Float,
    q_negative: bool,
    pi: Float,
    rho: f64,
}

/// Distance from a suffix value to its nearest pole for one `(j, K)`.
#[derive(Clone, Debug)]
pub struct PoleProximity {
    pub j: usize,
    pub k_sum: usize,
    pub n: i64,
    pub distance: f64,
    pub location: Complex,
}

impl ContinuationSeries {
    fn base(params: &LucasParams, kind: FactorKind, depth: usize, prec: u32) -> Self {
        let wp = prec + GUARD_BITS;
        ContinuationSeries {
            kind,
            depth,
            prec,
            wp,
            ln_alpha: params.log_alpha(wp),
            ln_abs_q: params.log_abs_q(wp),
            half_ln_d: params.log_d(wp) / 2u32,
            q_negative: params.q_is_negative(),
            pi: Float::with_val(wp, Constant::Pi),
            rho: params.growth_ratio(64).to_f64(),
        }
    }

    /// Continuation of the shifted zeta function `ζ(s | r)`.
    pub fn shifted(params: &LucasParams, shift: &ShiftSpec, prec: u32) -> Self {
        Self::base(
            params,
            FactorKind::Shifted {
                q: shift.q(),
                r: shift.residues().to_vec(),
            },
            shift.depth(),
            prec,
        )
    }

    /// Continuation of the additive L-function `ℒ(s | f)`.
    pub fn additive(params: &LucasParams, f: &AdditiveTuple, prec: u32) -> Result<Self> {
        f.check_bound()?;
        Ok(Self::additive_unchecked(params, f, prec))
    }

    /// As [`ContinuationSeries::additive`] without the `|g_j| ≤ 1` check; the
    /// continued expression is meromorphic for any nonzero `g_j`.
    pub(crate) fn additive_unchecked(params: &LucasParams, f: &AdditiveTuple, prec: u32) -> Self {
        let wp = prec + GUARD_BITS;
        let log_g = (1..=f.depth())
            .map(|j| f.partial_product(j).to_complex(wp + 32).ln())
            .map(|z| Complex::with_val(wp, z))
            .collect();
        Self::base(params, FactorKind::Additive { log_g }, f.depth(), prec)
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn working_precision(&self) -> u32 {
        self.wp
    }

    pub fn log_alpha(&self) -> &Float {
        &self.ln_alpha
    }

    /// `Λ_j(K) = K ln|Q| + iπK[Q<0] − (s_d(j) + 2K) ln α`.
    fn lambda(&self, k_sum: usize, suffix: &Complex) -> Complex {
        let wp = self.wp;
        let k = k_sum as u32;
        let mut re_im = Complex::with_val(wp, suffix + 2 * k);
        re_im *= &self.ln_alpha;
        let mut out = Complex::with_val(wp, (Float::with_val(wp, &self.ln_abs_q * k), 0));
        if self.q_negative {
            *out.mut_imag() += Float::with_val(wp, &self.pi * k);
        }
        out -= re_im;
        out
    }

    /// Numerator and denominator exponents `(a Λ + c, a' Λ + c)` and `a'`.
    fn exponents(&self, j: usize, k_sum: usize, suffix: &Complex) -> (Complex, Complex, u64) {
        let lam = self.lambda(k_sum, suffix);
        match &self.kind {
            FactorKind::Shifted { q, r } => {
                let num = Complex::with_val(self.wp, &lam * r[j - 1]);
                let den = Complex::with_val(self.wp, &lam * *q);
                (num, den, *q)
            }
            FactorKind::Additive { log_g } => {
                let z = lam + &log_g[j - 1];
                (z.clone(), z, 1)
            }
        }
    }

    /// Reduces the imaginary part of `z` into `(−π, π]`; returns the shift.
    fn reduce(&self, z: &Complex) -> (Complex, i64) {
        let two_pi = Float::with_val(self.wp, &self.pi * 2u32);
        let n = Float::with_val(self.wp, z.imag() / &two_pi)
            .round()
            .to_f64() as i64;
        let mut out = z.clone();
        *out.mut_imag() -= two_pi * n;
        (out, n)
    }

    /// Nearest pole of `F_j(K)` to the given suffix value.
    pub fn nearest_pole(&self, j: usize, k_sum: usize, suffix: &Complex) -> PoleProximity {
        let (_, den, scale) = self.exponents(j, k_sum, suffix);
        let (reduced, n) = self.reduce(&den);
        let speed = Float::with_val(self.wp, &self.ln_alpha * scale);
        let shift = Complex::with_val(self.wp, &reduced / &speed);
        PoleProximity {
            j,
            k_sum,
            n,
            distance: abs_f64(&shift),
            location: Complex::with_val(self.wp, suffix + &shift),
        }
    }

    /// `F_j(K)` at the given suffix value, refusing points within `guard` of
    /// one of its poles.
    pub fn factor(&self, j: usize, k_sum: usize, suffix: &Complex, guard: f64) -> Result<Complex> {
        let (num, den, scale) = self.exponents(j, k_sum, suffix);
        let (reduced, _) = self.reduce(&den);
        let speed = Float::with_val(53, &self.ln_alpha * scale).to_f64();
        let distance = abs_f64(&reduced) / speed;
        if distance < guard {
            let p = self.nearest_pole(j, k_sum, suffix);
            return Err(Error::PoleProximity {
                j,
                location: format_complex_short(&p.location),
                distance,
            });
        }
        let denom = -expm1(&reduced);
        Ok(num.exp() / denom)
    }

    fn suffixes(&self, s: &MultiComplexPoint) -> Result<Vec<Complex>> {
        if s.depth() != self.depth {
            return Err(Error::DimensionMismatch(format!(
                "point has depth {}, series has depth {}",
                s.depth(),
                self.depth
            )));
        }
        let s = s.with_prec(self.wp);
        Ok((1..=self.depth).map(|j| s.suffix(j, self.wp)).collect())
    }

    /// `D^{s_d(1)/2}`.
    fn prefactor(&self, suffix1: &Complex) -> Complex {
        Complex::with_val(self.wp, suffix1 * &self.half_ln_d).exp()
    }

    /// Evaluates the continued series at `s`.
    pub fn evaluate(&self, s: &MultiComplexPoint, policy: &TruncationPolicy) -> Result<EvalResult> {
        policy.validate()?;
        let wp = self.wp;
        let d = self.depth;
        let suffix = self.suffixes(s)?;
        let coords: Vec<Complex> = s.with_prec(wp).coords().to_vec();
        let pref = self.prefactor(&suffix[0]);
        let pref_abs = abs_f64(&pref);

        let mut b: Vec<Vec<Complex>> = coords.iter().map(|z| signed_binomials(z, 1, wp)).collect();
        let mut f: Vec<Vec<Complex>> = vec![Vec::new(); d];
        let mut h: Vec<Vec<Complex>> = vec![Vec::new(); d];
        let mut ha: Vec<Vec<f64>> = vec![Vec::new(); d];
        let mut sum = Complex::new(wp);
        let mut prev_sum: Option<Complex> = None;
        let mut abs_total = 0.0;
        let mut cutoff = policy.initial_cutoff;
        let mut done = 0usize;

        loop {
            let cutoff_now = cutoff.min(policy.max_cutoff);
            for j in 0..d {
                extend_binomials(&mut b[j], &coords[j], cutoff_now, wp);
                let new: Vec<Complex> = (done..cutoff_now)
                    .into_par_iter()
                    .map(|k| self.factor(j + 1, k, &suffix[j], policy.pole_guard))
                    .collect::<Result<_>>()?;
                f[j].extend(new);
            }
            for j in (0..d).rev() {
                let (new, new_abs): (Vec<Complex>, Vec<f64>) = (done..cutoff_now)
                    .into_par_iter()
                    .map(|k| {
                        let mut acc = Complex::new(wp);
                        let mut acc_abs = 0.0;
                        if j + 1 == d {
                            acc.assign(&b[j][k]);
                            acc_abs = abs_f64(&b[j][k]);
                        } else {
                            for i in 0..=k {
                                let inner = &h[j + 1][k - i];
                                if inner.is_zero() || b[j][i].is_zero() {
                                    continue;
                                }
                                acc += Complex::with_val(wp, &b[j][i] * inner);
                                acc_abs += abs_f64(&b[j][i]) * ha[j + 1][k - i];
                            }
                        }
                        let fa = abs_f64(&f[j][k]);
                        (acc * &f[j][k], acc_abs * fa)
                    })
                    .unzip();
                h[j].extend(new);
                ha[j].extend(new_abs);
            }
            for k in done..cutoff_now {
                sum += &h[0][k];
                abs_total += ha[0][k];
            }
            done = cutoff_now;

            let tail = self.tail_estimate(&h[0], pref_abs);
            if let Some(prev) = &prev_sum {
                let delta = abs_f64(&Complex::with_val(wp, &sum - prev)) * pref_abs;
                if delta < policy.epsilon / 2.0 && tail < policy.epsilon / 2.0 {
                    let value = Complex::with_val(wp, &sum * &pref);
                    return Ok(self.finish(value, tail.max(delta), abs_total * pref_abs, done));
                }
            }
            if cutoff_now >= policy.max_cutoff {
                return Err(Error::AccuracyUnreachable {
                    cap: policy.max_cutoff,
                });
            }
            prev_sum = Some(sum.clone());
            cutoff = cutoff_now * policy.growth;
        }
    }

    /// Ratio-based tail estimate `m·λ/(1 − λ)` from the last half of `h`.
    fn tail_estimate(&self, h: &[Complex], pref_abs: f64) -> f64 {
        let c = h.len();
        let q = (c / 4).max(1);
        let window_max = |lo: usize, hi: usize| {
            h[lo.min(c)..hi.min(c)]
                .iter()
                .map(abs_f64)
                .fold(0.0f64, f64::max)
        };
        let m1 = window_max(c - q, c);
        if m1 == 0.0 {
            return 0.0;
        }
        let m0 = window_max(c.saturating_sub(2 * q), c - q);
        let observed = if m0 > 0.0 {
            (m1 / m0).powf(1.0 / q as f64)
        } else {
            1.0
        };
        let lambda = observed.max(self.rho);
        if lambda >= 1.0 {
            return f64::INFINITY;
        }
        4.0 * m1 * pref_abs * lambda / (1.0 - lambda)
    }

    fn finish(&self, value: Complex, tail: f64, abs_sum: f64, cutoff: usize) -> EvalResult {
        let unit = (-(self.wp as f64 - 1.0)).exp2();
        let ops = (4 * self.depth * (cutoff + 8)) as f64;
        let out = Complex::with_val(self.prec, &value);
        let final_round = abs_f64(&out) * (-(self.prec as f64 - 1.0)).exp2();
        EvalResult {
            value: out,
            truncation_tail_bound: tail,
            rounding_bound: ops * unit * abs_sum * 1.01 + final_round,
            terms_used: cutoff * self.depth,
        }
    }

    /// `Σ_{k_j+⋯+k_d = k'} ∏_{i≥j} b_i[k_i] ∏_{i>j} F_i(k_d(i))`, a finite sum.
    pub fn constrained_sum(
        &self,
        s: &MultiComplexPoint,
        j: usize,
        k_prime: usize,
        guard: f64,
    ) -> Result<Complex> {
        let wp = self.wp;
        let d = self.depth;
        let suffix = self.suffixes(s)?;
        let coords: Vec<Complex> = s.with_prec(wp).coords().to_vec();
        let len = k_prime + 1;
        let b: Vec<Vec<Complex>> = coords
            .iter()
            .map(|z| signed_binomials(z, len, wp))
            .collect();
        // g[K] = Σ_{k_i+⋯+k_d = K} ∏_{l≥i} b_l ∏_{l>i} F_l, built from level d
        // down to level j; `i` is the 0-based index of the level just below
        let mut g: Vec<Complex> = b[d - 1].clone();
        for i in (j..d).rev() {
            let with_f: Vec<Complex> = (0..len)
                .map(|k| {
                    Ok(Complex::with_val(
                        wp,
                        &g[k] * &self.factor(i + 1, k, &suffix[i], guard)?,
                    ))
                })
                .collect::<Result<_>>()?;
            g = (0..len)
                .map(|k| {
                    let mut acc = Complex::new(wp);
                    for t in 0..=k {
                        acc += Complex::with_val(wp, &b[i - 1][t] * &with_f[k - t]);
                    }
                    acc
                })
                .collect();
        }
        Ok(g.swap_remove(k_prime))
    }

    /// Nearest poles of every factor to the suffix sums of `s`, for
    /// `K ≤ k_max`.
    pub fn poles_near(&self, s: &MultiComplexPoint, k_max: usize) -> Result<Vec<PoleProximity>> {
        let suffix = self.suffixes(s)?;
        let mut out = Vec::new();
        for j in 1..=self.depth {
            for k in 0..=k_max {
                out.push(self.nearest_pole(j, k, &suffix[j - 1]));
            }
        }
        Ok(out)
    }

    /// A total-k bound beyond which every pole has real part below
    /// `min_j Re s_d(j) − 1`.
    pub fn pole_scan_bound(&self, s: &MultiComplexPoint) -> Result<usize> {
        let suffix = self.suffixes(s)?;
        let ln_a = self.ln_alpha.to_f64();
        let slope = 2.0 - self.ln_abs_q.to_f64() / ln_a;
        let shift = match &self.kind {
            FactorKind::Shifted { .. } => 0.0,
            FactorKind::Additive { log_g } => log_g
                .iter()
                .map(|g| g.real().to_f64().abs() / ln_a)
                .fold(0.0, f64::max),
        };
        let lowest = suffix
            .iter()
            .map(|z| z.real().to_f64())
            .fold(f64::INFINITY, f64::min);
        let k = ((shift - lowest + 2.0) / slope).ceil().max(0.0) as usize + 1;
        Ok(k.min(10_000))
    }
}

fn format_complex_short(z: &Complex) -> String {
    let re = Float::with_val(53, z.real());
    let im = Float::with_val(53, z.imag());
    format!("{} + {}i", format_float(&re), format_float(&im))
}

/// Continued shifted zeta `ζ(s | r)`.
pub fn shifted_zeta_cont(
    params: &LucasParams,
    shift: &ShiftSpec,
    s: &MultiComplexPoint,
    policy: &TruncationPolicy,
    prec: u32,
) -> Result<EvalResult> {
    ContinuationSeries::shifted(params, shift, prec).evaluate(s, policy)
}

/// Continued additive L-function `ℒ(s | f)`.
pub fn additive_l_cont(
    params: &LucasParams,
    f: &AdditiveTuple,
    s: &MultiComplexPoint,
    policy: &TruncationPolicy,
    prec: u32,
) -> Result<EvalResult> {
    if s.depth() != f.depth() {
        return Err(Error::DimensionMismatch(format!(
            "{} characters for a depth-{} point",
            f.depth(),
            s.depth()
        )));
    }
    ContinuationSeries::additive(params, f, prec)?.evaluate(s, policy)
}

/// Nonzero terms `(r, v)` of the character decomposition: the residue
/// vector `r ∈ [1, q]^d` with weight `χ_1(R_1)⋯χ_d(R_d) = ζ_φ^v`.
pub fn decomposition_terms(chars: &[DirichletCharacter]) -> Result<Vec<(Vec<u64>, u64)>> {
    let q = common_modulus(chars)?;
    let d = chars.len();
    let phi = chars[0].value_order();
    let mut out = Vec::new();
    let mut r = vec![1u64; d];
    loop {
        let mut exponent = Some(0u64);
        let mut acc = 0u64;
        for (i, chi) in chars.iter().enumerate() {
            acc += r[i];
            exponent = match (exponent, chi.value_exponent(acc as i64)) {
                (Some(e), Some(v)) => Some((e + v) % phi),
                _ => None,
            };
        }
        if let Some(e) = exponent {
            out.push((r.clone(), e));
        }
        // next r in lexicographic order over [1, q]^d
        let mut i = d;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            if r[i] < q {
                r[i] += 1;
                break;
            }
            r[i] = 1;
        }
    }
}

/// Continued multiple Lucas L-function, as the character-weighted sum of
/// shifted zeta continuations.
pub fn dirichlet_l_cont(
    params: &LucasParams,
    chars: &[DirichletCharacter],
    s: &MultiComplexPoint,
    policy: &TruncationPolicy,
    prec: u32,
) -> Result<EvalResult> {
    if s.depth() != chars.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} characters for a depth-{} point",
            chars.len(),
            s.depth()
        )));
    }
    let terms = decomposition_terms(chars)?;
    let q = chars[0].modulus();
    let phi = chars[0].value_order();
    let wp = prec + GUARD_BITS;
    let parts: Vec<EvalResult> = terms
        .par_iter()
        .map(|(r, _)| {
            let shift = ShiftSpec::new(q, r.clone())?;
            ContinuationSeries::shifted(params, &shift, prec + GUARD_BITS / 2).evaluate(s, policy)
        })
        .collect::<Result<_>>()?;
    let mut value = Complex::new(wp);
    let mut tail = 0.0;
    let mut rounding = 0.0;
    let mut terms_used = 0;
    for ((_, e), part) in terms.iter().zip(&parts) {
        value += root_of_unity(wp, *e as i64, phi) * &part.value;
        tail += part.truncation_tail_bound;
        rounding += part.rounding_bound;
        terms_used += part.terms_used;
    }
    let out = Complex::with_val(prec, &value);
    rounding += abs_f64(&out) * (-(prec as f64 - 1.0)).exp2();
    Ok(EvalResult {
        value: out,
        truncation_tail_bound: tail,
        rounding_bound: rounding,
        terms_used,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lucas::LucasSequenceCache;
    use crate::series::{direct_multiple_zeta, direct_shifted_zeta};

    fn fib() -> LucasParams {
        LucasParams::from_integers(1, -1).unwrap()
    }

    fn pt(c: &[(f64, f64)]) -> MultiComplexPoint {
        MultiComplexPoint::from_f64(128, c).unwrap()
    }

    #[test]
    fn binomials() {
        let s = Complex::with_val(64, (-3, 0));
        assert_eq!(binom_complex(&s, 0), Complex::with_val(64, 1));
        assert_eq!(binom_complex(&s, 2), Complex::with_val(64, 3));
        let half = Complex::with_val(64, (0.5, 0));
        assert_eq!(binom_complex(&half, 1), Complex::with_val(64, -0.5));
    }

    #[test]
    fn agrees_with_direct_sum() {
        let p = fib();
        let cache = LucasSequenceCache::new(p.clone());
        let shift = ShiftSpec::new(2, vec![1]).unwrap();
        let s = pt(&[(2.0, 0.0)]);
        let cont = shifted_zeta_cont(&p, &shift, &s, &TruncationPolicy::default(), 128).unwrap();
        let direct = direct_shifted_zeta(&cache, &shift, &s, 1e-25, 128).unwrap();
        assert!(abs_f64(&(cont.value - direct.value)) < 1e-19);
    }

    #[test]
    fn depth_three_agrees_with_direct_sum() {
        let p = LucasParams::from_integers(1, -3).unwrap();
        let cache = LucasSequenceCache::new(p.clone());
        let shift = ShiftSpec::new(3, vec![2, 1, 3]).unwrap();
        let s = pt(&[(0.3, 1.0), (-0.2, -0.5), (0.9, 0.25)]);
        let cont = shifted_zeta_cont(&p, &shift, &s, &TruncationPolicy::default(), 128).unwrap();
        let direct = direct_shifted_zeta(&cache, &shift, &s, 1e-22, 128).unwrap();
        assert!(abs_f64(&(cont.value - direct.value)) < 1e-19);
    }

    #[test]
    fn fibonacci_odd_at_minus_one() {
        let shift = ShiftSpec::new(2, vec![1]).unwrap();
        let r = shifted_zeta_cont(
            &fib(),
            &shift,
            &pt(&[(-1.0, 0.0)]),
            &TruncationPolicy::default(),
            128,
        )
        .unwrap();
        assert!(abs_f64(&r.value) < 1e-30);
    }

    #[test]
    fn pole_at_zero_is_refused() {
        let shift = ShiftSpec::new(2, vec![1]).unwrap();
        let err = shifted_zeta_cont(
            &fib(),
            &shift,
            &pt(&[(0.0, 0.0)]),
            &TruncationPolicy::default(),
            128,
        )
        .unwrap_err();
        assert!(matches!(err, Error::PoleProximity { j: 1, .. }));
    }

    #[test]
    fn trivial_additive_is_multiple_zeta() {
        let p = fib();
        let cache = LucasSequenceCache::new(p.clone());
        let s = pt(&[(1.5, 0.3), (0.75, -1.0)]);
        let cont = additive_l_cont(
            &p,
            &AdditiveTuple::trivial(2),
            &s,
            &TruncationPolicy::default(),
            128,
        )
        .unwrap();
        let direct = direct_multiple_zeta(&cache, &s, 1e-25, 128).unwrap();
        assert!(abs_f64(&(cont.value - direct.value)) < 1e-19);
    }

    #[test]
    fn decomposition_weights_mod_four() {
        let chi = crate::characters::enumerate_characters(4)[1].clone();
        let terms = decomposition_terms(&[chi]).unwrap();
        // only r = 1, 3 are units mod 4; χ(3) = −1 = ζ_2^1
        assert_eq!(terms, vec![(vec![1], 0), (vec![3], 1)]);
    }
}
