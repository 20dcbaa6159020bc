//! Residues along pole hyperplanes: closed forms and contour checks.
//!
//! The residue of a depth-`d` function along `s_d(j) = a` is the restriction
//! of `(s_d(j) − a)·F` to the hyperplane. At a pole of the factor `F_j(K)`
//! with `K = k'`, only multi-indices with `k_d(j) = k'` contribute, and the
//! factors `F_i`, `i < j`, shifted by the pole, reassemble the depth-`(j−1)`
//! function of the leading variables. For the shifted zeta function this
//! gives
//!
//! ```text
//! Res = ζ^{j−1}(s_1..s_{j−1} | r_1..r_{j−1}) · D^{a/2} · ζ_q^{−n R_j} / (q ln α)
//!       · Σ_{k_j+⋯+k_d = k'} ∏_{i≥j} C(−s_i,k_i)(−1)^{k_i} ∏_{i>j} F_i(k_d(i)),
//! ```
//!
//! with `R_j = r_1 + ⋯ + r_j`. The Dirichlet residue is the character-weighted
//! sum of these over `r ∈ [1, q]^d`; for additive characters the root of
//! unity disappears, `q ln α` becomes `ln α` and the prefix is
//! `ℒ^{j−1}(s_1..s_{j−1} | f_1..f_{j−1})`. The constrained sum is finite.
//!
//! Numeric checks integrate the function in its last variable `s_d` around
//! the hyperplane with the trapezoidal rule.

use rayon::prelude::*;
use rug::float::Constant;
use rug::{Complex, Float};
use serde::Serialize;

use crate::additive::AdditiveTuple;
use crate::characters::DirichletCharacter;
use crate::continuation::{decomposition_terms, ContinuationSeries, TruncationPolicy};
use crate::error::{Error, Result};
use crate::lucas::LucasParams;
use crate::numeric::{abs_f64, root_of_unity, MultiComplexPoint, GUARD_BITS};
use crate::poles::{pole_location_additive, pole_location_zeta, real_axis_candidates};
use crate::series::ShiftSpec;

/// Closed form next to an independent contour evaluation.
#[derive(Clone, Debug, PartialEq)]
pub struct ResidueValue {
    pub closed_form: Complex,
    pub numeric_check: Complex,
    /// `|closed − numeric| / max(|closed|, ρ·max|F|)`, with `ρ` the contour
    /// radius and `max|F|` taken on the contour.
    pub rel_error: f64,
    /// Hyperplane value `a` of `s_d(j)`.
    pub location: Complex,
    pub radius: f64,
    pub nodes: usize,
}

/// Knobs for residue evaluation.
#[derive(Clone, Debug, PartialEq)]
pub struct ResidueOptions {
    pub prec: u32,
    pub max_radius: f64,
    /// Relative stopping tolerance of the trapezoidal rule.
    pub contour_tolerance: f64,
    pub max_nodes: usize,
    pub policy: TruncationPolicy,
}

impl ResidueOptions {
    pub fn new(prec: u32) -> Self {
        ResidueOptions {
            prec,
            max_radius: 0.05,
            contour_tolerance: 1e-20,
            max_nodes: 4096,
            policy: TruncationPolicy::with_epsilon(1e-32),
        }
    }
}

/// A trapezoidal contour integral with its diagnostics.
#[derive(Clone, Debug)]
pub struct ContourResult {
    pub value: Complex,
    /// `ρ · max|F|` over the nodes.
    pub scale: f64,
    pub nodes: usize,
}

/// `(1/2πi)∮_{|s−a|=ρ} F(s) ds` by the trapezoidal rule, doubling the node
/// count from 8. The error on a circle decays geometrically in the node
/// count, so the error of `I_M` is about the square of `|I_M − I_{M/2}|`
/// (relative to the contour scale); iteration stops once that predicted
/// error is below `tol`.
pub fn contour_integral<F>(
    f: F,
    center: &Complex,
    radius: f64,
    prec: u32,
    tol: f64,
    max_nodes: usize,
) -> Result<ContourResult>
where
    F: Fn(&Complex) -> Result<Complex> + Sync,
{
    let wp = prec + 32;
    let center = Complex::with_val(wp, center);
    // values[m] = F(a + ρ e^{2πi m/M}) · e^{2πi m/M}
    let node = |m: usize, count: usize| -> Result<(Complex, f64)> {
        let e = root_of_unity(wp, m as i64, count as u64);
        let z = Complex::with_val(wp, &e * radius) + &center;
        let v = f(&z)?;
        let mag = abs_f64(&v);
        Ok((v * e, mag))
    };
    let mut count = 8usize;
    let mut samples: Vec<(Complex, f64)> = (0..count)
        .into_par_iter()
        .map(|m| node(m, count))
        .collect::<Result<_>>()?;
    let mut previous: Option<Complex> = None;
    loop {
        let mut acc = Complex::new(wp);
        let mut max_f = 0.0f64;
        for (v, mag) in &samples {
            acc += v;
            max_f = max_f.max(*mag);
        }
        acc *= radius;
        acc /= count as u32;
        let scale = max_f * radius;
        if let Some(prev) = &previous {
            let delta = abs_f64(&Complex::with_val(wp, &acc - prev));
            if delta <= tol.sqrt() * abs_f64(&acc).max(scale) {
                return Ok(ContourResult {
                    value: Complex::with_val(prec, &acc),
                    scale,
                    nodes: count,
                });
            }
        }
        if count * 2 > max_nodes {
            return Err(Error::NoConvergence);
        }
        // interleave the new odd nodes of the doubled grid
        let doubled = count * 2;
        let odd: Vec<(Complex, f64)> = (0..count)
            .into_par_iter()
            .map(|m| node(2 * m + 1, doubled))
            .collect::<Result<_>>()?;
        let mut merged = Vec::with_capacity(doubled);
        for (even, odd) in samples.into_iter().zip(odd) {
            merged.push(even);
            merged.push(odd);
        }
        samples = merged;
        previous = Some(acc);
        count = doubled;
    }
}

/// The contour residue of `f` at `a` with radius `ρ`.
pub fn numeric_residue<F>(f: F, a: &Complex, radius: f64, prec: u32) -> Result<Complex>
where
    F: Fn(&Complex) -> Result<Complex> + Sync,
{
    Ok(contour_integral(f, a, radius, prec, 1e-20, 4096)?.value)
}

enum Family<'a> {
    Shifted(&'a ShiftSpec),
    Dirichlet(&'a [DirichletCharacter]),
    Additive(&'a AdditiveTuple),
}

impl Family<'_> {
    fn depth(&self) -> usize {
        match self {
            Family::Shifted(shift) => shift.depth(),
            Family::Dirichlet(chars) => chars.len(),
            Family::Additive(f) => f.depth(),
        }
    }

    fn modulus(&self) -> u64 {
        match self {
            Family::Shifted(shift) => shift.q(),
            Family::Dirichlet(chars) => chars[0].modulus(),
            Family::Additive(_) => 1,
        }
    }

    /// A series with the same pole set, for radius selection.
    fn pole_series(&self, params: &LucasParams, prec: u32) -> ContinuationSeries {
        match self {
            Family::Shifted(shift) => ContinuationSeries::shifted(params, shift, prec),
            Family::Dirichlet(chars) => {
                let shift = ShiftSpec::new(chars[0].modulus(), vec![1; chars.len()]).unwrap();
                ContinuationSeries::shifted(params, &shift, prec)
            }
            Family::Additive(f) => ContinuationSeries::additive_unchecked(params, f, prec),
        }
    }

    fn location(
        &self,
        params: &LucasParams,
        j: usize,
        k_prime: usize,
        n: i64,
        prec: u32,
    ) -> Complex {
        match self {
            Family::Additive(f) => {
                let g = f.partial_product(j).to_complex(prec + 64);
                let log_g = Complex::with_val(prec + 32, g.ln_ref());
                pole_location_additive(params, &log_g, k_prime, n, prec)
            }
            _ => pole_location_zeta(params, self.modulus(), k_prime, n, prec),
        }
    }

    fn evaluate(
        &self,
        params: &LucasParams,
        s: &MultiComplexPoint,
        policy: &TruncationPolicy,
        prec: u32,
    ) -> Result<Complex> {
        let r = match self {
            Family::Shifted(shift) => {
                ContinuationSeries::shifted(params, shift, prec).evaluate(s, policy)?
            }
            Family::Dirichlet(chars) => {
                crate::continuation::dirichlet_l_cont(params, chars, s, policy, prec)?
            }
            Family::Additive(f) => {
                ContinuationSeries::additive_unchecked(params, f, prec).evaluate(s, policy)?
            }
        };
        Ok(r.value)
    }

    fn closed_form(
        &self,
        params: &LucasParams,
        j: usize,
        k_prime: usize,
        n: i64,
        point: &MultiComplexPoint,
        a: &Complex,
        opts: &ResidueOptions,
    ) -> Result<Complex> {
        let prec = opts.prec;
        let wp = prec + GUARD_BITS;
        let ln_a = params.log_alpha(wp);
        let d_pow = d_power(params, a, wp);
        let guard = opts.policy.pole_guard;
        let inner = |e: Error| match e {
            Error::PoleProximity { .. } => Error::InnerPole { depth: j - 1 },
            other => other,
        };
        match self {
            Family::Shifted(shift) => {
                shifted_closed_form(params, shift, j, k_prime, n, point, opts)
            }
            Family::Dirichlet(chars) => {
                let q = chars[0].modulus();
                let phi = chars[0].value_order();
                let mut acc = Complex::new(wp);
                for (r, e) in decomposition_terms(chars)? {
                    let shift = ShiftSpec::new(q, r)?;
                    let term = shifted_closed_form(params, &shift, j, k_prime, n, point, opts)?;
                    acc += term * root_of_unity(wp, e as i64, phi);
                }
                Ok(acc)
            }
            Family::Additive(f) => {
                let prefix = match (f.prefix(j - 1), point.prefix(j - 1)) {
                    (Some(fp), Some(sp)) => {
                        ContinuationSeries::additive_unchecked(params, &fp, prec)
                            .evaluate(&sp, &opts.policy)
                            .map_err(inner)?
                            .value
                    }
                    _ => Complex::with_val(wp, 1),
                };
                let series = ContinuationSeries::additive_unchecked(params, f, prec);
                let c = series.constrained_sum(point, j, k_prime, guard)?;
                Ok(prefix * d_pow * c / ln_a)
            }
        }
    }
}

fn shifted_closed_form(
    params: &LucasParams,
    shift: &ShiftSpec,
    j: usize,
    k_prime: usize,
    n: i64,
    point: &MultiComplexPoint,
    opts: &ResidueOptions,
) -> Result<Complex> {
    let prec = opts.prec;
    let wp = prec + GUARD_BITS;
    let q = shift.q();
    let a = point.suffix(j, wp);
    let prefix = match (shift.prefix(j - 1), point.prefix(j - 1)) {
        (Some(rp), Some(sp)) => {
            ContinuationSeries::shifted(params, &rp, prec)
                .evaluate(&sp, &opts.policy)
                .map_err(|e| match e {
                    Error::PoleProximity { .. } => Error::InnerPole { depth: j - 1 },
                    other => other,
                })?
                .value
        }
        _ => Complex::with_val(wp, 1),
    };
    let d_pow = d_power(params, &a, wp);
    let big_r = shift.prefix_sum(j) as i64;
    let root = root_of_unity(wp, (-n).rem_euclid(q as i64) * big_r, q);
    let series = ContinuationSeries::shifted(params, shift, prec);
    let c = series.constrained_sum(point, j, k_prime, opts.policy.pole_guard)?;
    let denom = params.log_alpha(wp) * q;
    Ok(prefix * d_pow * root * c / denom)
}

/// `D^{a/2}`.
fn d_power(params: &LucasParams, a: &Complex, wp: u32) -> Complex {
    let half_ln_d = params.log_d(wp) / 2u32;
    Complex::with_val(wp, a * half_ln_d).exp()
}

/// Replaces `s_j` so that `s_j + ⋯ + s_d = a`.
fn restrict(s: &MultiComplexPoint, j: usize, a: &Complex, wp: u32) -> MultiComplexPoint {
    let mut out = s.with_prec(wp);
    let rest = if j < s.depth() {
        out.suffix(j + 1, wp)
    } else {
        Complex::new(wp)
    };
    out.set(j, Complex::with_val(wp, a - rest));
    out
}

/// Contour radius: `min(max_radius, half the distance to the nearest
/// other pole met by the slice in s_d)`.
fn contour_radius(
    family: &Family<'_>,
    params: &LucasParams,
    point: &MultiComplexPoint,
    j: usize,
    k_prime: usize,
    opts: &ResidueOptions,
) -> Result<f64> {
    let series = family.pole_series(params, opts.prec);
    let bound = series.pole_scan_bound(point)?.max(k_prime + 2);
    let poles = series.poles_near(point, bound)?;
    let ln_a = params.log_alpha(64).to_f64();
    let spacing = 2.0 * std::f64::consts::PI / (family.modulus() as f64 * ln_a);
    let nearest_other = poles
        .iter()
        .filter(|p| !(p.j == j && p.k_sum == k_prime))
        .map(|p| p.distance)
        .fold(spacing, f64::min);
    if nearest_other < 1e-5 {
        return Err(Error::NonIsolatedPole);
    }
    Ok(opts.max_radius.min(nearest_other / 2.0))
}

fn residue_general(
    params: &LucasParams,
    family: Family<'_>,
    j: usize,
    k_prime: usize,
    n: i64,
    s: &MultiComplexPoint,
    opts: &ResidueOptions,
) -> Result<ResidueValue> {
    let d = family.depth();
    if s.depth() != d {
        return Err(Error::DimensionMismatch(format!(
            "point has depth {}, function has depth {d}",
            s.depth()
        )));
    }
    if j == 0 || j > d {
        return Err(Error::InvalidArgument(format!(
            "suffix index {j} outside 1..={d}"
        )));
    }
    let prec = opts.prec;
    let wp = prec + GUARD_BITS;
    let a = family.location(params, j, k_prime, n, wp);
    let point = restrict(s, j, &a, wp);
    let closed = family.closed_form(params, j, k_prime, n, &point, &a, opts)?;

    let radius = contour_radius(&family, params, &point, j, k_prime, opts)?;
    let center = point.get(d).clone();
    let slice = |z: &Complex| {
        let mut p = point.clone();
        p.set(d, z.clone());
        family.evaluate(params, &p, &opts.policy, prec)
    };
    let contour = contour_integral(
        slice,
        &center,
        radius,
        prec,
        opts.contour_tolerance,
        opts.max_nodes,
    )?;
    let diff = abs_f64(&Complex::with_val(wp, &closed - &contour.value));
    let rel_error = diff / abs_f64(&closed).max(contour.scale);
    Ok(ResidueValue {
        closed_form: Complex::with_val(prec, closed),
        numeric_check: contour.value,
        rel_error,
        location: Complex::with_val(prec, a),
        radius,
        nodes: contour.nodes,
    })
}

/// Residue of `ζ(s | r)` along `s_d(j) = a(k', n)`; `s_j` is solved from the
/// hyperplane equation and its given value ignored.
pub fn residue_shifted(
    params: &LucasParams,
    shift: &ShiftSpec,
    j: usize,
    k_prime: usize,
    n: i64,
    s: &MultiComplexPoint,
    opts: &ResidueOptions,
) -> Result<ResidueValue> {
    residue_general(params, Family::Shifted(shift), j, k_prime, n, s, opts)
}

fn full_point(partial: &[Complex], prec: u32) -> Result<MultiComplexPoint> {
    let mut coords: Vec<Complex> = partial.iter().map(|z| Complex::with_val(prec, z)).collect();
    coords.push(Complex::new(prec));
    MultiComplexPoint::new(coords)
}

/// Residue of the Dirichlet L-function along `s_d = a(k', n)` at the
/// partial point `(s_1, …, s_{d−1})`.
pub fn residue_dirichlet_last(
    params: &LucasParams,
    chars: &[DirichletCharacter],
    partial: &[Complex],
    k_prime: usize,
    n: i64,
    opts: &ResidueOptions,
) -> Result<ResidueValue> {
    let s = full_point(partial, opts.prec)?;
    residue_general(
        params,
        Family::Dirichlet(chars),
        chars.len(),
        k_prime,
        n,
        &s,
        opts,
    )
}

/// Residue of the Dirichlet L-function along `s_d(j) = a(k', n)`, `j < d`;
/// `s_j` is solved from the hyperplane equation.
pub fn residue_dirichlet_inner(
    params: &LucasParams,
    chars: &[DirichletCharacter],
    j: usize,
    k_prime: usize,
    n: i64,
    s: &MultiComplexPoint,
    opts: &ResidueOptions,
) -> Result<ResidueValue> {
    residue_general(params, Family::Dirichlet(chars), j, k_prime, n, s, opts)
}

/// Residue of the additive L-function along `s_d = b(k', n)`.
pub fn residue_additive_last(
    params: &LucasParams,
    f: &AdditiveTuple,
    partial: &[Complex],
    k_prime: usize,
    n: i64,
    opts: &ResidueOptions,
) -> Result<ResidueValue> {
    f.check_bound()?;
    let s = full_point(partial, opts.prec)?;
    residue_general(params, Family::Additive(f), f.depth(), k_prime, n, &s, opts)
}

/// Residue of the additive L-function along `s_d(j) = b(k', n)`, `j < d`.
pub fn residue_additive_inner(
    params: &LucasParams,
    f: &AdditiveTuple,
    j: usize,
    k_prime: usize,
    n: i64,
    s: &MultiComplexPoint,
    opts: &ResidueOptions,
) -> Result<ResidueValue> {
    f.check_bound()?;
    residue_general(params, Family::Additive(f), j, k_prime, n, s, opts)
}

/// One real-axis pole candidate and its exact certificate.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HolomorphyCandidate {
    pub k_sum: usize,
    pub n: i64,
    pub location: f64,
    /// `τ(χ, n) = 0` exactly.
    pub gauss_sum_vanishes: bool,
    /// The vanishing lemma applies (χ not definable mod `q/gcd(n, q)`).
    pub lemma_applies: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HolomorphyReport {
    pub character: String,
    pub modulus: u64,
    pub re_min: f64,
    pub re_max: f64,
    pub candidates: Vec<HolomorphyCandidate>,
    /// Every candidate has a vanishing Gauss sum.
    pub certified: bool,
}

/// Certifies, for every real pole candidate of `s_d` in `[re_min, re_max]`,
/// that the residue's character factor `Σ_r χ(r) ζ_q^{−nr} = χ(−1) τ(χ, n)`
/// vanishes exactly.
pub fn real_axis_holomorphy_report(
    chi: &DirichletCharacter,
    params: &LucasParams,
    re_min: f64,
    re_max: f64,
) -> Result<HolomorphyReport> {
    if chi.is_principal() {
        return Err(Error::PrincipalCharacter);
    }
    let q = chi.modulus();
    let candidates: Vec<HolomorphyCandidate> = real_axis_candidates(params, q, re_min, re_max, 128)
        .into_iter()
        .map(|(k_sum, n, location)| {
            let (lemma_applies, gauss_sum_vanishes) =
                crate::characters::gauss_vanishing_check(chi, n);
            HolomorphyCandidate {
                k_sum,
                n,
                location,
                gauss_sum_vanishes,
                lemma_applies,
            }
        })
        .collect();
    let certified = candidates.iter().all(|c| c.gauss_sum_vanishes);
    Ok(HolomorphyReport {
        character: chi.label(),
        modulus: q,
        re_min,
        re_max,
        candidates,
        certified,
    })
}

/// `1/(q ln α)`, the residue of `1/(1 − α^{−qs})` at `s = 0`.
pub fn basic_residue(params: &LucasParams, q: u64, prec: u32) -> Float {
    let ln_a = params.log_alpha(prec + 16);
    Float::with_val(prec, Float::with_val(prec + 16, 1) / (ln_a * q))
}

/// `2π/ln α`, the spacing of poles along one imaginary ladder when `q = 1`.
pub fn ladder_spacing(params: &LucasParams, prec: u32) -> Float {
    let pi = Float::with_val(prec, Constant::Pi);
    pi * 2u32 / params.log_alpha(prec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::enumerate_characters;

    fn fib() -> LucasParams {
        LucasParams::from_integers(1, -1).unwrap()
    }

    #[test]
    fn contour_of_one_over_s() {
        let zero = Complex::new(128);
        let r = numeric_residue(|z| Ok(Complex::with_val(128, 1) / z), &zero, 0.1, 128).unwrap();
        assert!(abs_f64(&(r - Complex::with_val(128, 1))) < 1e-30);
        let analytic = contour_integral(
            |z| Ok(Complex::with_val(128, z.exp_ref())),
            &zero,
            0.1,
            128,
            1e-20,
            4096,
        )
        .unwrap();
        assert!(abs_f64(&analytic.value) < 1e-20 * analytic.scale);
    }

    #[test]
    fn principal_mod_two_at_zero() {
        let p = fib();
        let chi = enumerate_characters(2);
        let r = residue_dirichlet_last(&p, &chi, &[], 0, 0, &ResidueOptions::new(128)).unwrap();
        let want = basic_residue(&p, 2, 128);
        assert!((r.closed_form.real().to_f64() - want.to_f64()).abs() < 1e-15);
        assert!((r.closed_form.real().to_f64() - 1.039).abs() < 1e-3);
        assert!(r.rel_error < 1e-15, "rel_error = {}", r.rel_error);
    }

    #[test]
    fn depth_two_inner_and_last() {
        let p = fib();
        let opts = ResidueOptions::new(128);
        let chars = vec![
            enumerate_characters(3)[1].clone(),
            enumerate_characters(3)[0].clone(),
        ];
        let s = MultiComplexPoint::from_f64(128, &[(2.3, 0.7), (0.4, -0.3)]).unwrap();
        let last = residue_dirichlet_last(&p, &chars, &s.coords()[..1], 1, -1, &opts).unwrap();
        assert!(last.rel_error < 1e-12, "last: {}", last.rel_error);
        let inner = residue_dirichlet_inner(&p, &chars, 1, 1, 1, &s, &opts).unwrap();
        assert!(inner.rel_error < 1e-12, "inner: {}", inner.rel_error);
    }

    #[test]
    fn additive_residues() {
        let p = fib();
        let opts = ResidueOptions::new(128);
        let f = AdditiveTuple::from_rationals(&[rug::Rational::from(1), rug::Rational::from(-1)])
            .unwrap();
        let s1 = [Complex::with_val(128, (2.3, 0.7))];
        let last = residue_additive_last(&p, &f, &s1, 0, 0, &opts).unwrap();
        assert!(last.rel_error < 1e-12, "last: {}", last.rel_error);
        let s = MultiComplexPoint::from_f64(128, &[(2.3, 0.7), (0.4, -0.3)]).unwrap();
        let inner = residue_additive_inner(&p, &f, 1, 2, -1, &s, &opts).unwrap();
        assert!(inner.rel_error < 1e-12, "inner: {}", inner.rel_error);
    }

    #[test]
    fn holomorphy_mod_four() {
        let chi = &enumerate_characters(4)[1];
        let report = real_axis_holomorphy_report(chi, &fib(), -6.0, 1.0).unwrap();
        assert!(report.certified);
        assert_eq!(report.candidates.len(), 4);
        let principal = &enumerate_characters(4)[0];
        assert_eq!(
            real_axis_holomorphy_report(principal, &fib(), -6.0, 1.0),
            Err(Error::PrincipalCharacter)
        );
    }
}
