//! Identity suites: each one exercises a family of identities end to end
//! and reports one record per check.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rug::{Complex, Rational};
use serde::Serialize;

use crate::additive::{AdditiveCharacter, AdditiveTuple};
use crate::characters::{enumerate_characters, gauss_vanishing_check, DirichletCharacter};
use crate::continuation::{dirichlet_l_cont, shifted_zeta_cont, TruncationPolicy};
use crate::error::{Error, Result};
use crate::lucas::{LucasParams, LucasSequenceCache};
use crate::numeric::{abs_f64, MultiComplexPoint};
use crate::residues::{
    basic_residue, real_axis_holomorphy_report, residue_additive_inner, residue_additive_last,
    residue_dirichlet_inner, residue_dirichlet_last, ResidueOptions,
};
use crate::series::{direct_dirichlet_l, direct_shifted_zeta, ShiftSpec};
use crate::special::{
    galois_audit, holomorphic_at_neg, singular_by_scan, special_additive_exact, special_l_exact,
    special_zeta_exact, symmetrized_special_zeta, NegIntPoint,
};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub passed: bool,
    /// Error or count the check is judged on, when there is one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub metric: Option<f64>,
    pub detail: String,
}

impl CheckRecord {
    fn new(
        name: impl Into<String>,
        passed: bool,
        metric: Option<f64>,
        detail: impl Into<String>,
    ) -> Self {
        CheckRecord {
            name: name.into(),
            passed,
            metric,
            detail: detail.into(),
        }
    }

    fn error(name: impl Into<String>, e: &Error) -> Self {
        Self::new(name, false, None, format!("error: {e}"))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<CheckRecord>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| !c.passed)
    }

    /// Largest metric over all checks.
    pub fn max_metric(&self) -> Option<f64> {
        self.checks.iter().filter_map(|c| c.metric).reduce(f64::max)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteOptions {
    pub prec: u32,
    pub max_depth: usize,
    pub seed: u64,
    /// Random configurations for the oracle suite.
    pub samples: usize,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            prec: 128,
            max_depth: 3,
            seed: 20_240_917,
            samples: 100,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Oracle,
    Characters,
    Residues,
    Holomorphy,
    Rationality,
    Symmetrization,
    Predicate,
    Classical,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Oracle,
        Suite::Characters,
        Suite::Residues,
        Suite::Holomorphy,
        Suite::Rationality,
        Suite::Symmetrization,
        Suite::Predicate,
        Suite::Classical,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Oracle => "oracle",
            Suite::Characters => "characters",
            Suite::Residues => "residues",
            Suite::Holomorphy => "holomorphy",
            Suite::Rationality => "rationality",
            Suite::Symmetrization => "symmetrization",
            Suite::Predicate => "predicate",
            Suite::Classical => "classical",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite {s:?}")))
    }
}

pub fn run_suite(suite: Suite, opts: &SuiteOptions) -> SuiteReport {
    let checks = match suite {
        Suite::Oracle => oracle_suite(opts),
        Suite::Characters => character_suite(opts),
        Suite::Residues => residue_suite(opts),
        Suite::Holomorphy => holomorphy_suite(),
        Suite::Rationality => rationality_suite(opts),
        Suite::Symmetrization => symmetrization_suite(opts),
        Suite::Predicate => predicate_suite(opts),
        Suite::Classical => classical_suite(opts),
    };
    SuiteReport {
        suite: suite.name().to_string(),
        checks,
    }
}

fn params(p: i64, q: i64) -> LucasParams {
    LucasParams::from_integers(p, q).expect("valid parameters")
}

const ORACLE_PARAMS: [(i64, i64); 4] = [(1, -1), (2, -1), (3, 1), (1, -3)];
const SWEEP_PARAMS: [(i64, i64); 3] = [(1, -1), (2, -1), (3, 1)];

fn format_point(s: &MultiComplexPoint) -> String {
    let parts: Vec<String> = s
        .coords()
        .iter()
        .map(|z| format!("{:.4}{:+.4}i", z.real().to_f64(), z.imag().to_f64()))
        .collect();
    format!("({})", parts.join(", "))
}

/// A point whose suffix sums have real parts in `[0.25, 2.5]`.
fn random_domain_point(rng: &mut ChaCha8Rng, d: usize, prec: u32) -> MultiComplexPoint {
    let suffix: Vec<(f64, f64)> = (0..d)
        .map(|_| (rng.gen_range(0.25..2.5), rng.gen_range(-4.0..4.0)))
        .collect();
    let coords: Vec<(f64, f64)> = (0..d)
        .map(|j| match suffix.get(j + 1) {
            Some(next) => (suffix[j].0 - next.0, suffix[j].1 - next.1),
            None => suffix[j],
        })
        .collect();
    MultiComplexPoint::from_f64(prec, &coords).expect("nonempty")
}

struct OracleConfig {
    p: (i64, i64),
    shift: ShiftSpec,
    s: MultiComplexPoint,
}

fn oracle_suite(opts: &SuiteOptions) -> Vec<CheckRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let configs: Vec<OracleConfig> = (0..opts.samples)
        .map(|_| {
            let p = ORACLE_PARAMS[rng.gen_range(0..ORACLE_PARAMS.len())];
            let d = rng.gen_range(1..=opts.max_depth.clamp(1, 3));
            let q = rng.gen_range(2..=4u64);
            let r = (0..d).map(|_| rng.gen_range(1..=q)).collect();
            let s = random_domain_point(&mut rng, d, opts.prec);
            OracleConfig {
                p,
                shift: ShiftSpec::new(q, r).unwrap(),
                s,
            }
        })
        .collect();
    let policy = TruncationPolicy::with_epsilon(1e-20);
    configs
        .par_iter()
        .enumerate()
        .map(|(i, c)| {
            let name = format!(
                "#{i} P,Q={:?} q={} r={:?} s={}",
                c.p,
                c.shift.q(),
                c.shift.residues(),
                format_point(&c.s)
            );
            let lp = params(c.p.0, c.p.1);
            let run = || -> Result<CheckRecord> {
                let cont = shifted_zeta_cont(&lp, &c.shift, &c.s, &policy, opts.prec)?;
                let cache = LucasSequenceCache::new(lp.clone());
                let direct = direct_shifted_zeta(&cache, &c.shift, &c.s, 1e-20, opts.prec)?;
                let diff = abs_f64(&Complex::with_val(opts.prec, &cont.value - &direct.value));
                let bound = cont.error_bound() + direct.error_bound();
                Ok(CheckRecord::new(
                    name.clone(),
                    diff <= bound,
                    Some(diff),
                    format!("bound {bound:.3e}"),
                ))
            };
            run().unwrap_or_else(|e| CheckRecord::error(name.clone(), &e))
        })
        .collect()
}

fn character_tuples(q: u64, d: usize) -> Vec<Vec<DirichletCharacter>> {
    let all = enumerate_characters(q);
    let mut out = vec![Vec::new()];
    for _ in 0..d {
        out = out
            .into_iter()
            .flat_map(|t: Vec<DirichletCharacter>| {
                all.iter().map(move |c| {
                    let mut next = t.clone();
                    next.push(c.clone());
                    next
                })
            })
            .collect();
    }
    out
}

fn labels(chars: &[DirichletCharacter]) -> String {
    chars
        .iter()
        .map(|c| c.label())
        .collect::<Vec<_>>()
        .join(",")
}

/// `Σ_{r ∈ [1,q]^d} χ_1(R_1)⋯χ_d(R_d) ζ(s | r)` with the character values
/// taken as complex numbers.
fn explicit_r_sum(
    lp: &LucasParams,
    chars: &[DirichletCharacter],
    s: &MultiComplexPoint,
    policy: &TruncationPolicy,
    prec: u32,
) -> Result<Complex> {
    let q = chars[0].modulus();
    let d = chars.len();
    let mut total = Complex::new(prec + 32);
    let count = q.pow(d as u32);
    for idx in 0..count {
        let r: Vec<u64> = (0..d)
            .map(|i| (idx / q.pow((d - 1 - i) as u32)) % q + 1)
            .collect();
        let mut weight = Complex::with_val(prec + 32, 1);
        let mut acc = 0u64;
        for (chi, &ri) in chars.iter().zip(&r) {
            acc += ri;
            weight *= chi.value_complex(acc as i64, prec + 32);
        }
        if weight.is_zero() {
            continue;
        }
        let shift = ShiftSpec::new(q, r)?;
        total += weight * shifted_zeta_cont(lp, &shift, s, policy, prec + 32)?.value;
    }
    Ok(total)
}

fn character_suite(opts: &SuiteOptions) -> Vec<CheckRecord> {
    let lp = params(1, -1);
    let policy = TruncationPolicy::with_epsilon(1e-20);
    let points = [
        MultiComplexPoint::from_f64(opts.prec, &[(1.3, 0.4)]).unwrap(),
        MultiComplexPoint::from_f64(opts.prec, &[(0.6, -0.7), (0.9, 0.3)]).unwrap(),
    ];
    let mut jobs = Vec::new();
    for q in [2u64, 3, 4, 5] {
        for d in 1..=opts.max_depth.clamp(1, 2) {
            for chars in character_tuples(q, d) {
                jobs.push((chars, points[d - 1].clone()));
            }
        }
    }
    let cache = LucasSequenceCache::new(lp.clone());
    jobs.par_iter()
        .map(|(chars, s)| {
            let name = format!("chi=({}) s={}", labels(chars), format_point(s));
            let run = || -> Result<CheckRecord> {
                let cont = dirichlet_l_cont(&lp, chars, s, &policy, opts.prec)?.value;
                let explicit = explicit_r_sum(&lp, chars, s, &policy, opts.prec)?;
                let direct = direct_dirichlet_l(&cache, chars, s, 1e-20, opts.prec)?.value;
                let e1 = abs_f64(&Complex::with_val(opts.prec, &cont - &explicit));
                let e2 = abs_f64(&Complex::with_val(opts.prec, &cont - &direct));
                let err = e1.max(e2);
                Ok(CheckRecord::new(
                    name.clone(),
                    err <= 1e-15,
                    Some(err),
                    format!("|cont-rsum| {e1:.2e}, |cont-direct| {e2:.2e}"),
                ))
            };
            run().unwrap_or_else(|e| CheckRecord::error(name.clone(), &e))
        })
        .collect()
}

enum ResidueFamily {
    Characters(Vec<DirichletCharacter>),
    Additive(AdditiveTuple),
}

fn residue_families() -> Vec<((i64, i64), ResidueFamily)> {
    let chi = |q: u64, i: usize| enumerate_characters(q)[i].clone();
    let rat = |n: i64, d: i64| AdditiveCharacter::rational(Rational::from((n, d))).unwrap();
    let unit = AdditiveCharacter::exact(Rational::from((3, 5)), Rational::from((4, 5))).unwrap();
    vec![
        ((1, -1), ResidueFamily::Characters(vec![chi(2, 0)])),
        ((3, 1), ResidueFamily::Characters(vec![chi(3, 1)])),
        (
            (1, -1),
            ResidueFamily::Characters(vec![chi(4, 1), chi(4, 0)]),
        ),
        (
            (2, -1),
            ResidueFamily::Characters(vec![chi(5, 1), chi(5, 2)]),
        ),
        (
            (1, -1),
            ResidueFamily::Additive(AdditiveTuple::new(vec![rat(-1, 1)]).unwrap()),
        ),
        (
            (3, 1),
            ResidueFamily::Additive(AdditiveTuple::new(vec![rat(2, 1), rat(1, 2)]).unwrap()),
        ),
        (
            (1, -3),
            ResidueFamily::Additive(AdditiveTuple::new(vec![unit, rat(1, 1)]).unwrap()),
        ),
    ]
}

fn residue_suite(opts: &SuiteOptions) -> Vec<CheckRecord> {
    let ropts = ResidueOptions::new(opts.prec);
    let base = [(1.7, 0.4), (0.3, -0.6)];
    let mut jobs = Vec::new();
    for (fi, (p, fam)) in residue_families().iter().enumerate() {
        let d = match fam {
            ResidueFamily::Characters(c) => c.len(),
            ResidueFamily::Additive(f) => f.depth(),
        };
        if d > opts.max_depth {
            continue;
        }
        for j in 1..=d {
            for k in 0..=2usize {
                for n in -1..=1i64 {
                    jobs.push((fi, *p, j, k, n, d));
                }
            }
        }
    }
    let families = residue_families();
    jobs.par_iter()
        .map(|&(fi, p, j, k, n, d)| {
            let lp = params(p.0, p.1);
            let s = MultiComplexPoint::from_f64(opts.prec, &base[..d]).unwrap();
            let (label, result) = match &families[fi].1 {
                ResidueFamily::Characters(chars) => (
                    format!("chi=({})", labels(chars)),
                    if j == d {
                        residue_dirichlet_last(&lp, chars, &s.coords()[..d - 1], k, n, &ropts)
                    } else {
                        residue_dirichlet_inner(&lp, chars, j, k, n, &s, &ropts)
                    },
                ),
                ResidueFamily::Additive(f) => (
                    format!(
                        "f=({})",
                        f.chars()
                            .iter()
                            .map(|c| c.to_string())
                            .collect::<Vec<_>>()
                            .join(",")
                    ),
                    if j == d {
                        residue_additive_last(&lp, f, &s.coords()[..d - 1], k, n, &ropts)
                    } else {
                        residue_additive_inner(&lp, f, j, k, n, &s, &ropts)
                    },
                ),
            };
            let name = format!("P,Q={p:?} {label} j={j} k'={k} n={n}");
            match result {
                Ok(r) => CheckRecord::new(
                    name,
                    r.rel_error < 1e-8,
                    Some(r.rel_error),
                    format!(
                        "closed {:.6e}{:+.6e}i, radius {:.3}, nodes {}",
                        r.closed_form.real().to_f64(),
                        r.closed_form.imag().to_f64(),
                        r.radius,
                        r.nodes
                    ),
                ),
                Err(e) => CheckRecord::error(name, &e),
            }
        })
        .collect()
}

fn holomorphy_suite() -> Vec<CheckRecord> {
    let mut checks = Vec::new();
    for p in [(1, -1), (3, 1)] {
        let lp = params(p.0, p.1);
        for q in [3u64, 4, 5, 8] {
            for chi in enumerate_characters(q).iter().filter(|c| !c.is_principal()) {
                let name = format!("P,Q={p:?} chi={} Re in [-6,1]", chi.label());
                checks.push(match real_axis_holomorphy_report(chi, &lp, -6.0, 1.0) {
                    Ok(rep) => CheckRecord::new(
                        name,
                        rep.certified,
                        None,
                        format!(
                            "{} candidates, {} with tau(chi,n) = 0",
                            rep.candidates.len(),
                            rep.candidates
                                .iter()
                                .filter(|c| c.gauss_sum_vanishes)
                                .count()
                        ),
                    ),
                    Err(e) => CheckRecord::error(name, &e),
                });
            }
        }
    }
    let gauss: Vec<CheckRecord> = (2..=24u64)
        .into_par_iter()
        .map(|q| {
            let mut predicted = 0;
            let mut violations = Vec::new();
            for chi in enumerate_characters(q) {
                for a in 0..q as i64 {
                    let (pred, actual) = gauss_vanishing_check(&chi, a);
                    if pred {
                        predicted += 1;
                        if !actual {
                            violations.push(format!("{} a={a}", chi.label()));
                        }
                    }
                }
            }
            CheckRecord::new(
                format!("vanishing lemma q={q}"),
                violations.is_empty(),
                Some(violations.len() as f64),
                if violations.is_empty() {
                    format!("{predicted} predicted zeros, all exact")
                } else {
                    violations.join("; ")
                },
            )
        })
        .collect();
    checks.extend(gauss);
    checks
}

fn shift_tuples(q: u64, d: usize) -> Vec<ShiftSpec> {
    let count = q.pow(d as u32);
    (0..count)
        .map(|idx| {
            let r = (0..d)
                .map(|i| (idx / q.pow((d - 1 - i) as u32)) % q + 1)
                .collect();
            ShiftSpec::new(q, r).unwrap()
        })
        .collect()
}

/// Shifted-zeta sweep points `(params, shift, m)` with `d ≤ max_depth`,
/// `q ∈ {2, 3}`, `m_i ≤ 3`.
fn shifted_sweep(opts: &SuiteOptions) -> Vec<((i64, i64), ShiftSpec, NegIntPoint)> {
    let mut out = Vec::new();
    for p in SWEEP_PARAMS {
        for q in [2u64, 3] {
            for d in 1..=opts.max_depth.clamp(1, 3) {
                for m in NegIntPoint::grid(d, 3) {
                    for shift in shift_tuples(q, d) {
                        out.push((p, shift, m.clone()));
                    }
                }
            }
        }
    }
    out
}

fn tally(name: String, total: usize, failures: Vec<String>) -> CheckRecord {
    let detail = if failures.is_empty() {
        format!("{total} values")
    } else {
        format!(
            "{} of {total} failed: {}",
            failures.len(),
            failures.join("; ")
        )
    };
    CheckRecord::new(
        name,
        failures.is_empty(),
        Some(failures.len() as f64),
        detail,
    )
}

fn rationality_suite(opts: &SuiteOptions) -> Vec<CheckRecord> {
    let mut checks = Vec::new();
    let sweep = shifted_sweep(opts);
    for p in SWEEP_PARAMS {
        let lp = params(p.0, p.1);
        let points: Vec<_> = sweep
            .iter()
            .filter(|(pp, shift, m)| *pp == p && holomorphic_at_neg(&lp, shift.q(), m))
            .collect();
        let failures: Vec<String> = points
            .par_iter()
            .filter_map(|(_, shift, m)| match special_zeta_exact(&lp, shift, m) {
                Ok(r) if r.is_rational => None,
                Ok(r) if r.singular => Some(format!(
                    "q={} r={:?} m={m}: singular",
                    shift.q(),
                    shift.residues()
                )),
                Ok(r) => Some(format!(
                    "q={} r={:?} m={m}: {:?}",
                    shift.q(),
                    shift.residues(),
                    r.value
                )),
                Err(e) => Some(format!(
                    "q={} r={:?} m={m}: {e}",
                    shift.q(),
                    shift.residues()
                )),
            })
            .collect();
        checks.push(tally(
            format!("shifted zeta P,Q={p:?}"),
            points.len(),
            failures,
        ));

        let mut char_jobs = Vec::new();
        for q in [2u64, 3] {
            let real: Vec<DirichletCharacter> = enumerate_characters(q)
                .into_iter()
                .filter(|c| c.is_real())
                .collect();
            for d in 1..=opts.max_depth.clamp(1, 3) {
                for chars in character_tuples(q, d) {
                    if !chars.iter().all(|c| real.contains(c)) {
                        continue;
                    }
                    for m in NegIntPoint::grid(d, 3) {
                        if holomorphic_at_neg(&lp, q, &m) {
                            char_jobs.push((chars.clone(), m));
                        }
                    }
                }
            }
        }
        let failures: Vec<String> = char_jobs
            .par_iter()
            .filter_map(|(chars, m)| match special_l_exact(&lp, chars, m) {
                Ok(r) if r.is_rational => None,
                Ok(r) => Some(format!("chi=({}) m={m}: {:?}", labels(chars), r.value)),
                Err(e) => Some(format!("chi=({}) m={m}: {e}", labels(chars))),
            })
            .collect();
        checks.push(tally(
            format!("Dirichlet L P,Q={p:?}"),
            char_jobs.len(),
            failures,
        ));

        let values = [
            Rational::from(1),
            Rational::from(-1),
            Rational::from((1, 2)),
        ];
        let mut add_jobs = Vec::new();
        for d in 1..=opts.max_depth.clamp(1, 3) {
            let mut tuples = vec![Vec::new()];
            for _ in 0..d {
                tuples = tuples
                    .into_iter()
                    .flat_map(|t: Vec<Rational>| {
                        values.iter().map(move |v| {
                            let mut next = t.clone();
                            next.push(v.clone());
                            next
                        })
                    })
                    .collect();
            }
            for t in tuples {
                for m in NegIntPoint::grid(d, 3) {
                    add_jobs.push((AdditiveTuple::from_rationals(&t).unwrap(), m));
                }
            }
        }
        let evaluated: Vec<Option<String>> = add_jobs
            .par_iter()
            .map(|(f, m)| match special_additive_exact(&lp, f, m) {
                Ok(r) if r.singular || r.is_rational => None,
                Ok(r) => Some(format!("f={:?} m={m}: {:?}", f.rational_values(), r.value)),
                Err(e) => Some(format!("f={:?} m={m}: {e}", f.rational_values())),
            })
            .collect();
        let failures = evaluated.into_iter().flatten().collect();
        checks.push(tally(
            format!("additive L P,Q={p:?}"),
            add_jobs.len(),
            failures,
        ));
    }
    checks
}

fn symmetrization_suite(opts: &SuiteOptions) -> Vec<CheckRecord> {
    let sweep = shifted_sweep(opts);
    SWEEP_PARAMS
        .iter()
        .map(|&p| {
            let lp = params(p.0, p.1);
            let points: Vec<_> = sweep
                .iter()
                .filter(|(pp, shift, m)| *pp == p && holomorphic_at_neg(&lp, shift.q(), m))
                .collect();
            let failures: Vec<String> = points
                .par_iter()
                .filter_map(|(_, shift, m)| {
                    let tag = format!("q={} r={:?} m={m}", shift.q(), shift.residues());
                    let direct = match special_zeta_exact(&lp, shift, m) {
                        Ok(r) => r,
                        Err(e) => return Some(format!("{tag}: {e}")),
                    };
                    match symmetrized_special_zeta(&lp, shift, m) {
                        Ok((sym, terms)) => {
                            if sym.value != direct.value {
                                Some(format!("{tag}: symmetrized total differs"))
                            } else if !galois_audit(&terms, m) {
                                Some(format!("{tag}: conjugation pairing fails"))
                            } else {
                                None
                            }
                        }
                        Err(e) => Some(format!("{tag}: {e}")),
                    }
                })
                .collect();
            tally(format!("P,Q={p:?}"), points.len(), failures)
        })
        .collect()
}

fn predicate_suite(opts: &SuiteOptions) -> Vec<CheckRecord> {
    let mut checks = Vec::new();
    for p in SWEEP_PARAMS {
        let lp = params(p.0, p.1);
        for q in [2u64, 3] {
            let points: Vec<NegIntPoint> = (1..=opts.max_depth.clamp(1, 3))
                .flat_map(|d| NegIntPoint::grid(d, 3))
                .collect();
            let failures: Vec<String> = points
                .par_iter()
                .filter_map(|m| {
                    let predicate = holomorphic_at_neg(&lp, q, m);
                    let scan = !singular_by_scan(&lp, q, m);
                    (predicate != scan)
                        .then(|| format!("m={m}: predicate {predicate}, scan {scan}"))
                })
                .collect();
            checks.push(tally(format!("P,Q={p:?} q={q}"), points.len(), failures));
        }
    }
    checks
}

fn classical_suite(opts: &SuiteOptions) -> Vec<CheckRecord> {
    let mut checks = Vec::new();
    for q in [3u64, 4, 5, 7, 8] {
        for chi in enumerate_characters(q).iter().filter(|c| c.is_primitive()) {
            let tau = chi.gauss_sum(1);
            let norm = tau.mul(&tau.conj());
            let ok = norm.as_rational() == Some(Rational::from(q));
            checks.push(CheckRecord::new(
                format!("|tau({},1)|^2 = {q}", chi.label()),
                ok,
                None,
                format!("{norm}"),
            ));
        }
    }
    let fib = params(1, -1);
    let m1 = NegIntPoint::new(vec![1]).unwrap();
    let shift = ShiftSpec::new(2, vec![1]).unwrap();
    checks.push(match special_zeta_exact(&fib, &shift, &m1) {
        Ok(r) => CheckRecord::new(
            "Fibonacci zeta(-1 | q=2, r=1) = 0",
            r.value.as_ref().is_some_and(|v| v.is_zero()),
            None,
            r.value
                .map_or_else(|| "singular".to_string(), |v| v.to_string()),
        ),
        Err(e) => CheckRecord::error("Fibonacci zeta(-1 | q=2, r=1) = 0", &e),
    });
    let principal = enumerate_characters(2);
    let name = "residue at s=0, principal chi mod 2 = 1/(2 ln alpha)";
    checks.push(
        match residue_dirichlet_last(&fib, &principal, &[], 0, 0, &ResidueOptions::new(opts.prec)) {
            Ok(r) => {
                let want = basic_residue(&fib, 2, opts.prec);
                let err = abs_f64(&Complex::with_val(opts.prec, &r.closed_form - &want));
                let num_err = abs_f64(&Complex::with_val(opts.prec, &r.numeric_check - &want));
                let worst = err.max(num_err);
                CheckRecord::new(
                    name,
                    worst < 1e-10,
                    Some(worst),
                    format!("closed form err {err:.2e}, contour err {num_err:.2e}"),
                )
            }
            Err(e) => CheckRecord::error(name, &e),
        },
    );
    checks
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn classical_suite_passes() {
        let report = run_suite(Suite::Classical, &SuiteOptions::default());
        assert!(
            report.passed(),
            "{:#?}",
            report.failures().collect::<Vec<_>>()
        );
    }
}
