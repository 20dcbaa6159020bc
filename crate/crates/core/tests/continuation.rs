use proptest::prelude::*;
use rug::{Complex, Rational};

use lucas_dirichlet::additive::{AdditiveCharacter, AdditiveTuple};
use lucas_dirichlet::characters::character_by_label;
use lucas_dirichlet::continuation::{
    additive_l_cont, dirichlet_l_cont, shifted_zeta_cont, ContinuationSeries, TruncationPolicy,
};
use lucas_dirichlet::lucas::{LucasParams, LucasSequenceCache};
use lucas_dirichlet::numeric::{abs_f64, MultiComplexPoint};
use lucas_dirichlet::poles::pole_location_zeta;
use lucas_dirichlet::series::{
    direct_additive_l, direct_dirichlet_l, direct_shifted_zeta, ShiftSpec,
};

const PREC: u32 = 128;

fn params() -> impl Strategy<Value = (i64, i64)> {
    prop::sample::select(vec![(1, -1), (2, -1), (3, 1), (1, -3)])
}

fn close(a: &Complex, b: &Complex, tol: f64) -> bool {
    let diff = Complex::with_val(PREC, a - b);
    abs_f64(&diff) <= tol * abs_f64(b).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::with_cases(12) })]

    #[test]
    fn continuation_matches_direct_shifted(
        (p, q) in params(),
        modulus in 1u64..4,
        r in prop::collection::vec(1u64..4, 2),
        s in prop::collection::vec((0.7f64..2.0, -3.0f64..3.0), 2),
    ) {
        let lp = LucasParams::from_integers(p, q).unwrap();
        let r: Vec<u64> = r.into_iter().map(|x| (x - 1) % modulus + 1).collect();
        let shift = ShiftSpec::new(modulus, r).unwrap();
        let point = MultiComplexPoint::from_f64(PREC, &s).unwrap();
        let cache = LucasSequenceCache::new(lp.clone());
        let direct = direct_shifted_zeta(&cache, &shift, &point, 1e-22, PREC).unwrap();
        let cont = shifted_zeta_cont(&lp, &shift, &point, &TruncationPolicy::default(), PREC).unwrap();
        prop_assert!(close(&cont.value, &direct.value, 1e-18), "{} vs {}", cont.value, direct.value);
    }

    #[test]
    fn continuation_matches_direct_dirichlet(
        (p, q) in params(),
        labels in prop::sample::select(vec![("3:1", "3:0"), ("4:1", "4:1"), ("5:1", "5:2"), ("5:3", "5:0")]),
        s in prop::collection::vec((0.8f64..1.8, -2.0f64..2.0), 2),
    ) {
        let lp = LucasParams::from_integers(p, q).unwrap();
        let chars = vec![character_by_label(labels.0).unwrap(), character_by_label(labels.1).unwrap()];
        let point = MultiComplexPoint::from_f64(PREC, &s).unwrap();
        let cache = LucasSequenceCache::new(lp.clone());
        let direct = direct_dirichlet_l(&cache, &chars, &point, 1e-22, PREC).unwrap();
        let cont = dirichlet_l_cont(&lp, &chars, &point, &TruncationPolicy::default(), PREC).unwrap();
        prop_assert!(close(&cont.value, &direct.value, 1e-18));
    }

    #[test]
    fn continuation_matches_direct_additive(
        (p, q) in params(),
        (a, b, c) in prop::sample::select(vec![(3, 4, 5), (-5, 12, 13), (8, -15, 17), (0, 1, 1), (-7, -24, 25)]),
        s in prop::collection::vec((0.7f64..2.0, -2.0f64..2.0), 2),
    ) {
        let lp = LucasParams::from_integers(p, q).unwrap();
        let f1 = AdditiveCharacter::exact(Rational::from((a, c)), Rational::from((b, c))).unwrap();
        let f = AdditiveTuple::new(vec![f1, AdditiveCharacter::rational(Rational::from(1)).unwrap()]).unwrap();
        let point = MultiComplexPoint::from_f64(PREC, &s).unwrap();
        let cache = LucasSequenceCache::new(lp.clone());
        let direct = direct_additive_l(&cache, &f, &point, 1e-22, PREC).unwrap();
        let cont = additive_l_cont(&lp, &f, &point, &TruncationPolicy::default(), PREC).unwrap();
        prop_assert!(close(&cont.value, &direct.value, 1e-18));
    }

    #[test]
    fn error_bound_is_honest_under_precision_change(
        (p, q) in params(),
        s in prop::collection::vec((-2.5f64..0.5, -2.0f64..2.0), 2),
    ) {
        let lp = LucasParams::from_integers(p, q).unwrap();
        let shift = ShiftSpec::new(1, vec![1, 1]).unwrap();
        let point = MultiComplexPoint::from_f64(PREC, &s).unwrap();
        let policy = TruncationPolicy::with_epsilon(1e-18);
        let Ok(low) = shifted_zeta_cont(&lp, &shift, &point, &policy, PREC) else {
            return Ok(());
        };
        let high = shifted_zeta_cont(&lp, &shift, &point, &TruncationPolicy::with_epsilon(1e-40), 256).unwrap();
        let diff = abs_f64(&Complex::with_val(256, &low.value - &high.value));
        prop_assert!(diff <= low.error_bound() + high.error_bound());
    }
}

#[test]
fn fibonacci_shifted_value() {
    let lp = LucasParams::from_integers(1, -1).unwrap();
    let shift = ShiftSpec::new(2, vec![1]).unwrap();
    let point = MultiComplexPoint::from_f64(PREC, &[(2.0, 0.0)]).unwrap();
    let v = shifted_zeta_cont(&lp, &shift, &point, &TruncationPolicy::default(), PREC).unwrap();
    // Σ_{n≥0} F_{2n+1}^{-2}
    let expected = Complex::with_val(
        PREC,
        (rug::Float::parse("1.296930024811433153").unwrap(), 0),
    );
    assert!(close(&v.value, &expected, 1e-18));
}

#[test]
fn evaluation_refuses_pole_hyperplanes() {
    let lp = LucasParams::from_integers(1, -1).unwrap();
    let shift = ShiftSpec::new(1, vec![1, 1]).unwrap();
    for k in 0..3 {
        let pole = pole_location_zeta(&lp, 1, k, 1, PREC);
        let s2 = Complex::with_val(PREC, &pole - 0.5);
        let point = MultiComplexPoint::new(vec![Complex::with_val(PREC, (0.5, 0)), s2]).unwrap();
        let err =
            shifted_zeta_cont(&lp, &shift, &point, &TruncationPolicy::default(), PREC).unwrap_err();
        assert_eq!(err.kind(), "pole-proximity");
    }
}

#[test]
fn nearest_pole_reports_zero_distance_on_hyperplane() {
    let lp = LucasParams::from_integers(3, 1).unwrap();
    let shift = ShiftSpec::new(3, vec![1, 2]).unwrap();
    let series = ContinuationSeries::shifted(&lp, &shift, PREC);
    let pole = pole_location_zeta(&lp, 3, 2, -1, PREC);
    let near = series.nearest_pole(2, 2, &pole);
    assert!(near.distance < 1e-30);
}
