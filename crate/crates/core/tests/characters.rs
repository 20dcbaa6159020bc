use proptest::prelude::*;

use lucas_dirichlet::characters::{enumerate_characters, euler_phi, gauss_vanishing_check};

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::with_cases(64) })]

    #[test]
    fn characters_are_completely_multiplicative(q in 2u64..40, a in -50i64..50, b in -50i64..50) {
        for chi in enumerate_characters(q) {
            let order = chi.value_order();
            let lhs = chi.value_exponent(a * b);
            let rhs = chi.value_exponent(a).zip(chi.value_exponent(b)).map(|(x, y)| (x + y) % order);
            prop_assert_eq!(lhs, rhs, "{} at {} * {}", chi.label(), a, b);
        }
    }

    #[test]
    fn characters_are_periodic(q in 2u64..40, n in -100i64..100) {
        for chi in enumerate_characters(q) {
            prop_assert_eq!(chi.value_exponent(n), chi.value_exponent(n + q as i64));
        }
    }
}

#[test]
fn group_has_phi_characters() {
    for q in 2..60 {
        assert_eq!(enumerate_characters(q).len() as u64, euler_phi(q));
    }
}

#[test]
fn values_are_equidistributed_over_the_image() {
    // a nontrivial character takes each value in its image equally often,
    // which forces Σ_n χ(n) = 0
    for q in 2..30u64 {
        let phi = euler_phi(q);
        for chi in enumerate_characters(q) {
            let mut counts = vec![0u64; chi.value_order() as usize];
            for n in 0..q as i64 {
                if let Some(e) = chi.value_exponent(n) {
                    counts[e as usize] += 1;
                }
            }
            let image: Vec<u64> = counts.into_iter().filter(|&c| c > 0).collect();
            assert_eq!(image.len() == 1, chi.is_principal(), "{}", chi.label());
            assert!(
                image.iter().all(|&c| c * image.len() as u64 == phi),
                "{}",
                chi.label()
            );
        }
    }
}

#[test]
fn primitive_gauss_sums_vanish_off_units() {
    for q in 3..25u64 {
        for chi in enumerate_characters(q)
            .into_iter()
            .filter(|c| c.is_primitive())
        {
            for a in 1..q as i64 {
                let (predicted, actual) = gauss_vanishing_check(&chi, a);
                let coprime = rug::Integer::from(a).gcd(&rug::Integer::from(q)) == 1;
                assert_eq!(actual, !coprime, "{} at {a}", chi.label());
                assert_eq!(predicted, actual, "{} at {a}", chi.label());
            }
        }
    }
}
