use avoidance_core::enumerate::{count_a_k, count_avoiders, count_monotone_avoiders, growth_from_series};
use avoidance_core::injection::{inject, preimage};
use avoidance_core::perm::{family_a_ki, rank_profile};
use avoidance_core::series::{
    guess_dfinite, guess_rational, ode_to_recurrence, verify_ode, PolynomialODE,
};
use avoidance_core::tableaux::rsk;
use avoidance_core::{IntegerSeries, PatternSet, Permutation};
use num_bigint::BigUint;
use proptest::prelude::*;

#[test]
fn guessed_ode_extends_enumeration() {
    // Av(1234) is D-finite; guess from 40 terms, extend, compare with 60.
    let longer = count_monotone_avoiders(4, 59).unwrap();
    let s = longer.truncated(40);
    let ode = guess_dfinite(&s, 3, 4).expect("Av(1234) has a small ODE");
    assert!(verify_ode(&ode, &longer).unwrap().holds);
    let rec = ode_to_recurrence(&ode).unwrap();
    let ext = rec
        .extend_integers(&s.terms[..rec.initial_terms()], 60)
        .unwrap();
    assert_eq!(ext, longer.terms);
}

#[test]
fn shipped_ode_round_trips_through_text() {
    let ode = PolynomialODE::a55();
    let text = ode.to_string();
    assert!(text.starts_with("ode order=3 degree=8\n"));
    assert_eq!(text.parse::<PolynomialODE>().unwrap(), ode);
}

#[test]
fn rational_guess_for_av_123_132() {
    let set: PatternSet = "123,132".parse().unwrap();
    let s = count_avoiders(&set, 12);
    let g = guess_rational(&s).unwrap().unwrap();
    assert_eq!(g.to_string(), "(1,-1) / (1,-2)");
}

#[test]
fn series_json_and_csv() {
    let s = count_a_k(4, 7).unwrap();
    let json = serde_json::to_string(&s).unwrap();
    let back: IntegerSeries = serde_json::from_str(&json).unwrap();
    assert_eq!(back, s);
    let csv = s.to_csv();
    assert_eq!(IntegerSeries::from_csv(s.label.clone(), &csv).unwrap(), s);
}

#[test]
fn ratio_growth_of_a55() {
    let rec = ode_to_recurrence(&PolynomialODE::a55()).unwrap();
    let terms = rec.extend_integers(&[], 200).unwrap();
    let g = growth_from_series(&IntegerSeries::new("A(5,5)", terms)).unwrap();
    assert!((g.value - 10.0).abs() < 0.05, "{g:?}");
}

fn perm_strategy(max: usize) -> impl Strategy<Value = Permutation> {
    (0..=max).prop_flat_map(|n| {
        Just((1..=n as u32).collect::<Vec<_>>())
            .prop_shuffle()
            .prop_map(|v| Permutation::new(v).unwrap())
    })
}

proptest! {
    #[test]
    fn rsk_shape_matches_lis(p in perm_strategy(10)) {
        let (pt, qt) = rsk(&p);
        prop_assert_eq!(pt.shape(), qt.shape());
        let first = pt.shape().rows().first().copied().unwrap_or(0);
        prop_assert_eq!(first, p.longest_increasing_subsequence());
        let max_rank = rank_profile(&p).max_rank() as usize;
        prop_assert_eq!(max_rank, first);
    }

    #[test]
    fn injection_inverts_on_random_domain_members(p in perm_strategy(9), k in 3usize..=5) {
        let domain = family_a_ki(k, k - 1).unwrap();
        prop_assume!(avoidance_core::perm::avoids_all(&p, &domain));
        let image = inject(&p, k).unwrap();
        prop_assert_eq!(preimage(&image, k).unwrap(), Some(p));
    }

    #[test]
    fn guesses_reproduce_every_term(a0 in 1u64..5, ratio in 1u64..5, shift in 0u64..4, len in 10usize..16) {
        // Geometric plus constant: always rational, degree at most 2.
        let terms: Vec<u64> = (0..len as u32).map(|n| a0 * ratio.pow(n) + shift).collect();
        let s = IntegerSeries::from_u64("g", &terms);
        let g = guess_rational(&s).unwrap().expect("rational");
        let expanded = g.expand(len);
        for (x, &t) in expanded.iter().zip(&terms) {
            prop_assert_eq!(x.to_integer(), BigUint::from(t).into());
            prop_assert!(x.is_integer());
        }
        if let Some(ode) = guess_dfinite(&s, 2, 2) {
            prop_assert!(verify_ode(&ode, &s).unwrap().holds);
        }
    }
}
