use cfstammer::cf::{continuant, continuant_linear, continuant_product_tree};
use cfstammer::family::{Family, FamilyDescriptor};
use cfstammer::stammer::verdict::{general_rhs, sharp_rhs};
use cfstammer::stammer::{detect_repetitions, naive_repetitions, Witness};
use cfstammer::words::{Exponent, Letter};
use num_rational::Ratio;
use proptest::prelude::*;

fn word(max_letter: Letter, max_len: usize) -> impl Strategy<Value = Vec<Letter>> {
    prop::collection::vec(1..=max_letter, 1..=max_len)
}

fn min_w() -> impl Strategy<Value = Exponent> {
    prop_oneof![
        Just(Ratio::new(11, 10)),
        Just(Ratio::new(5, 4)),
        Just(Ratio::new(3, 2)),
        Just(Ratio::new(2, 1)),
    ]
}

proptest! {
    #[test]
    fn witnesses_hold_and_are_maximal(w in word(3, 120), max_r in 0usize..40, min_w in min_w()) {
        let found = detect_repetitions(&w, max_r, min_w);
        for x in &found {
            prop_assert!(x.holds_in(&w), "{x}");
            prop_assert!(x.is_maximal_in(&w), "{x}");
            prop_assert!(x.w >= min_w && x.r <= max_r);
            prop_assert!(x.end() <= w.len());
        }
        prop_assert!(found.windows(2).all(|p| (p[0].s, p[0].r) < (p[1].s, p[1].r)));
    }

    #[test]
    fn kept_witnesses_strictly_improve_per_period(w in word(2, 100), min_w in min_w()) {
        let found = detect_repetitions(&w, w.len(), min_w);
        for p in found.windows(2).filter(|p| p[0].s == p[1].s) {
            prop_assert!(p[0].r < p[1].r && p[0].w < p[1].w);
        }
    }

    #[test]
    fn detector_matches_naive_scanner(w in word(3, 80), max_r in 0usize..80, min_w in min_w()) {
        prop_assert_eq!(
            detect_repetitions(&w, max_r, min_w),
            naive_repetitions(&w, max_r, min_w)
        );
    }

    #[test]
    fn squares_are_found(v in word(4, 30), extra in 0usize..30) {
        let mut w = v.clone();
        w.extend_from_slice(&v);
        w.extend(v.iter().cycle().take(extra));
        let found = detect_repetitions(&w, 0, Ratio::from_integer(2));
        let s = v.len();
        prop_assert!(found.iter().any(|x: &Witness| x.s == s && x.r == 0));
    }

    #[test]
    fn sharp_bound_is_below_general(wp in 0.0f64..5.0, rho in 1.0f64..10.0) {
        prop_assert!(sharp_rhs(wp, rho) <= general_rhs(wp, rho));
    }

    #[test]
    fn continuant_mirror_and_split(w in word(10, 60), cut in any::<prop::sample::Index>()) {
        let k = continuant(&w).unwrap();
        let rev: Vec<Letter> = w.iter().rev().copied().collect();
        prop_assert_eq!(continuant(&rev).unwrap(), k.clone());
        let c = cut.index(w.len() + 1);
        let prod = continuant(&w[..c]).unwrap() * continuant(&w[c..]).unwrap();
        prop_assert!(prod <= k && k <= &prod * 2u32);
    }

    #[test]
    fn product_tree_matches_recurrence(w in word(1000, 400)) {
        prop_assert_eq!(continuant_product_tree(&w), continuant_linear(&w));
    }

    #[test]
    fn descriptor_round_trip(k in 2u64..6, seed in 0u64..100, pick in 0usize..4) {
        let desc = match pick {
            0 => format!("davison theta=golden k={k}"),
            1 => format!("paperfolding folds=seed:{seed}"),
            2 => format!("concat lambda=4 seed={seed}"),
            _ => format!("rudin-shapiro a={k} b={}", k + 1),
        };
        let d: FamilyDescriptor = desc.parse().unwrap();
        let again: FamilyDescriptor = d.to_string().parse().unwrap();
        prop_assert_eq!(&d, &again);
        let f = Family::from_descriptor(&d).unwrap();
        let g = Family::from_descriptor(&again).unwrap();
        prop_assert_eq!(f.prefix(200).unwrap(), g.prefix(200).unwrap());
    }
}
