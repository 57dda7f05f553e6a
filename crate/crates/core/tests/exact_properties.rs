//! Randomized invariants of the exact layer: symmetry implications, map
//! algebra, region identities, prefix extremes and the ordering chains.

mod common;

use common::*;
use proptest::prelude::*;
use stochex::extremes::{abs_coordinate_dist, abs_extreme_dist, verify_region_identities, Extreme};
use stochex::rational::{int, rat};
use stochex::stochorder::{classify, st_compare, strictness_witness, Label, Relation, StrictMode};
use stochex::symmetry::{check, check_re_kl, check_ure_lre, witness_reproduces, Condition, Side, SubSuper};
use stochex::{ExactJointDist, Rational, SignedPermutation, UnivariateDist};

fn raw_pmf(dim: usize, max_atoms: usize) -> impl Strategy<Value = ExactJointDist> {
    prop::collection::vec((prop::collection::vec(-3i64..=3, dim), 1u32..=9), 1..=max_atoms)
        .prop_map(move |raw| pmf_from_raw(dim, &raw))
}

fn signed_perm(dim: usize) -> impl Strategy<Value = SignedPermutation> {
    (Just((0..dim).collect::<Vec<_>>()).prop_shuffle(), prop::collection::vec(any::<bool>(), dim))
        .prop_map(|(s, n)| SignedPermutation::new(s, n).unwrap())
}

fn abs_law(range: i64) -> impl Strategy<Value = UnivariateDist> {
    prop::collection::btree_map(0..=range, 1i64..=9, 1..=(range as usize + 1)).prop_map(|m| {
        let total: i64 = m.values().sum();
        UnivariateDist::new(m.into_iter().map(|(v, w)| (int(v), rat(w, total)))).unwrap()
    })
}

fn holds(d: &ExactJointDist, c: Condition) -> bool {
    check(d, c).unwrap().holds
}

fn thresholds() -> Vec<Rational> {
    (0..=8).map(|i| rat(i, 2)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn symmetry_implication_chain(d in raw_pmf(2, 8)) {
        let swap = SignedPermutation::swap(2, 1, 2);
        let rev = SignedPermutation::reverse_pair(2, 1, 2);
        let esci = symmetrize(&d, &[swap.clone(), SignedPermutation::flip(2, 1)]);
        let ere = symmetrize(&d, &[swap, rev.clone()]);
        let re = symmetrize(&d, &[rev]);
        prop_assert!(holds(&esci, Condition::Esci));
        prop_assert!(holds(&ere, Condition::Ere));
        prop_assert!(holds(&re, Condition::Re));
        for x in [&d, &esci, &ere, &re] {
            let (s, e, r) = (holds(x, Condition::Esci), holds(x, Condition::Ere), holds(x, Condition::Re));
            let (u, l) = (holds(x, Condition::Ure), holds(x, Condition::Lre));
            prop_assert!(!s || e);
            prop_assert!(!e || r);
            prop_assert!(!r || (u && l));
        }
    }
}

proptest! {
    #[test]
    fn re_is_both_halves_plus_diagonal(d in raw_pmf(2, 8), upper in any::<bool>()) {
        let d = symmetrize_half(&symmetrize_half(&d, upper), !upper);
        let diagonal_symmetric = d
            .atoms()
            .iter()
            .filter(|a| a.point[0] == a.point[1])
            .all(|a| d.prob_at(&[-&a.point[0], -&a.point[1]]) == a.prob);
        prop_assert!(holds(&d, Condition::Ure) && holds(&d, Condition::Lre));
        prop_assert_eq!(holds(&d, Condition::Re), diagonal_symmetric);
    }

    #[test]
    fn transform_then_inverse_is_identity(d in raw_pmf(3, 10), m in signed_perm(3)) {
        let back = d.transform(&m).transform(&m.inverse());
        prop_assert!(back.equal(&d).unwrap());
        prop_assert_eq!(d.transform(&m).len(), d.len());
    }

    #[test]
    fn marginal_commutes_with_restricted_transform(d in raw_pmf(3, 10), m in signed_perm(3), mask in 1u8..7) {
        let kept: Vec<usize> = (0..3).filter(|i| mask & (1 << i) != 0).collect();
        if let Some(r) = m.restrict(&kept) {
            let one_based: Vec<usize> = kept.iter().map(|i| i + 1).collect();
            let lhs = d.transform(&m).marginal(&one_based).unwrap();
            let rhs = d.marginal(&one_based).unwrap().transform(&r);
            prop_assert!(lhs.equal(&rhs).unwrap());
        }
    }

    #[test]
    fn marginal_of_product_is_its_factor(a in abs_law(3), b in abs_law(2)) {
        let (fa, fb) = (UnivariateDist::symmetrize_abs(&a).unwrap(), b.clone());
        let d = ExactJointDist::product(&[fa.clone(), fb.clone()]).unwrap();
        prop_assert_eq!(d.coordinate(1).unwrap(), fa);
        prop_assert_eq!(d.coordinate(2).unwrap(), fb);
    }

    #[test]
    fn cdf_is_a_step_function_ending_at_one(a in abs_law(4)) {
        let mut prev = Rational::from_integer(0.into());
        for x in thresholds() {
            let f = a.cdf(&x);
            prop_assert!(f >= prev);
            prev = f;
        }
        prop_assert_eq!(a.cdf(&int(4)), Rational::from_integer(1.into()));
        prop_assert_eq!(a.cdf(&int(-1)), Rational::from_integer(0.into()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn region_identities_at_random_thresholds(d in raw_pmf(2, 10), xs in prop::collection::vec(0i64..=8, 5)) {
        for x in xs {
            let x = rat(x, 2);
            let r = verify_region_identities(&d, &x);
            prop_assert!(r.is_ok(), "{:?}", r.err());
            let r = r.unwrap();
            let total = &r.regions.north + &r.regions.south + &r.regions.east + &r.regions.west + &r.regions.center;
            prop_assert!(total <= Rational::from_integer(1.into()));
            prop_assert_eq!(r.cdf_abs_max, brute_cdf(&d, &x, abs_max));
            prop_assert_eq!(r.cdf_abs_min, brute_cdf(&d, &x, abs_min));
        }
    }
}

proptest! {
    #[test]
    fn prefix_extremes_match_enumeration(d in raw_pmf(4, 12)) {
        for l in 1..=4 {
            let mx = abs_extreme_dist(&d, l, Extreme::Max).unwrap();
            let mn = abs_extreme_dist(&d, l, Extreme::Min).unwrap();
            for x in thresholds() {
                prop_assert_eq!(mx.cdf(&x), brute_cdf(&d, &x, |p| abs_max(&p[..l])));
                prop_assert_eq!(mn.cdf(&x), brute_cdf(&d, &x, |p| abs_min(&p[..l])));
            }
        }
    }

    #[test]
    fn abs_min_is_abs_max_of_negation(d in raw_pmf(3, 10)) {
        let neg = d.transform(&SignedPermutation::negate_all(3));
        for l in 1..=3 {
            prop_assert_eq!(
                abs_extreme_dist(&d, l, Extreme::Min).unwrap(),
                abs_extreme_dist(&neg, l, Extreme::Max).unwrap()
            );
        }
    }

    #[test]
    fn re_kl_survives_global_sign_flip(d in raw_pmf(3, 10), k in 1usize..3, extra in 0usize..2) {
        let l = (k + 1 + extra).min(3);
        let d = if extra == 0 { symmetrize(&d, &[SignedPermutation::reverse_pair(3, k, l)]) } else { d };
        let flipped = d.transform(&SignedPermutation::negate_all(3));
        prop_assert_eq!(check_re_kl(&d, k, l).unwrap().holds, check_re_kl(&flipped, k, l).unwrap().holds);
    }

    #[test]
    fn failing_witnesses_reproduce(d2 in raw_pmf(2, 6), d3 in raw_pmf(3, 8)) {
        let bivariate = [
            Condition::Re, Condition::Exchangeable, Condition::Sci, Condition::Esci,
            Condition::Ere, Condition::Ure, Condition::Lre,
        ];
        for c in bivariate {
            let v = check(&d2, c).unwrap();
            prop_assert_eq!(v.holds, v.witness.is_none());
            if let Some(w) = &v.witness {
                prop_assert!(witness_reproduces(&d2, c, w));
            }
        }
        let variants = [SubSuper::UrSub, SubSuper::LrSub, SubSuper::UrSup, SubSuper::LrSup];
        for (k, l) in [(1, 2), (1, 3), (2, 3)] {
            let mut conds = vec![Condition::ReKl { k, l }];
            conds.extend(variants.iter().map(|&variant| Condition::SubSuperKl { variant, k, l }));
            for c in conds {
                let v = check(&d3, c).unwrap();
                if let Some(w) = &v.witness {
                    prop_assert!(witness_reproduces(&d3, c, w));
                }
            }
        }
    }

    #[test]
    fn re_kl_implies_every_one_sided_form(d in raw_pmf(3, 8), k in 1usize..3) {
        let d = symmetrize(&d, &[SignedPermutation::reverse_pair(3, k, 3)]);
        for variant in [SubSuper::UrSub, SubSuper::LrSub, SubSuper::UrSup, SubSuper::LrSup] {
            let c = Condition::SubSuperKl { variant, k, l: 3 };
            prop_assert!(holds(&d, c), "{} fails", c);
        }
    }

    #[test]
    fn upper_half_symmetry_pins_max_and_min(d in raw_pmf(2, 10), upper in any::<bool>()) {
        let d = symmetrize_half(&d, upper);
        let side = if upper { Side::Upper } else { Side::Lower };
        prop_assert!(check_ure_lre(&d, side).unwrap().holds);
        let (ax, ay) = (abs_coordinate_dist(&d, 1).unwrap(), abs_coordinate_dist(&d, 2).unwrap());
        let mx = abs_extreme_dist(&d, 2, Extreme::Max).unwrap();
        let mn = abs_extreme_dist(&d, 2, Extreme::Min).unwrap();
        if upper {
            prop_assert_eq!(mx, ax);
            prop_assert_eq!(mn, ay);
        } else {
            prop_assert_eq!(mx, ay);
            prop_assert_eq!(mn, ax);
        }
    }

    #[test]
    fn independent_symmetric_max_is_average(a in abs_law(4), b in abs_law(4)) {
        let d = symmetric_product(&[a.clone(), b.clone()]);
        let mx = abs_extreme_dist(&d, 2, Extreme::Max).unwrap();
        let mn = abs_extreme_dist(&d, 2, Extreme::Min).unwrap();
        prop_assert_eq!(&mx, &mn);
        for x in thresholds() {
            prop_assert_eq!(mx.cdf(&x), (a.cdf(&x) + b.cdf(&x)) * rat(1, 2));
        }
    }

    #[test]
    fn st_compare_agrees_with_cdf_scan(u in abs_law(4), v in abs_law(4)) {
        let xs: Vec<Rational> = (0..=4).map(int).collect();
        let above = xs.iter().any(|x| u.cdf(x) > v.cdf(x));
        let below = xs.iter().any(|x| u.cdf(x) < v.cdf(x));
        let want = match (above, below) {
            (false, false) => Relation::Equal,
            (true, false) => Relation::StrictlyLess,
            (false, true) => Relation::StrictlyGreater,
            (true, true) => Relation::Incomparable,
        };
        let got = st_compare(&u, &v);
        prop_assert_eq!(got.relation, want);
        prop_assert_eq!(st_compare(&v, &u).is_le(), got.is_ge());
        prop_assert_eq!(st_compare(&u, &u).relation, Relation::Equal);
    }

    #[test]
    fn st_compare_is_transitive(u in abs_law(3), v in abs_law(3), w in abs_law(3)) {
        if st_compare(&u, &v).is_le() && st_compare(&v, &w).is_le() {
            prop_assert!(st_compare(&u, &w).is_le());
        }
        if st_compare(&u, &v).is_le() && st_compare(&v, &u).is_le() {
            prop_assert_eq!(u, v);
        }
    }
}

fn starred(kind: Extreme, strict: bool) -> Label {
    Label::new(kind, strict, true)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reverse_pair_prefixes_give_starred_chains(d in raw_pmf(4, 6), ks in (1usize..2, 1usize..3, 1usize..4)) {
        let n = 4;
        let gens = [
            SignedPermutation::reverse_pair(n, ks.0, 2),
            SignedPermutation::reverse_pair(n, ks.1, 3),
            SignedPermutation::reverse_pair(n, ks.2, 4),
        ];
        let d = symmetrize(&d, &gens);
        for l in 2..=n {
            let prefix = d.prefix(l).unwrap();
            prop_assert!(check(&prefix, Condition::ReN).unwrap().holds);
        }
        let c = classify(&d).unwrap();
        prop_assert!(c.max_chain.satisfies(starred(Extreme::Max, false)));
        prop_assert!(c.min_chain.satisfies(starred(Extreme::Min, false)));
        let strict_everywhere = |mode| {
            (3..=n).all(|l| strictness_witness(&d.prefix(l).unwrap(), l, mode).unwrap().is_some())
        };
        if strict_everywhere(StrictMode::Above) {
            prop_assert!(c.max_chain.satisfies(starred(Extreme::Max, true)));
        }
        if strict_everywhere(StrictMode::Below) {
            prop_assert!(c.min_chain.satisfies(starred(Extreme::Min, true)));
        }
    }

    #[test]
    fn exchangeable_with_first_sign_flipped(d in raw_pmf(3, 8)) {
        let d = symmetrize(&d, &[SignedPermutation::swap(3, 1, 2), SignedPermutation::swap(3, 2, 3)]);
        prop_assert!(holds(&d, Condition::Exchangeable));
        let d = d.transform(&SignedPermutation::flip(3, 1));
        let c = classify(&d).unwrap();
        prop_assert!(c.max_chain.satisfies(starred(Extreme::Max, false)));
        prop_assert!(c.min_chain.satisfies(starred(Extreme::Min, false)));
    }
}
