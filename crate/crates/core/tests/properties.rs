use ergo_core::sample::{random_induced_product, random_nonempty_set, random_periodic};
use ergo_core::*;
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn elem(seed: u64, depth: u32, w: u64) -> FullGroupElement {
    random_element(depth, w, seed).unwrap()
}

fn set(seed: u64, depth: u32) -> ClopenSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_nonempty_set(&mut rng, depth, 0.5).unwrap()
}

fn zero() -> BigInt {
    BigInt::from(0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn group_axioms(s in any::<u64>(), d1 in 0u32..6, d2 in 0u32..6, d3 in 0u32..6) {
        let (u, v, w) = (elem(s, d1, 4), elem(s ^ 1, d2, 4), elem(s ^ 2, d3, 4));
        prop_assert_eq!(u.compose(&v).compose(&w), u.compose(&v.compose(&w)));
        prop_assert!(u.compose(&u.inverse()).is_identity());
        prop_assert!(u.inverse().compose(&u).is_identity());
        prop_assert_eq!(u.compose(&FullGroupElement::identity()), u.clone());
        prop_assert_eq!(u.inverse().inverse(), u);
    }

    #[test]
    fn index_is_a_homomorphism(s in any::<u64>(), d1 in 0u32..7, d2 in 0u32..7, w in 0u64..9) {
        let (u, v) = (elem(s, d1, w), elem(s.wrapping_add(7), d2, w));
        prop_assert_eq!(u.compose(&v).index(), u.index() + v.index());
        prop_assert_eq!(u.commutator(&v).index(), zero());
        prop_assert_eq!(u.inverse().index(), -u.index());
        prop_assert!(u.index_dyadic().is_integer());
    }

    #[test]
    fn l1_metric_contracts(s in any::<u64>(), d in 0u32..6) {
        let (u, v, w) = (elem(s, d, 3), elem(s ^ 3, d, 3), elem(s ^ 5, d + 1, 3));
        let l1 = |a: &FullGroupElement, b: &FullGroupElement| a.metric(b, Metric::L1);
        prop_assert_eq!(l1(&u.compose(&w), &v.compose(&w)), l1(&u, &v));
        prop_assert!(u.metric(&v, Metric::Uniform) <= l1(&u, &v));
        prop_assert!(l1(&u, &v) <= l1(&u, &w) + l1(&w, &v));
        prop_assert_eq!(l1(&u, &v), u.metric(&v, Metric::Lp(1)));
        prop_assert!(l1(&u, &u).is_zero());
        prop_assert_eq!(l1(&u, &v), l1(&v, &u));
    }

    #[test]
    fn orbit_partial_sums_advance_by_displacement(s in any::<u64>(), d in 0u32..6, w in 0u64..5) {
        let u = elem(s, d, w);
        for cycle in u.orbit_decomposition().cycles {
            let len = cycle.prefixes.len();
            let sums = u.partial_sums(cycle.prefixes[0], 2 * len);
            for k in 0..len {
                prop_assert_eq!(&sums[k + len], &(&sums[k] + &cycle.displacement));
            }
        }
    }

    #[test]
    fn periodic_elements(s in any::<u64>(), d in 0u32..7, w in 0u64..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let u = random_periodic(&mut rng, d, w).unwrap();
        let order = u.is_periodic();
        prop_assert!(order.is_some());
        prop_assert_eq!(u.index(), zero());
        let order = u64::try_from(order.unwrap()).unwrap();
        if order <= 1 << 12 {
            prop_assert!(u.power(order as i64).is_identity());
        }
    }

    #[test]
    fn induction(s in any::<u64>(), d in 0u32..6, da in 0u32..6) {
        let u = elem(s, d, 3);
        let a = set(s ^ 9, da);
        let r = induce(&u, &a).unwrap();
        if r.meets_every_nontrivial_orbit {
            prop_assert_eq!(r.element.index(), u.index());
        }
        let id = FullGroupElement::identity();
        prop_assert!(r.element.metric(&id, Metric::L1) <= u.metric(&id, Metric::L1));
        prop_assert!(r.element.support().is_subset(&a));
        prop_assert_eq!(kac_check(&a).unwrap(), Dyadic::one());
    }

    #[test]
    fn decomposition(s in any::<u64>(), d in 0u32..7, w in 0u64..5) {
        let u = elem(s, d, w);
        let p = decompose_pnp(&u);
        prop_assert_eq!(p.periodic.compose(&p.positive).compose(&p.negative), u.clone());
        let (sp, s1, s2) = (p.periodic.support(), p.positive.support(), p.negative.support());
        prop_assert!(sp.is_disjoint(&s1) && sp.is_disjoint(&s2) && s1.is_disjoint(&s2));
        prop_assert!(p.periodic.is_periodic().is_some());
        prop_assert_eq!(p.periodic.compose(&p.positive), p.positive.compose(&p.periodic));
        prop_assert_eq!(p.positive.compose(&p.negative), p.negative.compose(&p.positive));
        prop_assert_eq!(p.periodic.compose(&p.negative), p.negative.compose(&p.periodic));

        let q = positivize(&p.positive).unwrap();
        prop_assert!(q.positive.is_positive());
        prop_assert_eq!(q.positive.index(), p.positive.index());
        prop_assert!(q.left_periodic.is_periodic().is_some());
        prop_assert!(q.right_periodic.is_periodic().is_some());
        prop_assert_eq!(q.left_periodic.compose(&q.positive), p.positive.clone());
        prop_assert_eq!(q.positive.compose(&q.right_periodic), p.positive);
    }

    #[test]
    fn positive_factorization(s in any::<u64>(), k in 0usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let u = random_induced_product(&mut rng, 4, k).unwrap();
        let cert = factor_positive(&u).unwrap();
        prop_assert!(cert.verified);
        prop_assert_eq!(BigInt::from(cert.word.len()), u.index());
        prop_assert!(cert.word.iter().all(|f| matches!(f, Factor::InducedOn(_))));
        prop_assert_eq!(cert.product().unwrap(), u);
    }

    #[test]
    fn normal_forms(s in any::<u64>(), d in 0u32..5, w in 0u64..3) {
        let u = elem(s, d, w);
        let cert = normal_form(&u).unwrap();
        prop_assert!(cert.verified);
        prop_assert_eq!(cert.product().unwrap(), u.clone());
        let (last, body) = cert.word.split_last().unwrap();
        prop_assert_eq!(last, &Factor::PowerOfT(u.index()));
        for f in body {
            prop_assert!(f.is_well_formed());
            prop_assert!(matches!(f, Factor::InducedOn(_) | Factor::Periodic(_)));
        }
    }

    #[test]
    fn involution_factorization(s in any::<u64>(), d in 0u32..7, w in 0u64..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let u = random_periodic(&mut rng, d, w).unwrap();
        let cert = factor_periodic_into_involutions(&u).unwrap();
        prop_assert!(cert.verified);
        for f in &cert.word {
            prop_assert!(f.element().unwrap().is_involution());
        }
        prop_assert_eq!(cert.product().unwrap(), u);
    }

    #[test]
    fn set_algebra(s in any::<u64>(), d1 in 0u32..7, d2 in 0u32..7, k in -300i64..300) {
        let (a, b) = (set(s, d1), set(s ^ 4, d2));
        prop_assert_eq!(a.union(&b).measure() + a.intersection(&b).measure(), a.measure() + b.measure());
        prop_assert_eq!(a.translate(k).measure(), a.measure());
        prop_assert_eq!(a.translate(k).translate(-k), a.clone());
        let t = FullGroupElement::odometer_power(k);
        prop_assert_eq!(t.apply_to_set(&a), a.translate(k));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn counterexample_is_an_involution(n in 1u32..=8) {
        let u = counterexample_element(n).unwrap();
        prop_assert!(u.is_involution());
        prop_assert_eq!(u.support_measure(), Dyadic::pow2_inv(2 * u64::from(n)));
    }
}
