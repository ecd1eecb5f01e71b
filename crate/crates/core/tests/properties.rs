mod common;

use std::cmp::Ordering;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::*;
use starline::expr::{format, parse, to_germ};
use starline::hyper::compare;
use starline::models::{self, FiniteFamily};
use starline::starsets::{as_hypernatural, compose, star_member};
use starline::{Germ, NatSet, RealSetDesc};

fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn printed_expressions_parse_back(seed in any::<u64>()) {
        let e = rand_expr(&mut seeded(seed), 3);
        let text = format(&e);
        let back = parse(&text).unwrap();
        prop_assert_eq!(format(&back), text);
        for n in 1..30 {
            prop_assert_eq!(oracle_eval(&back, n), oracle_eval(&e, n));
        }
    }

    #[test]
    fn germ_values_match_the_tree(seed in any::<u64>()) {
        let (e, g) = rand_germ(&mut seeded(seed), 3);
        let t = g.threshold();
        for n in t..t + 40 {
            prop_assert_eq!(g.value_at(n), oracle_eval(&e, n), "n = {}", n);
        }
        prop_assert_eq!(to_germ(&parse(&g.to_string()).unwrap()).unwrap(), g);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn natset_boolean_laws(s1 in any::<u64>(), s2 in any::<u64>(), s3 in any::<u64>()) {
        let a = rand_natset(&mut seeded(s1));
        let b = rand_natset(&mut seeded(s2));
        let c = rand_natset(&mut seeded(s3));
        prop_assert_eq!(a.union(&b).complement(), a.complement().intersect(&b.complement()));
        prop_assert_eq!(a.intersect(&b.union(&c)), a.intersect(&b).union(&a.intersect(&c)));
        prop_assert_eq!(a.difference(&b), a.intersect(&b.complement()));
        prop_assert_eq!(a.complement().complement(), a.clone());
        prop_assert!(a.intersect(&b).is_subset(&a));
        let horizon = a.threshold().max(b.threshold()) + 2 * a.modulus() * b.modulus();
        for n in 0..horizon {
            prop_assert_eq!(a.union(&b).member(n), a.member(n) || b.member(n));
            prop_assert_eq!(a.intersect(&b).member(n), a.member(n) && b.member(n));
        }
    }

    #[test]
    fn fragments_decide_coherently(s1 in any::<u64>(), s2 in any::<u64>(), sf in any::<u64>()) {
        let a = rand_natset(&mut seeded(s1));
        let b = rand_natset(&mut seeded(s2));
        let f = rand_fragment(&mut seeded(sf));
        prop_assert!(f.decide(&a) != f.decide(&a.complement()));
        prop_assert_eq!(f.decide(&a.intersect(&b)), f.decide(&a) && f.decide(&b));
        prop_assert_eq!(f.decide(&a.union(&b)), f.decide(&a) || f.decide(&b));
        if a.is_cofinite() {
            prop_assert!(f.decide(&a));
        }
        prop_assert!(!f.decide(&NatSet::empty()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn star_extension_preserves_boolean_structure(
        sx in any::<u64>(), sf in any::<u64>(), a in "[{(\\[]", lo in -3i64..3, w in 1i64..4, p in -3i64..3,
    ) {
        let (_, x) = rand_germ(&mut seeded(sx), 2);
        let f = rand_fragment(&mut seeded(sf));
        let open = if a == "[" { "[" } else { "(" };
        let set_a: RealSetDesc = format!("{open}{lo},{}]", lo + w).parse().unwrap();
        let set_b: RealSetDesc = format!("{{{p}}} ({},inf)", p + 1).parse().unwrap();
        let (ma, mb) = (star_member(&x, &set_a, &f), star_member(&x, &set_b, &f));
        prop_assert_eq!(star_member(&x, &set_a.union(&set_b), &f), ma || mb);
        prop_assert_eq!(star_member(&x, &set_a.intersect(&set_b), &f), ma && mb);
        prop_assert_eq!(star_member(&x, &set_a.complement(), &f), !ma);
    }

    #[test]
    fn composition_agrees_pointwise(sx in any::<u64>(), m in 1u64..4, r in 0u64..4, k in 1u64..3) {
        let (e, x) = rand_germ(&mut seeded(sx), 2);
        let omega = starline::expr::parse_germ(&format!("{m}*n^{k} + {r}")).unwrap();
        let omega = as_hypernatural(&omega, &Default::default()).unwrap();
        match compose(&x, &omega) {
            Ok(y) => {
                let t = y.threshold();
                for n in t..t + 20 {
                    let inner = m * n.pow(k as u32) + r;
                    prop_assert_eq!(y.value_at(n), oracle_eval(&e, inner), "n = {}", n);
                }
            }
            Err(err) => prop_assert!(matches!(err, starline::Error::TooLarge(_)), "{}", err),
        }
    }

    #[test]
    fn order_is_total_and_compatible(s1 in any::<u64>(), s2 in any::<u64>(), sf in any::<u64>()) {
        let (_, x) = rand_germ(&mut seeded(s1), 2);
        let (_, y) = rand_germ(&mut seeded(s2), 2);
        let f = rand_fragment(&mut seeded(sf));
        let ord = compare(&x, &y, &f);
        prop_assert_eq!(compare(&y, &x, &f), ord.reverse());
        prop_assert_eq!(ord == Ordering::Equal, x.eq_rel(&y, &f));
        let one = Germ::one();
        prop_assert_eq!(compare(&(&x + &one), &(&y + &one), &f), ord);
    }
}

#[test]
fn dichotomy_and_union_lemma_on_small_universes() {
    for k in 1..=models::MAX_UNIVERSE {
        for u in models::enumerate_ultrafilters(k).unwrap() {
            assert_dichotomy(&u, k);
        }
        for f in models::enumerate_filters(k).unwrap() {
            let is_ultra = f.has_dichotomy();
            let points = models::enumerate_ultrafilters(k).unwrap();
            assert_eq!(is_ultra, points.contains(&f), "{f}");
        }
    }
}

fn assert_dichotomy(u: &FiniteFamily, k: usize) {
    let all = (1u32 << k) - 1;
    for a in 0..=all {
        assert!(u.contains(a) != u.contains(all & !a), "{u} splits {a:b}");
        for b in 0..=all {
            assert_eq!(u.contains(a | b), u.contains(a) || u.contains(b), "{u} on {a:b} ∪ {b:b}");
        }
    }
}
