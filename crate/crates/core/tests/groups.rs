mod common;

use std::collections::{BTreeMap, HashSet};

use num_bigint::BigUint;
use polyscan::catalog;
use polyscan::conjugacy::{conjugacy_classes, involution_classes, ClassOptions};
use polyscan::io::{parse_class_listing, parse_permutation_list, write_class_listing, ClassListing};
use polyscan::{PermGroup, Permutation, SearchBudget};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn perm(s: &str) -> Permutation {
    parse_permutation_list(s).unwrap().remove(0)
}

fn small_catalog() -> Vec<catalog::CatalogEntry> {
    catalog::entries().into_iter().filter(|e| e.order <= 10_000).collect()
}

#[test]
fn catalog_orders_match_closure() {
    for e in small_catalog() {
        let g = e.group();
        let degree = g.degree();
        let elements = common::closure(&e.generators, degree);
        assert_eq!(elements.len() as u64, e.order, "{}", e.name);
        assert_eq!(g.order(), &BigUint::from(e.order), "{}", e.name);
        let product: usize = g.basic_orbit_lengths().iter().product();
        assert_eq!(product as u64, e.order, "{}", e.name);
    }
}

#[test]
fn membership_is_the_element_set() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for e in small_catalog() {
        let g = e.group();
        let degree = g.degree();
        let elements: HashSet<Permutation> = common::closure(&e.generators, degree).into_iter().collect();
        for x in &elements {
            assert!(g.contains(x), "{}: {x}", e.name);
        }
        // random permutations of the same points, most of them outside
        for _ in 0..500 {
            let mut images: Vec<u32> = (0..degree as u32).collect();
            for i in (1..degree).rev() {
                images.swap(i, rng.gen_range(0..=i));
            }
            let p = Permutation::from_images(images).unwrap();
            assert_eq!(g.contains(&p), elements.contains(&p), "{}: {p}", e.name);
        }
    }
}

#[test]
fn class_inventory_matches_brute_force() {
    for e in small_catalog() {
        let g = e.group();
        let elements = common::closure(&e.generators, g.degree());
        let brute = common::brute_classes(&elements);
        let t = conjugacy_classes(&g, &ClassOptions::default()).unwrap();
        assert_eq!(t.len(), e.class_count, "{}", e.name);
        assert_eq!(t.len(), brute.sizes.len(), "{}", e.name);
        let mut ours: Vec<(u64, u64)> = t
            .classes()
            .iter()
            .map(|c| (c.element_order, u64::try_from(&c.size).unwrap()))
            .collect();
        let mut theirs: Vec<(u64, u64)> = brute
            .orders
            .iter()
            .zip(&brute.sizes)
            .map(|(&o, &s)| (o, s as u64))
            .collect();
        ours.sort();
        theirs.sort();
        assert_eq!(ours, theirs, "{}", e.name);
        // square map, compared through the brute-force class ids
        let id: Vec<usize> = t.classes().iter().map(|c| brute.class_of[&c.representative]).collect();
        let mut seen = HashSet::new();
        assert!(id.iter().all(|i| seen.insert(*i)), "{}: two classes fuse", e.name);
        for (i, c) in t.classes().iter().enumerate() {
            assert_eq!(id[t.square_map()[i]], brute.squares[id[i]], "{} class {}", e.name, i);
            assert_eq!(c.element_order, brute.orders[id[i]]);
        }
        assert!(t.classes()[0].representative.is_identity());
    }
}

#[test]
fn canonical_order_and_seed_independence() {
    for e in small_catalog() {
        let g = e.group();
        let a = conjugacy_classes(&g, &ClassOptions::default()).unwrap();
        let b = conjugacy_classes(
            &g,
            &ClassOptions {
                seed: 99,
                ..ClassOptions::default()
            },
        )
        .unwrap();
        let key = |t: &polyscan::conjugacy::ClassTable<'_>| {
            t.classes()
                .iter()
                .map(|c| (c.element_order, c.size.clone(), c.representative.clone()))
                .collect::<Vec<_>>()
        };
        assert_eq!(key(&a), key(&b), "{}", e.name);
        let k = key(&a);
        for w in k.windows(2) {
            assert!((w[0].0, &w[0].1) <= (w[1].0, &w[1].1), "{}", e.name);
        }
    }
}

#[test]
fn random_class_search_agrees_with_enumeration() {
    for name in ["S6", "PSL(2,7)", "D24", "Q8", "A5"] {
        let e = catalog::lookup(name).unwrap();
        let g = e.group();
        let brute = conjugacy_classes(&g, &ClassOptions::default()).unwrap();
        let random = conjugacy_classes(
            &g,
            &ClassOptions {
                brute_force_max: 0,
                ..ClassOptions::default()
            },
        )
        .unwrap();
        let sig = |t: &polyscan::conjugacy::ClassTable<'_>| {
            t.classes()
                .iter()
                .map(|c| (c.element_order, c.size.clone()))
                .collect::<Vec<_>>()
        };
        assert_eq!(sig(&brute), sig(&random), "{name}");
        for (i, c) in random.classes().iter().enumerate() {
            assert_eq!(brute.class_of(&c.representative).unwrap(), i, "{name}");
        }
        assert_eq!(brute.square_map(), random.square_map(), "{name}");
    }
}

#[test]
fn class_of_squares_follows_square_map() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for e in small_catalog() {
        let g = e.group();
        let t = conjugacy_classes(&g, &ClassOptions::default()).unwrap();
        for _ in 0..1000 {
            let x = g.random_element(&mut rng);
            let c = t.class_of(&x).unwrap();
            assert_eq!(t.class_of(&x.compose(&x)).unwrap(), t.square_map()[c], "{}", e.name);
        }
    }
}

#[test]
fn orbit_stabilizer() {
    let budget = SearchBudget::default();
    for e in small_catalog() {
        let g = e.group();
        let t = conjugacy_classes(&g, &ClassOptions::default()).unwrap();
        for c in t.classes() {
            let cen = g.centralizer(&c.representative, &budget).unwrap();
            assert_eq!(&c.size * cen.order(), *g.order(), "{}", e.name);
            for s in cen.generators() {
                assert_eq!(s.compose(&c.representative), c.representative.compose(s));
            }
        }
    }
}

#[test]
fn conjugating_elements_are_witnesses() {
    let budget = SearchBudget::default();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for name in ["S5", "A5", "PSL(2,7)", "D20", "Q8"] {
        let g = catalog::lookup(name).unwrap().group();
        let t = conjugacy_classes(&g, &ClassOptions::default()).unwrap();
        for _ in 0..50 {
            let a = g.random_element(&mut rng);
            let b = g.random_element(&mut rng);
            let w = g.conjugating_element(&a, &b, &budget).unwrap();
            let same = t.class_of(&a).unwrap() == t.class_of(&b).unwrap();
            assert_eq!(w.is_some(), same, "{name}");
            if let Some(w) = w {
                assert_eq!(a.conjugate_by(&w), b);
                assert!(g.contains(&w));
            }
        }
    }
}

#[test]
fn perm_examples() {
    assert_eq!(perm("(1,2)").compose(&perm("(2,3)")), perm("(1,3,2)"));
    assert_eq!(perm("(1,2,3)").inverse(), perm("(1,3,2)"));
    assert_eq!(perm("(1,2)(3,4,5)").order_u64(), Some(6));
    assert_eq!(perm("()").order_u64(), Some(1));
    let s3 = PermGroup::new(vec![perm("(1,2)"), perm("(1,2,3)")], 1);
    assert_eq!(s3.order(), &BigUint::from(6u32));
    assert!(s3.contains(&perm("(1,3)")));
    let c3 = PermGroup::new(vec![perm("(1,2,3)")], 1);
    assert!(!c3.contains(&perm("(1,2)")));
    let s5 = PermGroup::new(vec![perm("(1,2,3,4,5)"), perm("(1,2)")], 1);
    assert_eq!(s5.order(), &BigUint::from(120u32));
    let s4 = catalog::lookup("S4").unwrap().group();
    assert_eq!(s4.subgroup(&[perm("(1,2)")], 1).unwrap().order(), &BigUint::from(2u32));
    assert!(s4.subgroup(&[], 1).unwrap().is_trivial());
    assert!(s4.subgroup(&[perm("(1,5)")], 1).is_err());
    let c = s3.centralizer(&perm("(1,2,3)"), &SearchBudget::default()).unwrap();
    assert_eq!(c.order(), &BigUint::from(3u32));
    let b = SearchBudget::default();
    assert!(s3
        .conjugating_element(&perm("(1,2)"), &perm("(1,2,3)"), &b)
        .unwrap()
        .is_none());
    assert_eq!(
        s3.conjugating_element(&perm("(1,2)"), &perm("(1,2)"), &b)
            .unwrap()
            .map(|w| perm("(1,2)").conjugate_by(&w)),
        Some(perm("(1,2)"))
    );
}

#[test]
fn random_elements_cover_all_classes_of_s4() {
    let g = catalog::lookup("S4").unwrap().group();
    let t = conjugacy_classes(&g, &ClassOptions::default()).unwrap();
    let mut tally = BTreeMap::new();
    for x in g.random_stream(5).take(100_000) {
        *tally.entry(t.class_of(&x).unwrap()).or_insert(0u32) += 1;
    }
    assert_eq!(tally.len(), 5);
    // frequencies proportional to class sizes, within a loose band
    for c in t.classes() {
        let expected = 100_000.0 * u64::try_from(&c.size).unwrap() as f64 / 24.0;
        let got = tally[&c.index] as f64;
        assert!((got - expected).abs() < 0.05 * expected, "class {} got {got}", c.index);
    }
}

#[test]
fn involution_class_examples() {
    let s4 = catalog::lookup("S4").unwrap().group();
    let t = conjugacy_classes(&s4, &ClassOptions::default()).unwrap();
    let sizes: Vec<String> = involution_classes(&t).iter().map(|c| c.size.to_string()).collect();
    assert_eq!(sizes, ["3", "6"]);
    let c3 = PermGroup::new(vec![perm("(1,2,3)")], 1);
    let t = conjugacy_classes(&c3, &ClassOptions::default()).unwrap();
    assert!(involution_classes(&t).is_empty());
    let s3 = catalog::lookup("S3").unwrap().group();
    let t = conjugacy_classes(&s3, &ClassOptions::default()).unwrap();
    let sizes: Vec<String> = t.classes().iter().map(|c| c.size.to_string()).collect();
    assert_eq!(sizes, ["1", "3", "2"]);
    assert_eq!(t.class_of(&perm("(1,2)")).unwrap(), 1);
    // 4-cycles square into the class of (1,3)(2,4)
    let t = conjugacy_classes(&s4, &ClassOptions::default()).unwrap();
    let four = t.class_of(&perm("(1,2,3,4)")).unwrap();
    assert_eq!(t.square_map()[four], t.class_of(&perm("(1,3)(2,4)")).unwrap());
}

#[test]
fn class_listing_round_trip() {
    for e in small_catalog() {
        let g = e.group();
        let t = conjugacy_classes(&g, &ClassOptions::default()).unwrap();
        let text = write_class_listing(&ClassListing::from_table(&t));
        let back = parse_class_listing(&text).unwrap();
        assert_eq!(write_class_listing(&back), text);
        for (c, r) in t.classes().iter().zip(&back.classes) {
            assert_eq!(perm(&r.representative), c.representative);
        }
    }
}

fn arb_perm(n: usize) -> impl Strategy<Value = Permutation> {
    Just((0..n as u32).collect::<Vec<u32>>())
        .prop_shuffle()
        .prop_map(|v| Permutation::from_images(v).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn composition_laws(a in arb_perm(9), b in arb_perm(9), c in arb_perm(9)) {
        prop_assert_eq!(a.compose(&b).compose(&c), a.compose(&b.compose(&c)));
        prop_assert!(a.compose(&a.inverse()).is_identity());
        prop_assert_eq!(Permutation::identity(9).compose(&a), a.clone());
        let o = a.order_u64().unwrap();
        prop_assert!(a.pow(o as i64).is_identity());
        prop_assert_eq!(perm(&a.to_string()), a.clone());
        for i in 0..9u32 {
            prop_assert_eq!(a.compose(&b).apply(i), b.apply(a.apply(i)));
        }
    }

    #[test]
    fn generated_groups_are_consistent(a in arb_perm(7), b in arb_perm(7), seed in 0u64..1000) {
        let g = PermGroup::new(vec![a.clone(), b.clone()], seed);
        let elems = common::closure(&[a.clone(), b.clone()], 7);
        prop_assert_eq!(g.order(), &BigUint::from(elems.len()));
        prop_assert_eq!(5040 % elems.len(), 0);
        prop_assert!(g.contains(&a.compose(&b).compose(&a)));
        let again = PermGroup::new(vec![a, b], seed);
        prop_assert_eq!(g.base(), again.base());
    }
}
