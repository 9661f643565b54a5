mod common;

use num_bigint::BigUint;
use polyscan::catalog;
use polyscan::conjugacy::{conjugacy_classes, involution_classes, ClassOptions};
use polyscan::io::parse_permutation_list;
use polyscan::stringc::{
    exhaustive_rank3, intersection_condition, is_string_c_rep, schlafli_type, search_rank3, vertex_stabilizer,
    IntersectionBudget, IntersectionMode, RepOptions, S2Selector, SchlafliType, SearchOptions, SearchReport,
    StringGenerators,
};
use polyscan::{Error, PermGroup, Permutation, SearchBudget};
use proptest::prelude::*;

fn perm(s: &str) -> Permutation {
    parse_permutation_list(s).unwrap().remove(0)
}

fn gens(s: &str) -> Vec<Permutation> {
    parse_permutation_list(s).unwrap()
}

fn involutions(elements: &[Permutation]) -> Vec<Permutation> {
    elements.iter().filter(|p| common::is_involution(p)).cloned().collect()
}

fn dihedral_names() -> Vec<String> {
    (2..=12).map(|n| format!("D{}", 2 * n)).collect()
}

#[test]
fn tetrahedron() {
    let s4 = catalog::lookup("S4").unwrap().group();
    let rep = is_string_c_rep(&s4, gens("(1,2);(2,3);(3,4)"), &RepOptions::default()).unwrap();
    assert!(rep.verified && rep.generates_full_group);
    assert_eq!(rep.schlafli, SchlafliType(vec![3, 3]));
    assert_eq!(rep.schlafli.to_string(), "{3,3}");
    let h = vertex_stabilizer(&s4, &rep, 1).unwrap();
    assert_eq!(h.order(), &BigUint::from(6u32));
    assert!(h.contains(&perm("(2,3)")) && h.contains(&perm("(3,4)")));
}

#[test]
fn rejected_tuples() {
    let s4 = catalog::lookup("S4").unwrap().group();
    let r = is_string_c_rep(&s4, gens("(1,2);(2,3);(1,2)"), &RepOptions::default()).unwrap();
    assert!(!r.generates_full_group);
    assert!(matches!(
        is_string_c_rep(&s4, gens("(1,2,3);(2,3);(3,4)"), &RepOptions::default()),
        Err(Error::NotInvolution { index: 0 })
    ));
    assert!(matches!(
        is_string_c_rep(&s4, gens("(1,2);(2,3);(2,4)"), &RepOptions::default()),
        Err(Error::StringConditionViolated { i: 0, j: 2 })
    ));
    // commuting distinct involutions give a 2 in the type
    let k = PermGroup::new(gens("(1,2);(3,4)"), 1);
    let sg = StringGenerators::new(&k, gens("(1,2);(3,4)")).unwrap();
    assert_eq!(schlafli_type(&sg), SchlafliType(vec![2]));
    let r = intersection_condition(&k, &sg, IntersectionMode::Full, &IntersectionBudget::default(), 1).unwrap();
    assert!(r.holds);
}

#[test]
fn violations_carry_witnesses() {
    let s4 = catalog::lookup("S4").unwrap().group();
    let sg = StringGenerators::new(&s4, gens("(1,2);(1,2)(3,4);(3,4)")).unwrap();
    let r = intersection_condition(&s4, &sg, IntersectionMode::Full, &IntersectionBudget::default(), 1).unwrap();
    assert!(!r.holds);
    let v = r.violation.unwrap();
    let left = s4
        .subgroup(&v.left.iter().map(|&i| sg.gens()[i].clone()).collect::<Vec<_>>(), 1)
        .unwrap();
    let right = s4
        .subgroup(&v.right.iter().map(|&i| sg.gens()[i].clone()).collect::<Vec<_>>(), 1)
        .unwrap();
    assert!(left.contains(&v.witness) && right.contains(&v.witness));
    let common_idx: Vec<usize> = v.left.iter().copied().filter(|i| v.right.contains(i)).collect();
    let common = s4
        .subgroup(&common_idx.iter().map(|&i| sg.gens()[i].clone()).collect::<Vec<_>>(), 1)
        .unwrap();
    assert!(!common.contains(&v.witness));
}

#[test]
fn intersection_budget_is_reported() {
    let s4 = catalog::lookup("S4").unwrap().group();
    let sg = StringGenerators::new(&s4, gens("(1,2);(2,3);(3,4)")).unwrap();
    let tiny = IntersectionBudget { max_elements: 1 };
    assert!(matches!(
        intersection_condition(&s4, &sg, IntersectionMode::Full, &tiny, 1),
        Err(Error::IntersectionBudgetExceeded(_))
    ));
}

/// Every string triple of the group, checked against element-set intersections.
fn check_verdicts(name: &str) -> (usize, usize) {
    let e = catalog::lookup(name).unwrap();
    let g = e.group();
    let elements = common::closure(&e.generators, g.degree());
    let inv = involutions(&elements);
    let (mut pass, mut fail) = (0, 0);
    for a in &inv {
        for c in inv.iter().filter(|c| a.compose(c) == c.compose(a)) {
            for b in &inv {
                let t = vec![a.clone(), b.clone(), c.clone()];
                let sg = StringGenerators::new(&g, t.clone()).unwrap();
                let oracle = common::intersection_holds(&t, g.degree());
                let budget = IntersectionBudget::default();
                let full = intersection_condition(&g, &sg, IntersectionMode::Full, &budget, 1).unwrap();
                let fast = intersection_condition(&g, &sg, IntersectionMode::Rank3Fast, &budget, 1).unwrap();
                assert_eq!(full.holds, oracle, "{name}: {t:?}");
                assert_eq!(fast.holds, oracle, "{name}: fast path on {t:?}");
                if oracle {
                    pass += 1;
                } else {
                    fail += 1;
                }
            }
        }
    }
    (pass, fail)
}

#[test]
fn intersection_verdicts_match_oracle() {
    let mut names: Vec<String> = vec!["S4".into(), "S5".into()];
    names.extend(dihedral_names());
    for name in &names {
        let (pass, fail) = check_verdicts(name);
        if name == "S4" {
            assert!(pass > 0 && fail > 0, "S4 has passing and failing triples");
        }
    }
}

#[test]
fn intersection_verdicts_on_remaining_catalog() {
    for name in ["S3", "Q8", "A4", "A5", "PSL(2,7)"] {
        check_verdicts(name);
    }
}

fn oracle_matches_exhaustive(name: &str) {
    let e = catalog::lookup(name).unwrap();
    let g = e.group();
    let elements = common::closure(&e.generators, g.degree());
    let oracle = common::verified_triple_orbits(&elements, g.degree());
    let ours = exhaustive_rank3(&g, &SearchOptions::default()).unwrap();
    assert_eq!(ours.len(), oracle.len(), "{name}");
    for rep in &ours {
        let hits = oracle
            .iter()
            .filter(|(t, _)| common::tuples_conjugate(&elements, &rep.generators, t))
            .count();
        assert_eq!(hits, 1, "{name}: {:?}", rep.generators);
    }
    assert_eq!(
        common::type_histogram(ours.iter().map(|r| r.schlafli.0.clone())),
        common::type_histogram(oracle.iter().map(|(_, t)| t.clone())),
        "{name}"
    );
}

#[test]
fn exhaustive_mode_matches_brute_force() {
    let mut names: Vec<String> = vec!["S4".into(), "S5".into(), "A5".into(), "A4".into(), "Q8".into()];
    names.extend(dihedral_names());
    for name in &names {
        oracle_matches_exhaustive(name);
    }
}

#[test]
fn s4_representations() {
    let g = catalog::lookup("S4").unwrap().group();
    let reps = exhaustive_rank3(&g, &SearchOptions::default()).unwrap();
    let mut types: Vec<String> = reps.iter().map(|r| r.schlafli.to_string()).collect();
    types.sort();
    // the tetrahedron, the hemi-cube and the hemi-octahedron
    assert_eq!(types, ["{3,3}", "{3,4}", "{4,3}"]);
}

#[test]
fn groups_without_representations() {
    for name in ["S3", "Q8", "A4", "PSL(2,7)", "D6", "D10"] {
        let g = catalog::lookup(name).unwrap().group();
        assert!(
            exhaustive_rank3(&g, &SearchOptions::default()).unwrap().is_empty(),
            "{name}"
        );
    }
}

/// Runs the restricted search for every s0 class and every s2 class of the centralizer.
fn search_all_choices(name: &str) -> Vec<(Vec<Permutation>, SchlafliType)> {
    let g = catalog::lookup(name).unwrap().group();
    let t = conjugacy_classes(&g, &ClassOptions::default()).unwrap();
    let opts = SearchOptions::default();
    let mut out = Vec::new();
    for c in involution_classes(&t) {
        let k = g.centralizer(&c.representative, &SearchBudget::default()).unwrap();
        let kt = conjugacy_classes(&k, &ClassOptions::default()).unwrap();
        for kc in involution_classes(&kt) {
            let r = search_rank3(name, &t, c.index, &S2Selector::Class(kc.index), &opts).unwrap();
            for f in r.representations {
                out.push((
                    f.generators.iter().map(|s| perm(s).extended(g.degree())).collect(),
                    f.schlafli,
                ));
            }
        }
    }
    out
}

#[test]
fn search_finds_only_genuine_representations() {
    let mut names: Vec<String> = vec!["S4".into(), "S5".into(), "A5".into()];
    names.extend(dihedral_names());
    for name in &names {
        let g = catalog::lookup(name).unwrap().group();
        let exhaustive = exhaustive_rank3(&g, &SearchOptions::default()).unwrap();
        let found = search_all_choices(name);
        let budget = SearchBudget::default();
        for (t, ty) in &found {
            let again = is_string_c_rep(&g, t.clone(), &RepOptions::default()).unwrap();
            assert!(again.verified && again.generates_full_group);
            assert_eq!(&again.schlafli, ty);
            let matches = exhaustive
                .iter()
                .filter(|r| g.conjugating_tuple(t, &r.generators, &budget).unwrap().is_some())
                .count();
            assert_eq!(matches, 1, "{name}");
        }
        assert!(found.len() <= exhaustive.len());
    }
}

#[test]
fn restricted_search_misses_some_representations() {
    // one conjugate of s0 per class of G, with s2 fixed, cannot reach every triple
    let counts: Vec<(usize, usize)> = ["S4", "S5"]
        .iter()
        .map(|n| {
            let g = catalog::lookup(n).unwrap().group();
            (
                search_all_choices(n).len(),
                exhaustive_rank3(&g, &SearchOptions::default()).unwrap().len(),
            )
        })
        .collect();
    assert_eq!(counts, [(2, 3), (1, 7)]);
}

#[test]
fn s4_default_search_contains_tetrahedron() {
    let g = catalog::lookup("S4").unwrap().group();
    let t = conjugacy_classes(&g, &ClassOptions::default()).unwrap();
    let transpositions = t.class_of(&perm("(1,2)")).unwrap();
    let r = search_rank3(
        "S4",
        &t,
        transpositions,
        &S2Selector::LargestInvolutionClasses,
        &SearchOptions::default(),
    )
    .unwrap();
    assert!(r.histogram.contains_key("{3,3}"));
    assert!(matches!(
        search_rank3(
            "S4",
            &t,
            transpositions,
            &S2Selector::LargestInvolutionClass,
            &SearchOptions::default()
        ),
        Err(Error::AmbiguousSelection(_))
    ));
    assert!(matches!(
        search_rank3(
            "S4",
            &t,
            3,
            &S2Selector::LargestInvolutionClasses,
            &SearchOptions::default()
        ),
        Err(Error::NotInvolution { .. })
    ));
}

#[test]
fn reports_are_deterministic_and_round_trip() {
    let g = catalog::lookup("S5").unwrap().group();
    let t = conjugacy_classes(&g, &ClassOptions::default()).unwrap();
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| {
            search_rank3(
                "S5",
                &t,
                2,
                &S2Selector::LargestInvolutionClasses,
                &SearchOptions::default(),
            )
            .unwrap()
            .to_json()
        })
    };
    let one = run(1);
    assert_eq!(one, run(4));
    assert_eq!(one, run(1));
    let back = SearchReport::from_json(&one).unwrap();
    assert_eq!(back.to_json(), one);
    assert!(!one.contains("time"));
    assert!(SearchReport::from_json(&one.replace("polyscan/1", "polyscan/9")).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn conjugate_triples_deduplicate_together(seed in any::<u64>()) {
        let g = catalog::lookup("S5").unwrap().group();
        let reps = exhaustive_rank3(&g, &SearchOptions::default()).unwrap();
        let h = g.random_stream(seed).next().unwrap();
        let budget = SearchBudget::default();
        for r in &reps {
            let moved: Vec<Permutation> = r.generators.iter().map(|s| s.conjugate_by(&h)).collect();
            let again = is_string_c_rep(&g, moved.clone(), &RepOptions::default()).unwrap();
            prop_assert!(again.verified);
            prop_assert_eq!(&again.schlafli, &r.schlafli);
            let hits: Vec<usize> = reps
                .iter()
                .enumerate()
                .filter(|(_, q)| g.conjugating_tuple(&moved, &q.generators, &budget).unwrap().is_some())
                .map(|(i, _)| i)
                .collect();
            prop_assert_eq!(hits.len(), 1);
            prop_assert_eq!(&reps[hits[0]].generators, &r.generators);
        }
    }
}
