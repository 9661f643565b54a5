mod common;

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use polyscan::catalog;
use polyscan::characters::{
    dixon_table, frobenius_schur, import_table, induced_trivial, polytopal_constituents, scalar_product,
    CharacterTable, DixonOptions, FusionOptions,
};
use polyscan::conjugacy::{conjugacy_classes, ClassOptions, ClassTable};
use polyscan::io::{parse_character_table, parse_permutation_list, write_character_table};
use polyscan::{Cyclotomic, Error, PermGroup, Permutation};

fn perm(s: &str) -> Permutation {
    parse_permutation_list(s).unwrap().remove(0)
}

fn table_for(classes: &ClassTable<'_>) -> CharacterTable {
    dixon_table(classes, &DixonOptions::default()).unwrap()
}

fn row_strings(t: &CharacterTable) -> Vec<Vec<String>> {
    let mut rows: Vec<Vec<String>> = t
        .irreducibles()
        .iter()
        .map(|r| r.iter().map(|v| v.to_string()).collect())
        .collect();
    rows.sort();
    rows
}

fn big(n: u64) -> Cyclotomic {
    Cyclotomic::from_integer(BigInt::from(n))
}

/// Row and column orthogonality evaluated directly in cyclotomic arithmetic.
fn assert_orthogonal(t: &CharacterTable, name: &str) {
    let l = t.layout();
    let order = Cyclotomic::from_integer(BigInt::from(l.group_order.clone()));
    let rows = t.irreducibles();
    let r = rows.len();
    for i in 0..r {
        for j in 0..r {
            let mut s = Cyclotomic::zero();
            for c in 0..r {
                let size = Cyclotomic::from_integer(BigInt::from(l.sizes[c].clone()));
                s = s + size * (&rows[i][c] * &rows[j][c].conj());
            }
            let expected = if i == j { order.clone() } else { Cyclotomic::zero() };
            assert_eq!(s, expected, "{name}: rows {i},{j}");
        }
    }
    for a in 0..r {
        for b in 0..r {
            let mut s = Cyclotomic::zero();
            for row in rows {
                s = s + &row[a] * &row[b].conj();
            }
            let expected = if a == b {
                Cyclotomic::from_integer(BigInt::from(&l.group_order / &l.sizes[a]))
            } else {
                Cyclotomic::zero()
            };
            assert_eq!(s, expected, "{name}: columns {a},{b}");
        }
    }
}

#[test]
fn dixon_identities_on_catalog() {
    for e in catalog::entries().into_iter().filter(|e| e.order <= 2000) {
        let g = e.group();
        let classes = conjugacy_classes(&g, &ClassOptions::default()).unwrap();
        let t = table_for(&classes);
        assert_eq!(t.len(), e.class_count, "{}", e.name);
        let sum: BigUint = t.degrees().iter().map(|d| d * d).sum();
        assert_eq!(sum, BigUint::from(e.order), "{}", e.name);
        for (row, d) in t.irreducibles().iter().zip(t.degrees()) {
            assert_eq!(row[0], Cyclotomic::from_integer(BigInt::from(d.clone())));
            assert!(*d >= BigUint::from(1u32));
        }
        assert_orthogonal(&t, &e.name);
        let other = dixon_table(
            &classes,
            &DixonOptions {
                prime_index: 1,
                ..DixonOptions::default()
            },
        )
        .unwrap();
        assert_eq!(row_strings(&t), row_strings(&other), "{}: prime choice", e.name);
    }
}

#[test]
fn frozen_degrees() {
    let expected: BTreeMap<&str, Vec<u64>> = [
        ("S3", vec![1, 1, 2]),
        ("S4", vec![1, 1, 2, 3, 3]),
        ("S5", vec![1, 1, 4, 4, 5, 5, 6]),
        ("S6", vec![1, 1, 5, 5, 5, 5, 9, 9, 10, 10, 16]),
        ("Q8", vec![1, 1, 1, 1, 2]),
        ("A4", vec![1, 1, 1, 3]),
        ("A5", vec![1, 3, 3, 4, 5]),
        ("PSL(2,7)", vec![1, 3, 3, 6, 7, 8]),
        ("D10", vec![1, 1, 2, 2]),
        ("D24", vec![1, 1, 1, 1, 2, 2, 2, 2, 2]),
    ]
    .into_iter()
    .collect();
    for (name, degrees) in expected {
        let g = catalog::lookup(name).unwrap().group();
        let classes = conjugacy_classes(&g, &ClassOptions::default()).unwrap();
        let t = table_for(&classes);
        let mut ds: Vec<u64> = t.degrees().iter().map(|d| u64::try_from(d).unwrap()).collect();
        ds.sort();
        assert_eq!(ds, degrees, "{name}");
    }
}

#[test]
fn golden_ratio_in_a5() {
    let g = catalog::lookup("A5").unwrap().group();
    let classes = conjugacy_classes(&g, &ClassOptions::default()).unwrap();
    let t = table_for(&classes);
    let five = classes.class_of(&perm("(1,2,3,4,5)")).unwrap();
    let z = |k| Cyclotomic::root_of_unity(5, k);
    let plus = -&(z(2) + z(3));
    let minus = -&(z(1) + z(4));
    assert_eq!(&plus + &minus, Cyclotomic::one());
    assert_eq!(&plus * &minus, -&Cyclotomic::one());
    let mut want = vec![Cyclotomic::one(), plus, minus, -&Cyclotomic::one(), Cyclotomic::zero()];
    for row in t.irreducibles() {
        let pos = want.iter().position(|w| *w == row[five]).expect("unexpected value");
        want.remove(pos);
    }
    assert!(want.is_empty());
}

fn involution_count(g: &PermGroup) -> u64 {
    let elements = common::closure(g.generators(), g.degree());
    elements.iter().filter(|x| common::is_involution(x)).count() as u64
}

#[test]
fn indicator_identity() {
    for e in catalog::entries() {
        let g = e.group();
        let classes = conjugacy_classes(&g, &ClassOptions::default()).unwrap();
        let t = table_for(&classes);
        let r = frobenius_schur(&t).unwrap();
        let expected = BigInt::from(1 + involution_count(&g));
        assert_eq!(r.weighted_sum, expected, "{}", e.name);
        assert!(r.identity_holds());
        if e.name.starts_with('S') || e.name.starts_with('D') {
            assert!(r.indicators.iter().all(|&v| v == 1), "{} is real", e.name);
        }
    }
}

#[test]
fn quaternion_group_has_one_quaternionic_character() {
    let g = catalog::lookup("Q8").unwrap().group();
    let classes = conjugacy_classes(&g, &ClassOptions::default()).unwrap();
    let t = table_for(&classes);
    let r = frobenius_schur(&t).unwrap();
    let q = r.quaternionic();
    assert_eq!(q.len(), 1);
    assert_eq!(r.degrees[q[0]], BigUint::from(2u32));
}

#[test]
fn cyclic_group_indicators() {
    let c5 = PermGroup::new(vec![perm("(1,2,3,4,5)")], 1);
    let classes = conjugacy_classes(&c5, &ClassOptions::default()).unwrap();
    let t = table_for(&classes);
    let r = frobenius_schur(&t).unwrap();
    let mut ind = r.indicators.clone();
    ind.sort();
    assert_eq!(ind, vec![0, 0, 0, 0, 1]);
}

/// `ψ(g)` as the number of cosets `xH` fixed by `g`, by listing elements.
fn brute_permutation_character(g: &PermGroup, h_gens: &[Permutation], classes: &ClassTable<'_>) -> Vec<BigInt> {
    let elements = common::closure(g.generators(), g.degree());
    let h: std::collections::HashSet<Permutation> = common::closure(h_gens, g.degree()).into_iter().collect();
    classes
        .classes()
        .iter()
        .map(|c| {
            // x H is fixed by g iff x⁻¹ g x ∈ H; each coset is counted |H| times
            let n = elements
                .iter()
                .filter(|x| h.contains(&c.representative.conjugate_by(x)))
                .count();
            BigInt::from(n / h.len())
        })
        .collect()
}

#[test]
fn induced_characters_match_coset_counts() {
    let cases: &[(&str, &[&str])] = &[
        ("S4", &["(2,3)", "(3,4)"]),
        ("S5", &["(1,2)", "(3,4)"]),
        ("A5", &["(1,2)(3,4)", "(1,3)(2,4)"]),
        ("PSL(2,7)", &["(3,6)(5,7)"]),
        ("D20", &[]),
    ];
    for (name, gens) in cases {
        let g = catalog::lookup(name).unwrap().group();
        let classes = conjugacy_classes(&g, &ClassOptions::default()).unwrap();
        let t = table_for(&classes);
        let gens: Vec<Permutation> = gens.iter().map(|s| perm(s).extended(g.degree())).collect();
        let h = g.subgroup(&gens, 1).unwrap();
        let psi = induced_trivial(&t, &classes, &h, &FusionOptions::default()).unwrap();
        let brute = brute_permutation_character(&g, &gens, &classes);
        let got: Vec<Cyclotomic> = psi.values().to_vec();
        let want: Vec<Cyclotomic> = brute.into_iter().map(Cyclotomic::from_integer).collect();
        assert_eq!(got, want, "{name}");
        // ⟨ψ, 1⟩ = 1 for a transitive action
        let trivial = t.character(t.trivial_index());
        assert_eq!(
            scalar_product(&psi, &trivial).unwrap(),
            BigRational::from_integer(1.into())
        );
        let cons = polytopal_constituents(&t, &psi).unwrap();
        let total: BigUint = cons.iter().map(|c| &c.multiplicity * &c.degree).sum();
        assert_eq!(
            total + 1u32,
            u64::try_from(&(g.order() / h.order())).unwrap().into(),
            "{name}"
        );
    }
}

#[test]
fn tetrahedron_permutation_character() {
    let g = catalog::lookup("S4").unwrap().group();
    let classes = conjugacy_classes(&g, &ClassOptions::default()).unwrap();
    let t = table_for(&classes);
    let h = g.subgroup(&[perm("(2,3)"), perm("(3,4)")], 1).unwrap();
    let psi = induced_trivial(&t, &classes, &h, &FusionOptions::default()).unwrap();
    let cons: Vec<_> = polytopal_constituents(&t, &psi)
        .unwrap()
        .into_iter()
        .filter(|c| c.is_polytopal())
        .collect();
    assert_eq!(cons.len(), 1);
    assert_eq!(cons[0].degree, BigUint::from(3u32));
    assert_eq!(cons[0].multiplicity, BigUint::from(1u32));
}

#[test]
fn error_cases() {
    let s4 = catalog::lookup("S4").unwrap().group();
    let c4 = conjugacy_classes(&s4, &ClassOptions::default()).unwrap();
    let t4 = table_for(&c4);
    let s3 = catalog::lookup("S3").unwrap().group();
    let c3 = conjugacy_classes(&s3, &ClassOptions::default()).unwrap();
    let t3 = table_for(&c3);
    assert!(matches!(
        scalar_product(&t4.character(0), &t3.character(0)),
        Err(Error::TableMismatch)
    ));
    let outside = PermGroup::new(vec![perm("(1,5)")], 1);
    assert!(matches!(
        induced_trivial(&t4, &c4, &outside, &FusionOptions::default()),
        Err(Error::NotASubgroup(_))
    ));
    let big = FusionOptions {
        max_subgroup_order: 4,
        ..FusionOptions::default()
    };
    assert!(matches!(
        induced_trivial(&t4, &c4, &s4, &big),
        Err(Error::FusionBudgetExceeded { .. })
    ));
    let tiny = DixonOptions {
        max_order: 10,
        ..DixonOptions::default()
    };
    assert!(matches!(
        dixon_table(&c4, &tiny),
        Err(Error::FeasibilityExceeded { .. })
    ));
}

#[test]
fn table_files_round_trip() {
    for e in catalog::entries().into_iter().filter(|e| e.order <= 2000) {
        let g = e.group();
        let classes = conjugacy_classes(&g, &ClassOptions::default()).unwrap();
        let t = table_for(&classes);
        let text = write_character_table(&t).unwrap();
        let back = parse_character_table(&text).unwrap();
        assert_eq!(back, t, "{}", e.name);
        assert_eq!(write_character_table(&back).unwrap(), text);
        let imported = import_table(&text, &classes, None);
        match imported {
            Ok(i) => assert_eq!(i, t, "{}", e.name),
            Err(Error::AmbiguousClassMatch(_)) => {
                let identity: Vec<usize> = (0..classes.len()).collect();
                assert_eq!(import_table(&text, &classes, Some(&identity)).unwrap(), t, "{}", e.name);
            }
            Err(err) => panic!("{}: {err}", e.name),
        }
    }
}

fn edit_table(text: &str, f: impl FnOnce(&mut serde_json::Value)) -> String {
    let mut v: serde_json::Value = serde_json::from_str(text).unwrap();
    f(&mut v);
    serde_json::to_string(&v).unwrap()
}

#[test]
fn import_rejects_inconsistent_tables() {
    let g = catalog::lookup("S4").unwrap().group();
    let classes = conjugacy_classes(&g, &ClassOptions::default()).unwrap();
    let text = write_character_table(&table_for(&classes)).unwrap();
    // swapping two values of one row breaks orthogonality
    let bad = edit_table(&text, |v| {
        let row = v["irreducibles"][3].as_array_mut().unwrap();
        row.swap(3, 4);
    });
    assert!(parse_character_table(&bad).unwrap_err().is_consistency());
    let bad = edit_table(&text, |v| v["group_order"] = "25".into());
    assert!(parse_character_table(&bad).is_err());
    let bad = edit_table(&text, |v| v["exponent"] = 7.into());
    assert!(matches!(parse_character_table(&bad), Err(Error::Consistency(_))));
    let bad = edit_table(&text, |v| v["irreducibles"][1][0] = 2.into());
    assert!(parse_character_table(&bad).unwrap_err().is_consistency());
    assert!(matches!(
        parse_character_table("{\"classes\":[]}"),
        Err(Error::Format(_))
    ));
    assert!(matches!(parse_character_table("not json"), Err(Error::Format(_))));
}

#[test]
fn import_matches_classes_in_any_order() {
    let g = catalog::lookup("S5").unwrap().group();
    let classes = conjugacy_classes(&g, &ClassOptions::default()).unwrap();
    let t = table_for(&classes);
    let text = write_character_table(&t).unwrap();
    // reverse the nontrivial classes of the file
    let r = classes.len();
    let order: Vec<usize> = std::iter::once(0).chain((1..r).rev()).collect();
    let permuted = edit_table(&text, |v| {
        let cls = v["classes"].as_array().unwrap().clone();
        v["classes"] = order.iter().map(|&i| cls[i].clone()).collect::<Vec<_>>().into();
        let sq: Vec<usize> = v["square_map"]
            .as_array()
            .unwrap()
            .iter()
            .map(|x| x.as_u64().unwrap() as usize)
            .collect();
        let pos: Vec<usize> = (0..r).map(|c| order.iter().position(|&o| o == c).unwrap()).collect();
        v["square_map"] = order.iter().map(|&i| pos[sq[i]]).collect::<Vec<_>>().into();
        for row in v["irreducibles"].as_array_mut().unwrap() {
            let old = row.as_array().unwrap().clone();
            *row = order.iter().map(|&i| old[i].clone()).collect::<Vec<_>>().into();
        }
    });
    let imported = import_table(&permuted, &classes, None).unwrap();
    assert_eq!(imported, t);
    assert_eq!(
        big(120),
        Cyclotomic::from_integer(BigInt::from(imported.layout().group_order.clone()))
    );
}

#[test]
fn ambiguous_classes_need_a_mapping() {
    // A5 has two classes of 5-cycles with equal order and size
    let g = catalog::lookup("A5").unwrap().group();
    let classes = conjugacy_classes(&g, &ClassOptions::default()).unwrap();
    let t = table_for(&classes);
    let text = write_character_table(&t).unwrap();
    assert!(matches!(
        import_table(&text, &classes, None),
        Err(Error::AmbiguousClassMatch(_))
    ));
    let identity: Vec<usize> = (0..classes.len()).collect();
    assert_eq!(import_table(&text, &classes, Some(&identity)).unwrap(), t);
    let mut swapped = identity.clone();
    swapped.swap(1, 2);
    assert!(import_table(&text, &classes, Some(&swapped)).is_err());
}
