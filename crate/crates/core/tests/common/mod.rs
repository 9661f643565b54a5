//! Brute-force references computed by listing every element.

#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use polyscan::Permutation;

pub fn closure(gens: &[Permutation], degree: usize) -> Vec<Permutation> {
    let id = Permutation::identity(degree);
    let gens: Vec<Permutation> = gens.iter().map(|g| g.extended(degree)).collect();
    let mut seen = HashSet::new();
    seen.insert(id.clone());
    let mut queue = VecDeque::from([id]);
    let mut out = Vec::new();
    while let Some(x) = queue.pop_front() {
        for g in &gens {
            let y = x.compose(g);
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
        out.push(x);
    }
    out
}

pub struct BruteClasses {
    /// Class id of every element.
    pub class_of: HashMap<Permutation, usize>,
    pub sizes: Vec<usize>,
    pub orders: Vec<u64>,
    pub squares: Vec<usize>,
}

pub fn brute_classes(elements: &[Permutation]) -> BruteClasses {
    let mut class_of: HashMap<Permutation, usize> = HashMap::new();
    let mut sizes = Vec::new();
    let mut orders = Vec::new();
    let mut reps = Vec::new();
    for x in elements {
        if class_of.contains_key(x) {
            continue;
        }
        let id = sizes.len();
        let mut n = 0;
        for g in elements {
            let y = x.conjugate_by(g);
            if let std::collections::hash_map::Entry::Vacant(e) = class_of.entry(y) {
                e.insert(id);
                n += 1;
            }
        }
        sizes.push(n);
        let mut k = 1u64;
        let mut p = x.clone();
        while !p.is_identity() {
            p = p.compose(x);
            k += 1;
        }
        orders.push(k);
        reps.push(x.clone());
    }
    let squares = reps.iter().map(|r| class_of[&r.compose(r)]).collect();
    BruteClasses {
        class_of,
        sizes,
        orders,
        squares,
    }
}

pub fn is_involution(p: &Permutation) -> bool {
    !p.is_identity() && p.compose(p).is_identity()
}

fn subset_gens(gens: &[Permutation], mask: u32) -> Vec<Permutation> {
    (0..gens.len())
        .filter(|i| mask >> i & 1 == 1)
        .map(|i| gens[i].clone())
        .collect()
}

/// The intersection condition checked on element sets for every pair of index sets.
/// Pairs involving the full index set hold by definition and are skipped.
pub fn intersection_holds(gens: &[Permutation], degree: usize) -> bool {
    let n = gens.len() as u32;
    let full = (1u32 << n) - 1;
    let sets: Vec<HashSet<Permutation>> = (0..full)
        .map(|m| closure(&subset_gens(gens, m), degree).into_iter().collect())
        .collect();
    for a in 0..full {
        for b in 0..full {
            let meet = sets[a as usize].intersection(&sets[b as usize]).count();
            if meet != sets[(a & b) as usize].len() {
                return false;
            }
        }
    }
    true
}

pub fn string_condition(gens: &[Permutation]) -> bool {
    (0..gens.len()).all(|i| {
        (i + 2..gens.len()).all(|j| {
            let p = gens[i].compose(&gens[j]);
            p.compose(&p).is_identity()
        })
    })
}

/// Verified ordered triples of a small group, grouped under simultaneous conjugation.
/// Returns one triple per orbit with its type.
pub fn verified_triple_orbits(elements: &[Permutation], degree: usize) -> Vec<(Vec<Permutation>, Vec<u64>)> {
    let order = elements.len();
    let inv: Vec<&Permutation> = elements.iter().filter(|p| is_involution(p)).collect();
    let mut seen: HashSet<Vec<Permutation>> = HashSet::new();
    let mut out = Vec::new();
    for s0 in &inv {
        for s1 in &inv {
            for s2 in &inv {
                let t = vec![(*s0).clone(), (*s1).clone(), (*s2).clone()];
                if seen.contains(&t) || !string_condition(&t) {
                    continue;
                }
                if closure(&t, degree).len() != order || !intersection_holds(&t, degree) {
                    continue;
                }
                for g in elements {
                    seen.insert(t.iter().map(|x| x.conjugate_by(g)).collect());
                }
                let ty = vec![order_of(&t[0].compose(&t[1])), order_of(&t[1].compose(&t[2]))];
                out.push((t, ty));
            }
        }
    }
    out
}

pub fn order_of(p: &Permutation) -> u64 {
    let mut k = 1;
    let mut q = p.clone();
    while !q.is_identity() {
        q = q.compose(p);
        k += 1;
    }
    k
}

/// Whether some listed element conjugates `a` onto `b` componentwise.
pub fn tuples_conjugate(elements: &[Permutation], a: &[Permutation], b: &[Permutation]) -> bool {
    elements
        .iter()
        .any(|g| a.iter().zip(b).all(|(x, y)| &x.conjugate_by(g) == y))
}

pub fn type_histogram(types: impl IntoIterator<Item = Vec<u64>>) -> BTreeMap<Vec<u64>, usize> {
    let mut h = BTreeMap::new();
    for t in types {
        *h.entry(t).or_insert(0) += 1;
    }
    h
}
