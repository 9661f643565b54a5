//! Small named groups with known orders and class counts.

use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::io::parse_permutation_list;
use crate::perm::Permutation;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogEntry {
    pub name: String,
    pub generators: Vec<Permutation>,
    pub order: u64,
    pub class_count: usize,
}

impl CatalogEntry {
    pub fn group(&self) -> PermGroup {
        PermGroup::new(self.generators.clone(), 1)
    }
}

fn number_of_partitions(n: u64) -> usize {
    fn count(n: u64, max: u64) -> usize {
        if n == 0 {
            return 1;
        }
        (1..=max.min(n)).map(|k| count(n - k, k)).sum()
    }
    count(n, n)
}

fn symmetric(n: u32) -> CatalogEntry {
    let cycle: Vec<u32> = (1..n).chain([0]).collect();
    let mut swap: Vec<u32> = (0..n).collect();
    swap.swap(0, 1);
    CatalogEntry {
        name: format!("S{n}"),
        generators: vec![
            Permutation::from_images(cycle).expect("valid"),
            Permutation::from_images(swap).expect("valid"),
        ],
        order: (1..=n as u64).product(),
        class_count: number_of_partitions(n as u64),
    }
}

/// Dihedral group of order `2n` acting on an `n`-gon; `D4` is the Klein four-group on 4 points.
fn dihedral(n: u32) -> CatalogEntry {
    if n == 2 {
        return listed("D4", "(1,2); (3,4)", 4, 4);
    }
    let rotation: Vec<u32> = (0..n).map(|i| (i + 1) % n).collect();
    let reflection: Vec<u32> = (0..n).map(|i| (n - i) % n).collect();
    let class_count = if n % 2 == 0 {
        n as usize / 2 + 3
    } else {
        (n as usize - 1) / 2 + 2
    };
    CatalogEntry {
        name: format!("D{}", 2 * n),
        generators: vec![
            Permutation::from_images(rotation).expect("valid"),
            Permutation::from_images(reflection).expect("valid"),
        ],
        order: 2 * n as u64,
        class_count,
    }
}

fn listed(name: &str, gens: &str, order: u64, class_count: usize) -> CatalogEntry {
    CatalogEntry {
        name: name.to_string(),
        generators: parse_permutation_list(gens).expect("catalog generators parse"),
        order,
        class_count,
    }
}

/// Names accepted by [`lookup`].
pub fn names() -> Vec<String> {
    entries().into_iter().map(|e| e.name).collect()
}

pub fn entries() -> Vec<CatalogEntry> {
    let mut out: Vec<CatalogEntry> = (3..=6).map(symmetric).collect();
    out.extend((2..=12).map(dihedral));
    out.push(listed("Q8", "(1,2,3,4)(5,6,7,8); (1,5,3,7)(2,8,4,6)", 8, 5));
    out.push(listed("A4", "(1,2,3); (2,3,4)", 12, 4));
    out.push(listed("A5", "(1,2,3,4,5); (1,2,3)", 60, 5));
    out.push(listed("PSL(2,7)", "(1,2,3,4,5,6,7); (3,6)(5,7)", 168, 6));
    out
}

/// Finds an entry by name, ignoring case. `L2(7)` and `L3(2)` also name `PSL(2,7)`.
pub fn lookup(name: &str) -> Result<CatalogEntry> {
    let key = name.trim().to_ascii_uppercase();
    let key = match key.as_str() {
        "L2(7)" | "L3(2)" | "PSL(3,2)" => "PSL(2,7)".to_string(),
        _ => key,
    };
    entries()
        .into_iter()
        .find(|e| e.name.to_ascii_uppercase() == key)
        .ok_or_else(|| Error::Format(format!("unknown catalog group `{name}`; known: {}", names().join(", "))))
}
