//! Matching the classes of an imported table with a computed class inventory.
//!
//! File classes are paired with group classes of the same element order and
//! size, then candidates are pruned until the square maps agree. Anything
//! still ambiguous needs an explicit mapping; nothing is guessed.

use super::{CharacterTable, ClassLayout};
use crate::conjugacy::ClassTable;
use crate::error::{Error, Result};
use crate::io::parse_character_table;

/// Parses a table file and re-indexes it by the classes of `classes`.
/// `mapping[f]` optionally gives the group class of file class `f`.
pub fn import_table(text: &str, classes: &ClassTable<'_>, mapping: Option<&[usize]>) -> Result<CharacterTable> {
    let file = parse_character_table(text)?;
    align_table(&file, classes, mapping)
}

pub fn align_table(
    file: &CharacterTable,
    classes: &ClassTable<'_>,
    mapping: Option<&[usize]>,
) -> Result<CharacterTable> {
    let target = ClassLayout::from_classes(classes);
    let src = file.layout();
    if src.group_order != target.group_order {
        return Err(Error::Consistency(format!(
            "table is for a group of order {}, the group has order {}",
            src.group_order, target.group_order
        )));
    }
    let r = target.len();
    if src.len() != r {
        return Err(Error::Consistency(format!(
            "table has {} classes, the group has {r}",
            src.len()
        )));
    }
    let mut cand: Vec<Vec<usize>> = (0..r)
        .map(|f| {
            (0..r)
                .filter(|&c| target.element_orders[c] == src.element_orders[f] && target.sizes[c] == src.sizes[f])
                .collect()
        })
        .collect();
    loop {
        let mut changed = false;
        for f in 0..r {
            let sq = src.square_map[f];
            let allowed: Vec<usize> = cand[f]
                .iter()
                .copied()
                .filter(|&c| cand[sq].contains(&target.square_map[c]))
                .collect();
            if allowed.len() != cand[f].len() {
                cand[f] = allowed;
                changed = true;
            }
        }
        // a class claimed outright is unavailable to the others
        for f in 0..r {
            if cand[f].len() == 1 {
                let c = cand[f][0];
                for g in 0..r {
                    if g != f && cand[g].contains(&c) {
                        cand[g].retain(|&x| x != c);
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    if let Some(f) = (0..r).find(|&f| cand[f].is_empty()) {
        return Err(Error::Consistency(format!(
            "table class {} (order {}, size {}) has no counterpart in the group",
            f + 1,
            src.element_orders[f],
            src.sizes[f]
        )));
    }
    let perm: Vec<usize> = match mapping {
        Some(m) => {
            if m.len() != r {
                return Err(Error::Consistency(format!(
                    "class mapping has {} entries for {r} classes",
                    m.len()
                )));
            }
            let mut used = vec![false; r];
            for (f, &c) in m.iter().enumerate() {
                if c >= r || used[c] {
                    return Err(Error::Consistency("class mapping is not a bijection".into()));
                }
                used[c] = true;
                if !cand[f].contains(&c) {
                    return Err(Error::Consistency(format!(
                        "class mapping sends table class {} to group class {}, which does not match",
                        f + 1,
                        c + 1
                    )));
                }
            }
            for f in 0..r {
                if target.square_map[m[f]] != m[src.square_map[f]] {
                    return Err(Error::Consistency(format!(
                        "class mapping breaks the square map at table class {}",
                        f + 1
                    )));
                }
            }
            m.to_vec()
        }
        None => {
            let open: Vec<String> = (0..r)
                .filter(|&f| cand[f].len() > 1)
                .map(|f| {
                    let list: Vec<String> = cand[f].iter().map(|c| (c + 1).to_string()).collect();
                    format!("table class {} ~ group classes {{{}}}", f + 1, list.join(","))
                })
                .collect();
            if !open.is_empty() {
                return Err(Error::AmbiguousClassMatch(format!(
                    "{}; supply an explicit class mapping",
                    open.join("; ")
                )));
            }
            cand.iter().map(|c| c[0]).collect()
        }
    };
    file.permute_classes(target, &perm)
}
