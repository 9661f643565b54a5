//! Conjugacy class inventory: representatives, sizes, element orders and the
//! squaring map.
//!
//! Small groups are handled by listing every element. Larger groups use random
//! elements (and their powers), identifying each against the classes found so
//! far by backtrack conjugacy tests; completeness is declared only when the
//! class sizes add up to the group order.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::group::{PermGroup, SearchBudget};
use crate::perm::Permutation;

#[derive(Clone, Debug)]
pub struct ClassOptions {
    pub seed: u64,
    /// Groups up to this order are handled by full enumeration.
    pub brute_force_max: u64,
    /// Random elements drawn before giving up.
    pub element_budget: u64,
    /// Classes whose `size × degree` stays below this get their least element
    /// as representative; larger classes keep the first one found.
    pub min_rep_max_points: u64,
    pub search: SearchBudget,
}

impl Default for ClassOptions {
    fn default() -> Self {
        ClassOptions {
            seed: 1,
            brute_force_max: 10_000,
            element_budget: 1_000_000,
            min_rep_max_points: 20_000_000,
            search: SearchBudget::default(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ConjugacyClass {
    pub index: usize,
    pub representative: Permutation,
    pub size: BigUint,
    pub element_order: u64,
}

/// Class-level invariants used to avoid conjugacy tests.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Signature {
    order: u64,
    /// Cycle type of `x^k` for each proper divisor `k` of the order, `k = 1` first.
    power_types: Vec<Vec<u32>>,
}

fn signature(p: &Permutation) -> Signature {
    let order = p.order_u64().expect("element order fits in u64");
    let mut power_types = Vec::new();
    for k in 1..order {
        if order % k == 0 && k < order {
            power_types.push(p.pow(k as i64).cycle_type());
        }
    }
    Signature { order, power_types }
}

#[derive(Clone, Debug)]
pub struct ClassTable<'g> {
    group: &'g PermGroup,
    classes: Vec<ConjugacyClass>,
    square_map: Vec<usize>,
    /// Element lookup, present when the group was enumerated.
    lookup: Option<HashMap<Permutation, usize>>,
    signatures: Vec<Signature>,
    centralizers: Vec<Option<PermGroup>>,
    search: SearchBudget,
}

impl<'g> ClassTable<'g> {
    pub fn group(&self) -> &'g PermGroup {
        self.group
    }

    pub fn classes(&self) -> &[ConjugacyClass] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn square_map(&self) -> &[usize] {
        &self.square_map
    }

    pub fn group_order(&self) -> &BigUint {
        self.group.order()
    }

    /// Least common multiple of the element orders.
    pub fn exponent(&self) -> u64 {
        self.classes.iter().fold(1u64, |acc, c| acc.lcm(&c.element_order))
    }

    /// Index of the class containing `p`.
    pub fn class_of(&self, p: &Permutation) -> Result<usize> {
        self.group.check_member(p)?;
        self.class_of_member(p)
    }

    pub(crate) fn class_of_member(&self, p: &Permutation) -> Result<usize> {
        if let Some(lookup) = &self.lookup {
            return lookup.get(p).copied().ok_or_else(|| Error::Membership(p.to_string()));
        }
        let sig = signature(p);
        let candidates: Vec<usize> = (0..self.classes.len()).filter(|&i| self.signatures[i] == sig).collect();
        if candidates.len() == 1 {
            return Ok(candidates[0]);
        }
        for &i in &candidates {
            let rep = &self.classes[i].representative;
            let hit = self
                .group
                .conjugating_element_with(p, rep, self.centralizers[i].as_ref(), &self.search)?;
            if hit.is_some() {
                return Ok(i);
            }
        }
        Err(Error::Consistency(format!(
            "element {p} matches no class of a complete class table"
        )))
    }

    /// `C_G(rep)` for a class, computed on demand if not cached.
    pub fn centralizer(&self, index: usize) -> Result<PermGroup> {
        match &self.centralizers[index] {
            Some(c) => Ok(c.clone()),
            None => self
                .group
                .centralizer(&self.classes[index].representative, &self.search),
        }
    }

    /// Index of the class of `rep⁻¹` for each class.
    pub fn inverse_map(&self) -> Result<Vec<usize>> {
        self.classes
            .iter()
            .map(|c| {
                if c.element_order <= 2 {
                    Ok(c.index)
                } else {
                    self.class_of_member(&c.representative.inverse())
                }
            })
            .collect()
    }

    /// Class of `rep^k` for `k = 0..order(rep)`.
    pub fn power_classes(&self, index: usize) -> Result<Vec<usize>> {
        let c = &self.classes[index];
        let mut out = vec![0usize; c.element_order as usize];
        for k in 1..c.element_order {
            out[k as usize] = if k == 1 {
                index
            } else {
                self.class_of_member(&c.representative.pow(k as i64))?
            };
        }
        Ok(out)
    }

    /// Map from every group element to its class; built by listing classes if
    /// the table was not computed by enumeration.
    pub(crate) fn element_classes(&self) -> std::borrow::Cow<'_, HashMap<Permutation, usize>> {
        match &self.lookup {
            Some(l) => std::borrow::Cow::Borrowed(l),
            None => {
                let mut map = HashMap::new();
                for i in 0..self.classes.len() {
                    for x in self.class_elements(i) {
                        map.insert(x, i);
                    }
                }
                std::borrow::Cow::Owned(map)
            }
        }
    }

    /// Lists the elements of one class by closing its representative under conjugation.
    pub fn class_elements(&self, index: usize) -> Vec<Permutation> {
        conjugation_orbit(self.group, &self.classes[index].representative, None)
    }
}

/// Orbit of `x` under conjugation by the group generators, optionally capped.
fn conjugation_orbit(group: &PermGroup, x: &Permutation, cap: Option<usize>) -> Vec<Permutation> {
    let mut seen: std::collections::HashSet<Permutation> = std::collections::HashSet::new();
    let mut orbit = vec![x.clone()];
    seen.insert(x.clone());
    let mut k = 0;
    while k < orbit.len() {
        for g in group.generators() {
            let y = orbit[k].conjugate_by(g);
            if !seen.contains(&y) {
                seen.insert(y.clone());
                orbit.push(y);
                if cap.is_some_and(|c| orbit.len() > c) {
                    return orbit;
                }
            }
        }
        k += 1;
    }
    orbit
}

/// Computes the conjugacy classes of `group` in canonical order: by element
/// order, then size, then representative (least element where it was
/// computed), so the table does not depend on the seed for small groups.
pub fn conjugacy_classes<'g>(group: &'g PermGroup, opts: &ClassOptions) -> Result<ClassTable<'g>> {
    let small = group.order_u64().is_some_and(|o| o <= opts.brute_force_max);
    if small {
        Ok(brute_force_classes(group, opts))
    } else {
        random_classes(group, opts)
    }
}

fn brute_force_classes<'g>(group: &'g PermGroup, opts: &ClassOptions) -> ClassTable<'g> {
    let elements = group.elements();
    let mut class_id: HashMap<Permutation, usize> = HashMap::with_capacity(elements.len());
    let mut raw: Vec<(Permutation, usize, u64)> = Vec::new();
    for e in &elements {
        if class_id.contains_key(e) {
            continue;
        }
        let orbit = conjugation_orbit(group, e, None);
        let id = raw.len();
        let min = orbit.iter().min().unwrap().clone();
        let size = orbit.len();
        for y in orbit {
            class_id.insert(y, id);
        }
        raw.push((min, size, e.order_u64().expect("small group")));
    }
    let mut perm: Vec<usize> = (0..raw.len()).collect();
    perm.sort_by(|&a, &b| {
        let (ra, sa, oa) = &raw[a];
        let (rb, sb, ob) = &raw[b];
        (oa, sa, ra).cmp(&(ob, sb, rb))
    });
    let mut new_index = vec![0usize; raw.len()];
    for (new, &old) in perm.iter().enumerate() {
        new_index[old] = new;
    }
    let classes: Vec<ConjugacyClass> = perm
        .iter()
        .enumerate()
        .map(|(i, &old)| ConjugacyClass {
            index: i,
            representative: raw[old].0.clone(),
            size: BigUint::from(raw[old].1),
            element_order: raw[old].2,
        })
        .collect();
    for v in class_id.values_mut() {
        *v = new_index[*v];
    }
    let square_map = classes
        .iter()
        .map(|c| class_id[&c.representative.compose(&c.representative)])
        .collect();
    let signatures = classes.iter().map(|c| signature(&c.representative)).collect();
    let n = classes.len();
    ClassTable {
        group,
        classes,
        square_map,
        lookup: Some(class_id),
        signatures,
        centralizers: vec![None; n],
        search: opts.search.clone(),
    }
}

struct Found {
    rep: Permutation,
    size: BigUint,
    order: u64,
    sig: Signature,
    centralizer: PermGroup,
}

fn random_classes<'g>(group: &'g PermGroup, opts: &ClassOptions) -> Result<ClassTable<'g>> {
    let order = group.order().clone();
    let identity = group.identity();
    let mut found: Vec<Found> = vec![Found {
        sig: signature(&identity),
        rep: identity,
        size: BigUint::one(),
        order: 1,
        centralizer: group.clone(),
    }];
    let mut total = BigUint::one();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut draws = 0u64;

    // identifies `y` against the classes so far; records it if new
    let identify = |y: Permutation, found: &mut Vec<Found>, total: &mut BigUint| -> Result<()> {
        let sig = signature(&y);
        for f in found.iter().filter(|f| f.sig == sig) {
            if group
                .conjugating_element_with(&y, &f.rep, Some(&f.centralizer), &opts.search)?
                .is_some()
            {
                return Ok(());
            }
        }
        let c = group.centralizer(&y, &opts.search)?;
        let (size, rem) = order.div_rem(c.order());
        debug_assert!(rem.is_zero());
        *total += &size;
        found.push(Found {
            rep: y,
            size,
            order: sig.order,
            sig,
            centralizer: c,
        });
        Ok(())
    };

    // Rare classes have large centralizers, so random elements of the
    // centralizers found so far are drawn alongside uniform ones.
    let mut cursor = 0usize;
    while total < order {
        if draws >= opts.element_budget {
            return Err(Error::BudgetExceeded(format!(
                "class search drew {draws} elements; found {} classes covering {total} of {order}",
                found.len()
            )));
        }
        draws += 1;
        let x = if draws % 2 == 1 {
            group.random_element(&mut rng)
        } else {
            let rich: Vec<usize> = (0..found.len())
                .filter(|&i| found[i].centralizer.order() > &BigUint::from(found[i].order))
                .collect();
            if rich.is_empty() {
                group.random_element(&mut rng)
            } else {
                cursor = (cursor + 1) % rich.len();
                found[rich[cursor]].centralizer.random_element(&mut rng)
            }
        };
        let o = x.order_u64().expect("element order fits in u64");
        // x itself, then its powers x^k for proper divisors k, which reach small classes
        let mut ks: Vec<u64> = (1..o).filter(|k| o % k == 0).collect();
        ks.sort_unstable();
        for k in ks {
            if total >= order {
                break;
            }
            identify(x.pow(k as i64), &mut found, &mut total)?;
        }
    }
    if total != order {
        return Err(Error::Consistency(format!(
            "class sizes sum to {total}, group order is {order}"
        )));
    }

    // canonical representatives where affordable
    for f in found.iter_mut() {
        let points = f
            .size
            .to_u64()
            .unwrap_or(u64::MAX)
            .saturating_mul(group.degree() as u64);
        if points <= opts.min_rep_max_points {
            let orbit = conjugation_orbit(group, &f.rep, None);
            let min = orbit.into_iter().min().unwrap();
            if min != f.rep {
                // centralizer of the new representative
                f.centralizer = group.centralizer(&min, &opts.search)?;
                f.rep = min;
            }
        }
    }
    found.sort_by(|a, b| (a.order, &a.size, &a.rep).cmp(&(b.order, &b.size, &b.rep)));

    let classes: Vec<ConjugacyClass> = found
        .iter()
        .enumerate()
        .map(|(i, f)| ConjugacyClass {
            index: i,
            representative: f.rep.clone(),
            size: f.size.clone(),
            element_order: f.order,
        })
        .collect();
    let signatures = found.iter().map(|f| f.sig.clone()).collect();
    let centralizers = found.into_iter().map(|f| Some(f.centralizer)).collect();
    let mut table = ClassTable {
        group,
        classes,
        square_map: Vec::new(),
        lookup: None,
        signatures,
        centralizers,
        search: opts.search.clone(),
    };
    table.square_map = table
        .classes
        .iter()
        .map(|c| table.class_of_member(&c.representative.compose(&c.representative)))
        .collect::<Result<_>>()?;
    Ok(table)
}

/// Classes of elements of order 2, smallest first.
pub fn involution_classes<'a>(table: &'a ClassTable<'_>) -> Vec<&'a ConjugacyClass> {
    let mut out: Vec<&ConjugacyClass> = table.classes().iter().filter(|c| c.element_order == 2).collect();
    out.sort_by(|a, b| (&a.size, a.index).cmp(&(&b.size, b.index)));
    out
}

/// The unique largest involution class. Ties are reported, not broken.
pub fn largest_involution_class(table: &ClassTable<'_>) -> Result<usize> {
    let inv = involution_classes(table);
    let Some(max) = inv.last().map(|c| c.size.clone()) else {
        return Err(Error::AmbiguousSelection("the group has no involutions".into()));
    };
    let top: Vec<usize> = inv.iter().filter(|c| c.size == max).map(|c| c.index).collect();
    if top.len() > 1 {
        return Err(Error::AmbiguousSelection(format!(
            "involution classes {top:?} all have the maximal size {max}; choose one explicitly"
        )));
    }
    Ok(top[0])
}
