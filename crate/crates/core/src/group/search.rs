//! Backtrack search over a stabilizer chain for elements conjugating one
//! tuple of permutations onto another.
//!
//! Fixing the image of one point fixes the images of its whole orbit under
//! the source tuple, so the search keeps a partial point map and propagates
//! every choice through it. A node survives only if each forced pair `x ↦ y`
//! is still reachable inside the current coset of the point stabilizer.

use num_bigint::BigUint;

use super::chain::orbit_labels;
use super::{PermGroup, StabChain};
use crate::error::{Error, Result};
use crate::perm::Permutation;

const NONE: u32 = u32::MAX;

/// Limits on backtrack searches.
#[derive(Clone, Debug)]
pub struct SearchBudget {
    /// Maximum number of search-tree nodes per search.
    pub max_nodes: u64,
    pub seed: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_nodes: 500_000_000,
            seed: 0x5eed,
        }
    }
}

/// Partial injective point map with an undo trail.
struct PartialMap<'a> {
    from: &'a [Permutation],
    to: &'a [Permutation],
    fwd: Vec<u32>,
    bwd: Vec<u32>,
    trail: Vec<u32>,
    queue: Vec<(u32, u32)>,
}

impl<'a> PartialMap<'a> {
    fn new(degree: usize, from: &'a [Permutation], to: &'a [Permutation]) -> Self {
        PartialMap {
            from,
            to,
            fwd: vec![NONE; degree],
            bwd: vec![NONE; degree],
            trail: Vec::new(),
            queue: Vec::new(),
        }
    }

    /// Records `x ↦ y` and everything it forces. On conflict the map is left
    /// partially extended; callers undo to a saved mark.
    fn assign(&mut self, x: u32, y: u32) -> bool {
        self.queue.clear();
        self.queue.push((x, y));
        while let Some((x, y)) = self.queue.pop() {
            let cur = self.fwd[x as usize];
            if cur != NONE {
                if cur != y {
                    return false;
                }
                continue;
            }
            if self.bwd[y as usize] != NONE {
                return false;
            }
            self.fwd[x as usize] = y;
            self.bwd[y as usize] = x;
            self.trail.push(x);
            for (a, b) in self.from.iter().zip(self.to) {
                self.queue.push((a.apply(x), b.apply(y)));
            }
        }
        true
    }

    fn mark(&self) -> usize {
        self.trail.len()
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let x = self.trail.pop().unwrap();
            let y = self.fwd[x as usize];
            self.fwd[x as usize] = NONE;
            self.bwd[y as usize] = NONE;
        }
    }
}

struct Searcher<'a> {
    chain: &'a StabChain,
    /// `labels[l]`: orbit labels of the stabilizer of the first `l` base points.
    labels: Vec<Vec<u32>>,
    map: PartialMap<'a>,
    from: &'a [Permutation],
    to: &'a [Permutation],
    nodes: u64,
    max_nodes: u64,
}

impl<'a> Searcher<'a> {
    fn new(chain: &'a StabChain, from: &'a [Permutation], to: &'a [Permutation], budget: &SearchBudget) -> Self {
        let k = chain.levels.len();
        let mut labels = Vec::with_capacity(k + 1);
        for l in 0..=k {
            labels.push(chain.stabilizer_orbit_labels(l));
        }
        Searcher {
            chain,
            labels,
            map: PartialMap::new(chain.degree, from, to),
            from,
            to,
            nodes: 0,
            max_nodes: budget.max_nodes,
        }
    }

    /// Every forced pair `x ↦ y` must satisfy `x ~ t⁻¹(y)` under the level-`l` stabilizer.
    fn consistent(&self, level: usize, t_inv: &Permutation) -> bool {
        let labels = &self.labels[level];
        self.map.trail.iter().all(|&x| {
            let y = self.map.fwd[x as usize];
            labels[x as usize] == labels[t_inv.apply(y) as usize]
        })
    }

    fn is_solution(&self, g: &Permutation) -> bool {
        self.from.iter().zip(self.to).all(|(a, b)| &a.conjugate_by(g) == b)
    }

    fn tick(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            return Err(Error::BudgetExceeded(format!(
                "backtrack search exceeded {} nodes",
                self.max_nodes
            )));
        }
        Ok(())
    }

    /// Depth-first search below `level` for any element of the coset `G^(level)·t`
    /// satisfying the map. `t` maps the earlier base points to their chosen images.
    fn find(&mut self, level: usize, t: &Permutation, t_inv: &Permutation) -> Result<Option<Permutation>> {
        self.tick()?;
        let chain = self.chain;
        if level == chain.levels.len() {
            return Ok(if self.is_solution(t) { Some(t.clone()) } else { None });
        }
        let lev = &chain.levels[level];
        let beta = lev.base_point;
        let forced = self.map.fwd[beta as usize];
        let candidates: Vec<u32> = if forced != NONE {
            if lev.in_orbit(t_inv.apply(forced)) {
                vec![forced]
            } else {
                return Ok(None);
            }
        } else {
            let mut c: Vec<u32> = lev
                .orbit
                .iter()
                .map(|&d| t.apply(d))
                .filter(|&g| self.map.bwd[g as usize] == NONE)
                .collect();
            c.sort_unstable();
            c
        };
        for gamma in candidates {
            if let Some(found) = self.try_branch(level, t, t_inv, gamma)? {
                return Ok(Some(found));
            }
        }
        Ok(None)
    }

    fn try_branch(
        &mut self,
        level: usize,
        t: &Permutation,
        t_inv: &Permutation,
        gamma: u32,
    ) -> Result<Option<Permutation>> {
        let lev = &self.chain.levels[level];
        let delta = t_inv.apply(gamma);
        let mark = self.map.mark();
        let mut result = None;
        if self.map.assign(lev.base_point, gamma) {
            let u = lev.rep(delta).expect("candidate in basic orbit");
            let u_inv = lev.inv_rep(delta).unwrap();
            let nt = u.compose(t);
            let nt_inv = t_inv.compose(u_inv);
            if self.consistent(level + 1, &nt_inv) {
                result = self.find(level + 1, &nt, &nt_inv)?;
            }
        }
        self.map.undo(mark);
        Ok(result)
    }
}

/// Base preference: points of the largest orbits of `⟨tuple⟩` first, each orbit
/// listed in propagation order.
fn tailored_priority(degree: usize, tuple: &[Permutation]) -> Vec<u32> {
    let labels = orbit_labels(degree, tuple);
    let mut size = vec![0u32; degree];
    for &l in &labels {
        size[l as usize] += 1;
    }
    let mut reps: Vec<u32> = (0..degree as u32).filter(|&p| labels[p as usize] == p).collect();
    reps.sort_by_key(|&r| (std::cmp::Reverse(size[r as usize]), r));
    let mut out = Vec::with_capacity(degree);
    let mut seen = vec![false; degree];
    for r in reps {
        let start = out.len();
        out.push(r);
        seen[r as usize] = true;
        let mut k = start;
        while k < out.len() {
            let p = out[k];
            for a in tuple {
                let q = a.apply(p);
                if !seen[q as usize] {
                    seen[q as usize] = true;
                    out.push(q);
                }
            }
            k += 1;
        }
    }
    out
}

fn extend_all(tuple: &[Permutation], degree: usize) -> Vec<Permutation> {
    tuple.iter().map(|p| p.extended(degree)).collect()
}

pub(super) fn centralizer_of_tuple(
    group: &PermGroup,
    tuple: &[Permutation],
    budget: &SearchBudget,
) -> Result<PermGroup> {
    let degree = group.degree();
    let tuple = extend_all(tuple, degree);
    if tuple.iter().all(|p| p.is_identity()) || group.is_trivial() {
        return Ok(group.clone());
    }
    let g = group.rebase(tailored_priority(degree, &tuple), budget.seed);
    let chain = g.chain();
    let mut searcher = Searcher::new(chain, &tuple, &tuple, budget);
    let k = chain.levels.len();
    let mut found: Vec<Permutation> = Vec::new();
    let mut order = BigUint::from(1u32);
    let identity = Permutation::identity(degree);

    // C ∩ G^(l) from C ∩ G^(l+1), bottom-up; `found` generates C ∩ G^(l+1).
    for level in (0..k).rev() {
        let lev = &chain.levels[level];
        let beta = lev.base_point;
        // earlier base points stay fixed
        let mark = searcher.map.mark();
        let mut ok = true;
        for j in 0..level {
            let b = chain.levels[j].base_point;
            ok &= searcher.map.assign(b, b);
        }
        debug_assert!(ok, "fixing base points is always consistent for centralizers");
        let mut failed = vec![false; degree];
        loop {
            let labels = orbit_labels(degree, &found);
            let beta_label = labels[beta as usize];
            let next = lev
                .orbit
                .iter()
                .copied()
                .filter(|&gamma| labels[gamma as usize] != beta_label && !failed[labels[gamma as usize] as usize])
                .min();
            let Some(gamma) = next else {
                let orbit_len = lev.orbit.iter().filter(|&&p| labels[p as usize] == beta_label).count();
                order *= BigUint::from(orbit_len);
                break;
            };
            let hit = if searcher.map.fwd[beta as usize] != NONE {
                // β is forced to itself by an earlier base point
                None
            } else {
                searcher.try_branch(level, &identity, &identity, gamma)?
            };
            match hit {
                Some(c) => found.push(c),
                None => failed[labels[gamma as usize] as usize] = true,
            }
        }
        searcher.map.undo(mark);
    }

    let opts = super::ChainOptions {
        seed: budget.seed,
        base_priority: Some(group.base()),
        known_order: Some(order.clone()),
    };
    let c = PermGroup::with_options_and_degree(found, degree, &opts);
    debug_assert_eq!(c.order(), &order);
    Ok(c)
}

pub(super) fn conjugating_tuple(
    group: &PermGroup,
    from: &[Permutation],
    to: &[Permutation],
    target_centralizer: Option<&PermGroup>,
    budget: &SearchBudget,
) -> Result<Option<Permutation>> {
    let degree = group.degree();
    if from.len() != to.len() {
        return Ok(None);
    }
    let from = extend_all(from, degree);
    let to = extend_all(to, degree);
    for (a, b) in from.iter().zip(&to) {
        if a.cycle_type() != b.cycle_type() {
            return Ok(None);
        }
    }
    for w in 0..from.len().saturating_sub(1) {
        if from[w].compose(&from[w + 1]).cycle_type() != to[w].compose(&to[w + 1]).cycle_type() {
            return Ok(None);
        }
    }
    let identity = Permutation::identity(degree);
    if from == to {
        return Ok(Some(identity));
    }
    let g = group.rebase(tailored_priority(degree, &from), budget.seed);
    let chain = g.chain();
    if chain.levels.is_empty() {
        return Ok(None);
    }
    let mut searcher = Searcher::new(chain, &from, &to, budget);
    // Solutions form a right coset of C(to), so a failing first-level image
    // fails along its whole orbit under any subgroup of C(to).
    let mut cgens: Vec<Permutation> = match target_centralizer {
        Some(c) => c.generators().to_vec(),
        None => Vec::new(),
    };
    if to.len() == 1 {
        cgens.push(to[0].clone());
    }
    let labels = orbit_labels(degree, &cgens);
    let lev = &chain.levels[0];
    let mut candidates: Vec<u32> = lev.orbit.clone();
    candidates.sort_unstable();
    let mut tried = vec![false; degree];
    for gamma in candidates {
        let l = labels[gamma as usize] as usize;
        if tried[l] {
            continue;
        }
        tried[l] = true;
        searcher.tick()?;
        if let Some(found) = searcher.try_branch(0, &identity, &identity, gamma)? {
            debug_assert!(searcher.is_solution(&found));
            return Ok(Some(found));
        }
    }
    Ok(None)
}
