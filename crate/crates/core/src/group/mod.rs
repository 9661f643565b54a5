//! Permutation groups backed by a verified stabilizer chain.

mod chain;
mod search;

use std::fmt;

use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::perm::Permutation;

pub(crate) use chain::orbit_labels;
use chain::StabChain;
pub use search::SearchBudget;

/// Knobs for stabilizer-chain construction.
#[derive(Clone, Debug, Default)]
pub struct ChainOptions {
    pub seed: u64,
    /// Preferred base points, most preferred first. Overrides the default heuristic.
    pub base_priority: Option<Vec<u32>>,
    /// Known order. Construction stops as soon as the chain reaches it.
    pub known_order: Option<BigUint>,
}

impl ChainOptions {
    pub fn seeded(seed: u64) -> Self {
        ChainOptions {
            seed,
            ..Default::default()
        }
    }
}

/// A permutation group with a verified base and strong generating set.
///
/// Immutable once built; all queries take `&self`.
#[derive(Clone)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    chain: StabChain,
    order: BigUint,
}

impl fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PermGroup")
            .field("degree", &self.degree)
            .field("order", &self.order)
            .field("base", &self.chain.base())
            .finish()
    }
}

/// Default base heuristic: points in larger orbits of the generators first,
/// ties broken by point number.
fn default_priority(degree: usize, gens: &[Permutation]) -> Vec<u32> {
    let labels = orbit_labels(degree, gens);
    let mut size = vec![0u32; degree];
    for &l in &labels {
        size[l as usize] += 1;
    }
    let mut pts: Vec<u32> = (0..degree as u32)
        .filter(|&p| size[labels[p as usize] as usize] > 1)
        .collect();
    pts.sort_by_key(|&p| (std::cmp::Reverse(size[labels[p as usize] as usize]), p));
    pts
}

impl PermGroup {
    /// The group generated by `gens`, built with the default options and `seed`.
    pub fn new(gens: Vec<Permutation>, seed: u64) -> Self {
        Self::with_options(gens, &ChainOptions::seeded(seed))
    }

    pub fn trivial(degree: usize) -> Self {
        Self::with_options_and_degree(Vec::new(), degree, &ChainOptions::default())
    }

    pub fn with_options(gens: Vec<Permutation>, opts: &ChainOptions) -> Self {
        let degree = gens.iter().map(|g| g.degree()).max().unwrap_or(0);
        Self::with_options_and_degree(gens, degree, opts)
    }

    pub(crate) fn with_options_and_degree(gens: Vec<Permutation>, degree: usize, opts: &ChainOptions) -> Self {
        let degree = gens.iter().map(|g| g.degree()).max().unwrap_or(0).max(degree);
        let gens: Vec<Permutation> = gens.into_iter().map(|g| g.extended(degree)).collect();
        let priority = match &opts.base_priority {
            Some(p) => p.clone(),
            None => default_priority(degree, &gens),
        };
        let mut chain = StabChain::empty(degree, Some(&priority));
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        chain.randomized(&gens, &mut rng, opts.known_order.as_ref(), 40);
        let reached = matches!(&opts.known_order, Some(t) if &chain.order() >= t);
        if !reached {
            chain.complete();
        }
        let order = chain.order();
        PermGroup {
            degree,
            generators: gens,
            chain,
            order,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn order(&self) -> &BigUint {
        &self.order
    }

    /// Order as `u64`, if it fits.
    pub fn order_u64(&self) -> Option<u64> {
        u64::try_from(&self.order).ok()
    }

    /// Base points, 0-based.
    pub fn base(&self) -> Vec<u32> {
        self.chain.base()
    }

    pub fn strong_generators(&self) -> &[Permutation] {
        self.chain.strong_generators()
    }

    /// Lengths of the basic orbits; their product is the order.
    pub fn basic_orbit_lengths(&self) -> Vec<usize> {
        self.chain.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn is_trivial(&self) -> bool {
        self.chain.levels.is_empty()
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.chain.contains(p)
    }

    pub(crate) fn check_member(&self, p: &Permutation) -> Result<()> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(Error::Membership(p.to_string()))
        }
    }

    pub fn identity(&self) -> Permutation {
        Permutation::identity(self.degree)
    }

    /// The subgroup generated by `gens`, each of which must lie in `self`.
    pub fn subgroup(&self, gens: &[Permutation], seed: u64) -> Result<PermGroup> {
        for g in gens {
            self.check_member(g)?;
        }
        let opts = ChainOptions {
            seed,
            base_priority: Some(self.base_priority_hint()),
            known_order: None,
        };
        Ok(Self::with_options_and_degree(gens.to_vec(), self.degree, &opts))
    }

    /// Builds `⟨gens⟩` and reports whether it equals `self`. Cheaper than
    /// [`subgroup`](Self::subgroup) when the answer is yes, since the chain
    /// stops once it reaches `|self|`.
    pub fn generated_subgroup_is_whole(&self, gens: &[Permutation], seed: u64) -> Result<(bool, PermGroup)> {
        for g in gens {
            self.check_member(g)?;
        }
        let opts = ChainOptions {
            seed,
            base_priority: Some(self.base_priority_hint()),
            known_order: Some(self.order.clone()),
        };
        let h = Self::with_options_and_degree(gens.to_vec(), self.degree, &opts);
        Ok((h.order == self.order, h))
    }

    fn base_priority_hint(&self) -> Vec<u32> {
        let mut pri = self.base();
        pri.extend(default_priority(self.degree, &self.generators));
        pri
    }

    /// Same group with a chain built on a preferred base.
    pub(crate) fn rebase(&self, priority: Vec<u32>, seed: u64) -> PermGroup {
        let opts = ChainOptions {
            seed,
            base_priority: Some(priority),
            known_order: Some(self.order.clone()),
        };
        let mut gens = self.strong_generators().to_vec();
        if gens.is_empty() {
            gens = self.generators.clone();
        }
        let mut g = Self::with_options_and_degree(gens, self.degree, &opts);
        g.generators = self.generators.clone();
        g
    }

    pub(crate) fn chain(&self) -> &StabChain {
        &self.chain
    }

    /// Uniformly distributed element.
    pub fn random_element<R: rand::Rng>(&self, rng: &mut R) -> Permutation {
        self.chain.random_element(rng)
    }

    /// A deterministic stream of uniform random elements.
    pub fn random_stream(&self, seed: u64) -> RandomElements<'_> {
        RandomElements {
            group: self,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn for_each_element(&self, f: impl FnMut(&Permutation)) {
        self.chain.for_each_element(f)
    }

    /// All elements, for groups small enough to list.
    pub fn elements(&self) -> Vec<Permutation> {
        let mut out = Vec::new();
        self.for_each_element(|g| out.push(g.clone()));
        out
    }

    /// Orbit of a 0-based point under the group.
    pub fn orbit(&self, point: u32) -> Vec<u32> {
        let labels = orbit_labels(self.degree, &self.generators);
        let l = labels[point as usize];
        (0..self.degree as u32).filter(|&p| labels[p as usize] == l).collect()
    }

    /// `C_G(p)`.
    pub fn centralizer(&self, p: &Permutation, budget: &SearchBudget) -> Result<PermGroup> {
        self.check_member(p)?;
        search::centralizer_of_tuple(self, std::slice::from_ref(p), budget)
    }

    /// Pointwise centralizer of a tuple, `C_G(a₁) ∩ … ∩ C_G(a_k)`.
    pub fn centralizer_of_tuple(&self, tuple: &[Permutation], budget: &SearchBudget) -> Result<PermGroup> {
        for p in tuple {
            self.check_member(p)?;
        }
        search::centralizer_of_tuple(self, tuple, budget)
    }

    /// Some `g` with `g⁻¹ a g = b`, or `None` when `a` and `b` are not conjugate in the group.
    pub fn conjugating_element(
        &self,
        a: &Permutation,
        b: &Permutation,
        budget: &SearchBudget,
    ) -> Result<Option<Permutation>> {
        self.check_member(a)?;
        self.check_member(b)?;
        search::conjugating_tuple(self, std::slice::from_ref(a), std::slice::from_ref(b), None, budget)
    }

    /// Like [`conjugating_element`](Self::conjugating_element), using a known
    /// subgroup of `C_G(b)` to prune the first search level.
    pub fn conjugating_element_with(
        &self,
        a: &Permutation,
        b: &Permutation,
        target_centralizer: Option<&PermGroup>,
        budget: &SearchBudget,
    ) -> Result<Option<Permutation>> {
        self.check_member(a)?;
        self.check_member(b)?;
        search::conjugating_tuple(
            self,
            std::slice::from_ref(a),
            std::slice::from_ref(b),
            target_centralizer,
            budget,
        )
    }

    /// Some `g` conjugating the tuple `a` componentwise onto `b`.
    pub fn conjugating_tuple(
        &self,
        a: &[Permutation],
        b: &[Permutation],
        budget: &SearchBudget,
    ) -> Result<Option<Permutation>> {
        for p in a.iter().chain(b) {
            self.check_member(p)?;
        }
        search::conjugating_tuple(self, a, b, None, budget)
    }
}

pub struct RandomElements<'a> {
    group: &'a PermGroup,
    rng: ChaCha8Rng,
}

impl Iterator for RandomElements<'_> {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        Some(self.group.random_element(&mut self.rng))
    }
}
