//! String C-group representations: involution tuples `s₀, …, s_n` with
//! `(s_i s_j)² = 1` for `|i − j| ≥ 2` that satisfy the intersection condition
//! `⟨s_I⟩ ∩ ⟨s_J⟩ = ⟨s_{I∩J}⟩` for all index sets `I`, `J`.

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::fmt;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::conjugacy::{conjugacy_classes, involution_classes, largest_involution_class, ClassOptions, ClassTable};
use crate::error::{Error, Result};
use crate::group::{PermGroup, SearchBudget};
use crate::perm::Permutation;

/// Involutions of a group satisfying the string condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StringGenerators {
    gens: Vec<Permutation>,
}

impl StringGenerators {
    pub fn new(group: &PermGroup, gens: Vec<Permutation>) -> Result<Self> {
        let gens: Vec<Permutation> = gens.into_iter().map(|g| g.extended(group.degree())).collect();
        for (index, g) in gens.iter().enumerate() {
            if g.is_identity() || !g.compose(g).is_identity() {
                return Err(Error::NotInvolution { index });
            }
            group.check_member(g)?;
        }
        for i in 0..gens.len() {
            for j in i + 2..gens.len() {
                let p = gens[j].compose(&gens[i]);
                if !p.compose(&p).is_identity() {
                    return Err(Error::StringConditionViolated { i, j });
                }
            }
        }
        Ok(StringGenerators { gens })
    }

    pub fn gens(&self) -> &[Permutation] {
        &self.gens
    }

    pub fn rank(&self) -> usize {
        self.gens.len()
    }
}

/// `{m₁, …, m_n}` with `m_i` the order of `s_{i−1} s_i`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SchlafliType(pub Vec<u64>);

impl fmt::Display for SchlafliType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|m| m.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

pub fn schlafli_type(sg: &StringGenerators) -> SchlafliType {
    SchlafliType(
        sg.gens
            .windows(2)
            .map(|w| w[0].compose(&w[1]).order_u64().expect("element order fits in u64"))
            .collect(),
    )
}

/// Orders recorded for one pair of index sets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairCheck {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    pub left_order: String,
    pub right_order: String,
    /// `|⟨s_I⟩ ∩ ⟨s_J⟩|`.
    pub meet_order: String,
    /// `|⟨s_{I∩J}⟩|`.
    pub common_order: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    /// An element of `⟨s_I⟩ ∩ ⟨s_J⟩` outside `⟨s_{I∩J}⟩`.
    pub witness: Permutation,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionReport {
    pub holds: bool,
    pub checks: Vec<PairCheck>,
    pub violation: Option<Violation>,
}

/// Which index-set pairs to examine.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IntersectionMode {
    /// Every pair of index sets, as in the definition.
    Full,
    /// Rank 3 only: the three pairs of 2-sets and the pairs of singletons.
    Rank3Fast,
}

/// Limits on listing subgroup elements.
#[derive(Clone, Debug)]
pub struct IntersectionBudget {
    pub max_elements: u64,
}

impl Default for IntersectionBudget {
    fn default() -> Self {
        IntersectionBudget {
            max_elements: 2_000_000,
        }
    }
}

fn subset(mask: u32, n: usize) -> Vec<usize> {
    (0..n).filter(|&i| mask >> i & 1 == 1).collect()
}

fn pairs_to_check(n: usize, mode: IntersectionMode) -> Vec<(u32, u32)> {
    match mode {
        IntersectionMode::Rank3Fast if n == 3 => vec![
            (0b001, 0b010),
            (0b001, 0b100),
            (0b010, 0b100),
            (0b011, 0b110),
            (0b011, 0b101),
            (0b101, 0b110),
        ],
        _ => {
            let full = 1u32 << n;
            let mut out = Vec::new();
            for a in 0..full {
                for b in a + 1..full {
                    // nested sets meet in the smaller one
                    if a & b == a || a & b == b {
                        continue;
                    }
                    out.push((a, b));
                }
            }
            out
        }
    }
}

/// All elements of `⟨gens⟩` by closure, or `None` past `cap`.
fn list_elements(gens: &[Permutation], degree: usize, cap: u64) -> Option<Vec<Permutation>> {
    let id = Permutation::identity(degree);
    let mut seen: HashSet<Permutation> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(id.clone());
    queue.push_back(id);
    let mut out = Vec::new();
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = x.compose(g);
            if seen.insert(y.clone()) {
                if seen.len() as u64 > cap {
                    return None;
                }
                queue.push_back(y);
            }
        }
        out.push(x);
    }
    Some(out)
}

pub fn intersection_condition(
    group: &PermGroup,
    sg: &StringGenerators,
    mode: IntersectionMode,
    budget: &IntersectionBudget,
    seed: u64,
) -> Result<IntersectionReport> {
    let n = sg.rank();
    let degree = group.degree();
    let pick = |mask: u32| -> Vec<Permutation> { subset(mask, n).into_iter().map(|i| sg.gens[i].clone()).collect() };
    let mut groups: BTreeMap<u32, PermGroup> = BTreeMap::new();
    let mut checks = Vec::new();
    for (a, b) in pairs_to_check(n, mode) {
        for m in [a, b, a & b] {
            if !groups.contains_key(&m) {
                groups.insert(m, group.subgroup(&pick(m), seed)?);
            }
        }
        let (ga, gb, gc) = (&groups[&a], &groups[&b], &groups[&(a & b)]);
        let (small, large) = if ga.order() <= gb.order() { (a, gb) } else { (b, ga) };
        let elems = list_elements(&pick(small), degree, budget.max_elements).ok_or_else(|| {
            Error::IntersectionBudgetExceeded(format!(
                "listing ⟨s_{:?}⟩ needs more than {} elements",
                subset(small, n),
                budget.max_elements
            ))
        })?;
        let mut meet = 0u64;
        let mut witness = None;
        for x in &elems {
            if large.contains(x) {
                meet += 1;
                if witness.is_none() && !gc.contains(x) {
                    witness = Some(x.clone());
                }
            }
        }
        checks.push(PairCheck {
            left: subset(a, n),
            right: subset(b, n),
            left_order: ga.order().to_string(),
            right_order: gb.order().to_string(),
            meet_order: meet.to_string(),
            common_order: gc.order().to_string(),
        });
        if let Some(w) = witness {
            return Ok(IntersectionReport {
                holds: false,
                checks,
                violation: Some(Violation {
                    left: subset(a, n),
                    right: subset(b, n),
                    witness: w,
                }),
            });
        }
        debug_assert_eq!(BigUint::from(meet), *gc.order());
    }
    Ok(IntersectionReport {
        holds: true,
        checks,
        violation: None,
    })
}

/// A checked generating tuple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StringCRep {
    pub generators: Vec<Permutation>,
    pub schlafli: SchlafliType,
    pub verified: bool,
    pub generates_full_group: bool,
}

/// Options shared by verification and search.
#[derive(Clone, Debug)]
pub struct RepOptions {
    pub mode: IntersectionMode,
    pub budget: IntersectionBudget,
    pub seed: u64,
}

impl Default for RepOptions {
    fn default() -> Self {
        RepOptions {
            mode: IntersectionMode::Full,
            budget: IntersectionBudget::default(),
            seed: 1,
        }
    }
}

pub fn is_string_c_rep(group: &PermGroup, gens: Vec<Permutation>, opts: &RepOptions) -> Result<StringCRep> {
    let sg = StringGenerators::new(group, gens)?;
    let (whole, _) = group.generated_subgroup_is_whole(sg.gens(), opts.seed)?;
    let report = intersection_condition(group, &sg, opts.mode, &opts.budget, opts.seed)?;
    Ok(StringCRep {
        schlafli: schlafli_type(&sg),
        generators: sg.gens,
        verified: report.holds,
        generates_full_group: whole,
    })
}

/// `⟨s₁, …, s_n⟩`.
pub fn vertex_stabilizer(group: &PermGroup, rep: &StringCRep, seed: u64) -> Result<PermGroup> {
    group.subgroup(&rep.generators[1..], seed)
}

/// How `s₂` is chosen inside `K = C_G(s₀)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum S2Selector {
    /// Representative of the unique largest involution class of `K`.
    LargestInvolutionClass,
    /// Every involution class of `K` of maximal size, searched in turn.
    LargestInvolutionClasses,
    /// Representative of this class of `K` (0-based, in `K`'s canonical order).
    Class(usize),
    /// A given element of `K`.
    Element(Permutation),
}

#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub rep: RepOptions,
    pub classes: ClassOptions,
    pub search: SearchBudget,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            rep: RepOptions {
                mode: IntersectionMode::Full,
                ..RepOptions::default()
            },
            classes: ClassOptions::default(),
            search: SearchBudget::default(),
        }
    }
}

/// Outcome for one class representative `d`, with `s₁ = d⁻¹ s₀ d`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Candidate {
    /// Position in the report's `s2` list.
    pub s2_choice: usize,
    pub class_index: usize,
    #[serde(rename = "type")]
    pub schlafli: Option<SchlafliType>,
    pub generates_full_group: bool,
    pub verified: bool,
    pub generators: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoundRep {
    /// Index into `candidates` of the first candidate in this conjugacy class of triples.
    pub candidate: usize,
    #[serde(rename = "type")]
    pub schlafli: SchlafliType,
    pub generators: Vec<String>,
}

/// Report of a rank-3 search; serializes to the `polyscan/1` report format.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchReport {
    pub format: String,
    pub group: String,
    pub group_order: String,
    pub seed: u64,
    pub s0_class: usize,
    pub s0: String,
    pub s2: Vec<String>,
    pub centralizer_order: String,
    pub candidates: Vec<Candidate>,
    pub representations: Vec<FoundRep>,
    /// Number of representations per Schläfli type, keyed by e.g. `{5,5}`.
    pub histogram: BTreeMap<String, usize>,
}

pub const REPORT_FORMAT: &str = "polyscan/1";

impl SearchReport {
    /// Distinct entries occurring in the Schläfli types of the representations.
    pub fn type_entries(&self) -> Vec<u64> {
        let mut out: Vec<u64> = self
            .representations
            .iter()
            .flat_map(|r| r.schlafli.0.iter().copied())
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let r: SearchReport = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        if r.format != REPORT_FORMAT {
            return Err(Error::Format(format!("unknown report format `{}`", r.format)));
        }
        Ok(r)
    }
}

fn per_candidate_seed(seed: u64, index: usize) -> u64 {
    seed ^ (index as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15)
}

fn check_candidate(
    group: &PermGroup,
    gens: Vec<Permutation>,
    opts: &RepOptions,
    seed: u64,
) -> Result<(Option<SchlafliType>, bool, bool, Option<String>)> {
    let sg = match StringGenerators::new(group, gens) {
        Ok(sg) => sg,
        Err(e @ (Error::NotInvolution { .. } | Error::StringConditionViolated { .. })) => {
            return Ok((None, false, false, Some(e.to_string())));
        }
        Err(e) => return Err(e),
    };
    let ty = schlafli_type(&sg);
    let (whole, _) = group.generated_subgroup_is_whole(sg.gens(), seed)?;
    if !whole {
        return Ok((Some(ty), false, false, None));
    }
    match intersection_condition(group, &sg, opts.mode, &opts.budget, seed) {
        Ok(r) => Ok((Some(ty), true, r.holds, None)),
        Err(e @ Error::IntersectionBudgetExceeded(_)) => Ok((Some(ty), true, false, Some(e.to_string()))),
        Err(e) => Err(e),
    }
}

/// Chooses the candidates for `s₂` in `K = C_G(s₀)`; returns them with `K`.
pub fn select_s2(
    group: &PermGroup,
    s0: &Permutation,
    selector: &S2Selector,
    opts: &SearchOptions,
) -> Result<(Vec<Permutation>, PermGroup)> {
    let k = group.centralizer(s0, &opts.search)?;
    if let S2Selector::Element(p) = selector {
        let p = p.extended(group.degree());
        k.check_member(&p)?;
        return Ok((vec![p], k));
    }
    let kt = conjugacy_classes(&k, &opts.classes)?;
    let chosen: Vec<usize> = match selector {
        S2Selector::Class(i) => {
            let c = kt
                .classes()
                .get(*i)
                .ok_or_else(|| Error::AmbiguousSelection(format!("centralizer has no class {}", i + 1)))?;
            if c.element_order != 2 {
                return Err(Error::NotInvolution { index: 2 });
            }
            vec![*i]
        }
        S2Selector::LargestInvolutionClass => vec![largest_involution_class(&kt)?],
        _ => {
            let inv = involution_classes(&kt);
            let max = inv.last().map(|c| c.size.clone());
            inv.iter()
                .filter(|c| Some(&c.size) == max.as_ref())
                .map(|c| c.index)
                .collect()
        }
    };
    Ok((
        chosen.iter().map(|&i| kt.classes()[i].representative.clone()).collect(),
        k,
    ))
}

/// Involution classes of `C_G(s₀)` as `(index, size)`, smallest first.
pub fn centralizer_involution_classes(k: &PermGroup, opts: &ClassOptions) -> Result<Vec<(usize, BigUint)>> {
    let kt = conjugacy_classes(k, opts)?;
    Ok(involution_classes(&kt)
        .iter()
        .map(|c| (c.index, c.size.clone()))
        .collect())
}

/// Fixes `s₀` and `s₂`, and tries `s₁ = d⁻¹ s₀ d` for one representative `d`
/// of every class of `G`. Verified triples are then grouped up to
/// simultaneous conjugation, keeping the first of each kind.
pub fn search_rank3(
    name: &str,
    table: &ClassTable<'_>,
    s0_class: usize,
    s2: &S2Selector,
    opts: &SearchOptions,
) -> Result<SearchReport> {
    let group = table.group();
    let class = table
        .classes()
        .get(s0_class)
        .ok_or_else(|| Error::AmbiguousSelection(format!("no class {}", s0_class + 1)))?;
    if class.element_order != 2 {
        return Err(Error::NotInvolution { index: 0 });
    }
    let s0 = class.representative.clone();
    let (s2s, k) = select_s2(group, &s0, s2, opts)?;
    let seed = opts.rep.seed;
    let jobs: Vec<(usize, usize)> = (0..s2s.len())
        .flat_map(|a| (0..table.len()).map(move |c| (a, c)))
        .collect();
    let triples: Vec<Vec<Permutation>> = jobs
        .iter()
        .map(|&(a, c)| {
            vec![
                s0.clone(),
                s0.conjugate_by(&table.classes()[c].representative),
                s2s[a].clone(),
            ]
        })
        .collect();
    let outcomes: Vec<Result<Candidate>> = jobs
        .par_iter()
        .zip(triples.par_iter())
        .enumerate()
        .map(|(n, (&(a, c), gens))| {
            let (schlafli, whole, verified, note) =
                check_candidate(group, gens.clone(), &opts.rep, per_candidate_seed(seed, n))?;
            Ok(Candidate {
                s2_choice: a,
                class_index: c,
                schlafli,
                generates_full_group: whole,
                verified,
                generators: gens.iter().map(|g| g.to_string()).collect(),
                note,
            })
        })
        .collect();
    let candidates = outcomes.into_iter().collect::<Result<Vec<_>>>()?;
    let mut reps: Vec<usize> = Vec::new();
    for (i, cand) in candidates.iter().enumerate() {
        if !cand.verified {
            continue;
        }
        let mut duplicate = false;
        for &j in &reps {
            if candidates[j].schlafli != cand.schlafli {
                continue;
            }
            if group
                .conjugating_tuple(&triples[i], &triples[j], &opts.search)?
                .is_some()
            {
                duplicate = true;
                break;
            }
        }
        if !duplicate {
            reps.push(i);
        }
    }
    let representations: Vec<FoundRep> = reps
        .iter()
        .map(|&i| FoundRep {
            candidate: i,
            schlafli: candidates[i].schlafli.clone().expect("verified candidates are typed"),
            generators: candidates[i].generators.clone(),
        })
        .collect();
    let mut histogram = BTreeMap::new();
    for r in &representations {
        *histogram.entry(r.schlafli.to_string()).or_insert(0) += 1;
    }
    Ok(SearchReport {
        format: REPORT_FORMAT.to_string(),
        group: name.to_string(),
        group_order: group.order().to_string(),
        seed,
        s0_class,
        s0: s0.to_string(),
        s2: s2s.iter().map(|p| p.to_string()).collect(),
        centralizer_order: k.order().to_string(),
        candidates,
        representations,
        histogram,
    })
}

pub const EXHAUSTIVE_MAX_ORDER: u64 = 100_000;

/// Every verified ordered triple of a small group, one per conjugacy class of triples.
pub fn exhaustive_rank3(group: &PermGroup, opts: &SearchOptions) -> Result<Vec<StringCRep>> {
    if group.order_u64().is_none_or(|o| o > EXHAUSTIVE_MAX_ORDER) {
        return Err(Error::BudgetExceeded(format!(
            "exhaustive search needs |G| ≤ {EXHAUSTIVE_MAX_ORDER}, got {}",
            group.order()
        )));
    }
    let table = conjugacy_classes(group, &opts.classes)?;
    let involutions: Vec<Permutation> = group
        .elements()
        .into_iter()
        .filter(|g| !g.is_identity() && g.compose(g).is_identity())
        .collect();
    let mut found: Vec<StringCRep> = Vec::new();
    for c in involution_classes(&table) {
        let s0 = &c.representative;
        for s2 in involutions.iter().filter(|t| s0.compose(t) == t.compose(s0)) {
            for s1 in &involutions {
                let gens = vec![s0.clone(), s1.clone(), s2.clone()];
                let (ty, whole, verified, _) = check_candidate(group, gens.clone(), &opts.rep, opts.rep.seed)?;
                if !(whole && verified) {
                    continue;
                }
                let ty = ty.expect("verified candidates are typed");
                let mut duplicate = false;
                for f in found.iter().filter(|f| f.schlafli == ty) {
                    if group.conjugating_tuple(&gens, &f.generators, &opts.search)?.is_some() {
                        duplicate = true;
                        break;
                    }
                }
                if !duplicate {
                    found.push(StringCRep {
                        generators: gens,
                        schlafli: ty,
                        verified: true,
                        generates_full_group: true,
                    });
                }
            }
        }
    }
    Ok(found)
}
