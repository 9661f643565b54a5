//! Class functions and ordinary character tables.
//!
//! Tables are either computed (Dixon-Schneider, small groups only) or imported
//! from a JSON file and matched against the group's own class inventory. Every
//! table is checked on construction: positive integral degrees, the trivial
//! character, `Σ χ(1)² = |G|`, exact row orthogonality, and the involution
//! count `Σ ν₂(χ) χ(1) = 1 + #{g : g² = 1, g ≠ 1}`.

mod align;
mod dixon;
pub(crate) mod modular;
mod ortho;

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::conjugacy::{conjugacy_classes, ClassOptions, ClassTable};
use crate::cyclotomic::{Cyclotomic, MAX_CONDUCTOR};
use crate::error::{Error, Result};
use crate::group::PermGroup;

pub use align::{align_table, import_table};
pub use dixon::{dixon_prime, dixon_table, DixonOptions};

/// Class data a character table is indexed by.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassLayout {
    pub group_order: BigUint,
    pub sizes: Vec<BigUint>,
    pub element_orders: Vec<u64>,
    pub square_map: Vec<usize>,
}

impl ClassLayout {
    pub fn from_classes(table: &ClassTable<'_>) -> Self {
        ClassLayout {
            group_order: table.group_order().clone(),
            sizes: table.classes().iter().map(|c| c.size.clone()).collect(),
            element_orders: table.classes().iter().map(|c| c.element_order).collect(),
            square_map: table.square_map().to_vec(),
        }
    }

    pub fn len(&self) -> usize {
        self.sizes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sizes.is_empty()
    }

    pub fn exponent(&self) -> u64 {
        self.element_orders.iter().fold(1u64, |acc, &o| acc.lcm(&o))
    }

    /// `1 + #{g : g has order 2}`, the number of square roots of the identity.
    pub fn square_roots_of_one(&self) -> BigUint {
        let inv: BigUint = self
            .sizes
            .iter()
            .zip(&self.element_orders)
            .filter(|(_, &o)| o == 2)
            .map(|(s, _)| s.clone())
            .sum();
        inv + 1u32
    }

    fn check(&self) -> Result<()> {
        let r = self.len();
        if r == 0 || self.element_orders.len() != r || self.square_map.len() != r {
            return Err(Error::Consistency("class data have inconsistent lengths".into()));
        }
        if self.element_orders[0] != 1 || !self.sizes[0].is_one() {
            return Err(Error::Consistency("the first class must be the identity".into()));
        }
        let total: BigUint = self.sizes.iter().sum();
        if total != self.group_order {
            return Err(Error::Consistency(format!(
                "class sizes sum to {total}, not the group order {}",
                self.group_order
            )));
        }
        for (i, s) in self.sizes.iter().enumerate() {
            let o = self.element_orders[i];
            if s.is_zero() || !(&self.group_order % s).is_zero() {
                return Err(Error::Consistency(format!(
                    "class {} has size {s} not dividing |G|",
                    i + 1
                )));
            }
            if o == 0 || (i > 0 && o == 1) {
                return Err(Error::Consistency(format!("class {} has element order {o}", i + 1)));
            }
            if !(&self.group_order % o).is_zero() {
                return Err(Error::Consistency(format!("element order {o} does not divide |G|")));
            }
            let sq = self.square_map[i];
            let want = if o % 2 == 0 { o / 2 } else { o };
            if sq >= r || self.element_orders[sq] != want {
                return Err(Error::Consistency(format!(
                    "square map sends class {} (order {o}) to an element of the wrong order",
                    i + 1
                )));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableSource {
    Computed,
    Imported,
}

/// A function on the classes of a layout.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassFunction {
    layout: Arc<ClassLayout>,
    values: Vec<Cyclotomic>,
}

impl ClassFunction {
    pub fn new(layout: Arc<ClassLayout>, values: Vec<Cyclotomic>) -> Result<Self> {
        if values.len() != layout.len() {
            return Err(Error::TableMismatch);
        }
        Ok(ClassFunction { layout, values })
    }

    pub fn layout(&self) -> &Arc<ClassLayout> {
        &self.layout
    }

    pub fn values(&self) -> &[Cyclotomic] {
        &self.values
    }

    /// Value at the identity.
    pub fn degree(&self) -> &Cyclotomic {
        &self.values[0]
    }

    pub fn difference(&self, other: &ClassFunction) -> Result<ClassFunction> {
        same_layout(&self.layout, &other.layout)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect();
        Ok(ClassFunction {
            layout: self.layout.clone(),
            values,
        })
    }
}

fn same_layout(a: &Arc<ClassLayout>, b: &Arc<ClassLayout>) -> Result<()> {
    if Arc::ptr_eq(a, b) || a == b {
        Ok(())
    } else {
        Err(Error::TableMismatch)
    }
}

#[derive(Clone, Debug)]
pub struct CharacterTable {
    layout: Arc<ClassLayout>,
    irreducibles: Vec<Vec<Cyclotomic>>,
    degrees: Vec<BigUint>,
    indicators: Vec<i8>,
    source: TableSource,
}

impl CharacterTable {
    /// Validates and wraps a table. Values are rewritten over minimal conductors.
    pub fn new(layout: ClassLayout, irreducibles: Vec<Vec<Cyclotomic>>, source: TableSource) -> Result<Self> {
        layout.check()?;
        let r = layout.len();
        if irreducibles.len() != r {
            return Err(Error::Consistency(format!(
                "{} characters for {r} classes",
                irreducibles.len()
            )));
        }
        let mut rows = Vec::with_capacity(r);
        for (i, row) in irreducibles.into_iter().enumerate() {
            if row.len() != r {
                return Err(Error::Consistency(format!(
                    "character {} has {} values for {r} classes",
                    i + 1,
                    row.len()
                )));
            }
            rows.push(row.iter().map(Cyclotomic::reduced).collect::<Vec<_>>());
        }
        let mut degrees = Vec::with_capacity(r);
        for (i, row) in rows.iter().enumerate() {
            match row[0].to_integer().and_then(|d| d.to_biguint()) {
                Some(d) if !d.is_zero() => degrees.push(d),
                _ => {
                    return Err(Error::Consistency(format!(
                        "character {} has degree {}, not a positive integer",
                        i + 1,
                        row[0]
                    )));
                }
            }
        }
        let one = Cyclotomic::one();
        if !rows.iter().any(|row| row.iter().all(|v| v == &one)) {
            return Err(Error::Consistency("the trivial character is missing".into()));
        }
        let sum_sq: BigUint = degrees.iter().map(|d| d * d).sum();
        if sum_sq != layout.group_order {
            return Err(Error::Consistency(format!(
                "squared degrees sum to {sum_sq}, not the group order {}",
                layout.group_order
            )));
        }
        ortho::check_row_orthogonality(&layout, &rows)?;
        let indicators = (0..r)
            .map(|i| indicator_of(&layout, &rows[i], i))
            .collect::<Result<Vec<i8>>>()
            .map_err(|e| Error::Consistency(e.to_string()))?;
        let lhs: BigInt = indicators
            .iter()
            .zip(&degrees)
            .map(|(&nu, d)| BigInt::from(nu) * BigInt::from(d.clone()))
            .sum();
        let rhs = BigInt::from(layout.square_roots_of_one());
        if lhs != rhs {
            return Err(Error::Consistency(format!(
                "indicator-weighted degrees sum to {lhs}, but the group has {rhs} square roots of 1"
            )));
        }
        Ok(CharacterTable {
            layout: Arc::new(layout),
            irreducibles: rows,
            degrees,
            indicators,
            source,
        })
    }

    pub fn layout(&self) -> &Arc<ClassLayout> {
        &self.layout
    }

    pub fn len(&self) -> usize {
        self.irreducibles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.irreducibles.is_empty()
    }

    pub fn irreducibles(&self) -> &[Vec<Cyclotomic>] {
        &self.irreducibles
    }

    pub fn degrees(&self) -> &[BigUint] {
        &self.degrees
    }

    pub fn source(&self) -> TableSource {
        self.source
    }

    pub fn character(&self, i: usize) -> ClassFunction {
        ClassFunction {
            layout: self.layout.clone(),
            values: self.irreducibles[i].clone(),
        }
    }

    /// Index of the trivial character.
    pub fn trivial_index(&self) -> usize {
        let one = Cyclotomic::one();
        self.irreducibles
            .iter()
            .position(|row| row.iter().all(|v| v == &one))
            .expect("validated tables contain the trivial character")
    }

    /// Same characters with columns permuted: `perm[old] = new`.
    pub(crate) fn permute_classes(&self, layout: ClassLayout, perm: &[usize]) -> Result<Self> {
        let mut rows = Vec::with_capacity(self.len());
        for row in &self.irreducibles {
            let mut new = vec![Cyclotomic::zero(); row.len()];
            for (old, v) in row.iter().enumerate() {
                new[perm[old]] = v.clone();
            }
            rows.push(new);
        }
        CharacterTable::new(layout, rows, self.source)
    }
}

/// Equality of class data and values; the source is not compared.
impl PartialEq for CharacterTable {
    fn eq(&self, other: &Self) -> bool {
        self.layout == other.layout && self.irreducibles == other.irreducibles
    }
}

/// Adds `weight·value` terms exactly. Terms are grouped by conductor, which
/// for Galois-stable families keeps every partial sum rational.
fn rational_sum<'a>(terms: impl Iterator<Item = (BigInt, Cyclotomic)> + 'a) -> Option<BigInt> {
    let mut buckets: BTreeMap<u32, Cyclotomic> = BTreeMap::new();
    for (w, v) in terms {
        if v.is_zero() || w.is_zero() {
            continue;
        }
        let term = v.scale(&w);
        let slot = buckets.entry(v.conductor()).or_insert_with(Cyclotomic::zero);
        *slot = &*slot + &term;
    }
    let mut total = BigInt::zero();
    let mut rest = Cyclotomic::zero();
    for v in buckets.into_values() {
        match v.to_integer() {
            Some(k) => total += k,
            None => {
                let m = rest.conductor().lcm(&v.conductor());
                if m > MAX_CONDUCTOR {
                    return None;
                }
                rest = &rest + &v;
            }
        }
    }
    rest.to_integer().map(|k| total + k)
}

fn indicator_of(layout: &ClassLayout, row: &[Cyclotomic], index: usize) -> Result<i8> {
    let terms = (0..layout.len()).map(|c| (BigInt::from(layout.sizes[c].clone()), row[layout.square_map[c]].clone()));
    let bad = |value: String| Error::NonIntegralIndicator {
        character: index + 1,
        value,
    };
    let sum = rational_sum(terms).ok_or_else(|| bad("irrational".into()))?;
    let order = BigInt::from(layout.group_order.clone());
    let (q, rem) = sum.div_rem(&order);
    if !rem.is_zero() {
        return Err(bad(BigRational::new(sum, order).to_string()));
    }
    match q.to_i8() {
        Some(v @ -1..=1) => Ok(v),
        _ => Err(bad(q.to_string())),
    }
}

/// Frobenius-Schur indicators of every irreducible character.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndicatorReport {
    pub indicators: Vec<i8>,
    pub degrees: Vec<BigUint>,
    /// `Σ ν₂(χ) χ(1)`.
    pub weighted_sum: BigInt,
    /// `1 + #{involutions}`.
    pub square_roots_of_one: BigUint,
}

impl IndicatorReport {
    /// Indices of the characters with indicator −1.
    pub fn quaternionic(&self) -> Vec<usize> {
        (0..self.indicators.len())
            .filter(|&i| self.indicators[i] == -1)
            .collect()
    }

    pub fn identity_holds(&self) -> bool {
        self.weighted_sum == BigInt::from(self.square_roots_of_one.clone())
    }
}

/// `ν₂(χ) = (1/|G|) Σ_c |c| χ(c²)` for every irreducible `χ`.
pub fn frobenius_schur(table: &CharacterTable) -> Result<IndicatorReport> {
    let layout = &table.layout;
    let indicators = (0..table.len())
        .map(|i| indicator_of(layout, &table.irreducibles[i], i))
        .collect::<Result<Vec<i8>>>()?;
    let weighted_sum = indicators
        .iter()
        .zip(&table.degrees)
        .map(|(&nu, d)| BigInt::from(nu) * BigInt::from(d.clone()))
        .sum();
    Ok(IndicatorReport {
        indicators,
        degrees: table.degrees.clone(),
        weighted_sum,
        square_roots_of_one: layout.square_roots_of_one(),
    })
}

/// `⟨a, b⟩ = (1/|G|) Σ_c |c| a(c) conj(b(c))`.
pub fn scalar_product(a: &ClassFunction, b: &ClassFunction) -> Result<BigRational> {
    same_layout(&a.layout, &b.layout)?;
    let layout = &a.layout;
    let terms = (0..layout.len()).map(|c| {
        let prod = &a.values[c] * &b.values[c].conj();
        let prod = if prod.conductor() > 1 { prod.reduced() } else { prod };
        (BigInt::from(layout.sizes[c].clone()), prod)
    });
    let sum = rational_sum(terms).ok_or_else(|| Error::Consistency("scalar product is not rational".into()))?;
    Ok(BigRational::new(sum, BigInt::from(layout.group_order.clone())))
}

/// Limits for fusing subgroup classes into the group's classes.
#[derive(Clone, Debug)]
pub struct FusionOptions {
    pub max_subgroup_order: u64,
    pub classes: ClassOptions,
}

impl Default for FusionOptions {
    fn default() -> Self {
        FusionOptions {
            max_subgroup_order: 1_000_000,
            classes: ClassOptions::default(),
        }
    }
}

/// The permutation character `(1_H)^G`, with value `(|G|/|H|)·|c ∩ H|/|c|` on class `c`.
pub fn induced_trivial(
    table: &CharacterTable,
    classes: &ClassTable<'_>,
    subgroup: &PermGroup,
    opts: &FusionOptions,
) -> Result<ClassFunction> {
    if **table.layout() != ClassLayout::from_classes(classes) {
        return Err(Error::TableMismatch);
    }
    let group = classes.group();
    if subgroup.degree() > group.degree() {
        return Err(Error::NotASubgroup(
            "subgroup acts on more points than the group".into(),
        ));
    }
    for g in subgroup.generators() {
        if !group.contains(&g.extended(group.degree())) {
            return Err(Error::NotASubgroup(format!("generator {g} is not in the group")));
        }
    }
    let h_order = subgroup.order();
    if h_order > &BigUint::from(opts.max_subgroup_order) {
        return Err(Error::FusionBudgetExceeded {
            order: h_order.to_string(),
            bound: opts.max_subgroup_order,
        });
    }
    let h_classes = conjugacy_classes(subgroup, &opts.classes)?;
    let layout = table.layout();
    let mut meet = vec![BigUint::zero(); layout.len()];
    for hc in h_classes.classes() {
        let c = classes.class_of_member(&hc.representative.extended(group.degree()))?;
        meet[c] += &hc.size;
    }
    let mut values = Vec::with_capacity(layout.len());
    for (c, m) in meet.iter().enumerate() {
        let num = &layout.group_order * m;
        let den = h_order * &layout.sizes[c];
        let (q, rem) = num.div_rem(&den);
        if !rem.is_zero() {
            return Err(Error::Consistency(format!(
                "induced character is not integral on class {}",
                c + 1
            )));
        }
        values.push(Cyclotomic::from_integer(BigInt::from(q)));
    }
    ClassFunction::new(layout.clone(), values)
}

/// Multiplicity of one irreducible in `σ = ψ − 1_G`; the polytopal
/// characters are those with positive multiplicity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constituent {
    pub index: usize,
    pub degree: BigUint,
    pub multiplicity: BigUint,
    pub indicator: i8,
}

impl Constituent {
    pub fn is_polytopal(&self) -> bool {
        !self.multiplicity.is_zero()
    }
}

/// Every irreducible with its multiplicity in `ψ − 1_G`, in table order.
pub fn polytopal_constituents(table: &CharacterTable, psi: &ClassFunction) -> Result<Vec<Constituent>> {
    same_layout(&table.layout, psi.layout())?;
    let trivial = table.trivial_index();
    let mut out = Vec::new();
    for i in 0..table.len() {
        let m = scalar_product(psi, &table.character(i))?;
        let m = if i == trivial { m - BigRational::one() } else { m };
        if !m.is_integer() || m.is_negative() {
            return Err(Error::Consistency(format!(
                "multiplicity {m} of character {} in ψ − 1 is not a non-negative integer",
                i + 1
            )));
        }
        out.push(Constituent {
            index: i,
            degree: table.degrees[i].clone(),
            multiplicity: m.to_integer().to_biguint().expect("non-negative"),
            indicator: table.indicators[i],
        });
    }
    Ok(out)
}
