//! Dixon-Schneider: character tables from class multiplication coefficients.
//!
//! The class sums span the centre of the group algebra. Over `F_p` with
//! `p ≡ 1 (mod exponent)` the matrices `M_j[i][k] = a_ijk` are simultaneously
//! diagonalizable, and their common eigenvectors are the central characters
//! `ω_χ(C_k) = |C_k| χ(g_k)/χ(1)`. Degrees follow from the norm of each
//! eigenvector, and the characters are lifted to cyclotomic integers from the
//! eigenvalue multiplicities of their restrictions to cyclic subgroups.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Roots;
use num_traits::ToPrimitive;

use super::modular::{add_mod, biguint_mod, inv_mod, is_prime, mul_mod, poly, pow_mod, root_of_unity, sub_mod};
use super::{CharacterTable, ClassLayout, TableSource};
use crate::conjugacy::ClassTable;
use crate::cyclotomic::{Cyclotomic, MAX_CONDUCTOR};
use crate::error::{Error, Result};
use crate::perm::Permutation;

#[derive(Clone, Debug)]
pub struct DixonOptions {
    /// Largest group order attempted.
    pub max_order: u64,
    /// Which admissible prime to use: 0 is the smallest.
    pub prime_index: usize,
}

impl Default for DixonOptions {
    fn default() -> Self {
        DixonOptions {
            max_order: 200_000,
            prime_index: 0,
        }
    }
}

/// The `index`-th prime `p ≡ 1 (mod exponent)` with `p > 2⌊√|G|⌋ + 1`.
pub fn dixon_prime(order: u64, exponent: u64, index: usize) -> u64 {
    let floor = 2 * order.sqrt() + 1;
    let start = floor / exponent + 1;
    (start..)
        .map(|k| k * exponent + 1)
        .filter(|&p| is_prime(p))
        .nth(index)
        .expect("infinitely many primes in the progression")
}

pub fn dixon_table(classes: &ClassTable<'_>, opts: &DixonOptions) -> Result<CharacterTable> {
    let order = classes
        .group_order()
        .to_u64()
        .filter(|&n| n <= opts.max_order)
        .ok_or_else(|| Error::FeasibilityExceeded {
            order: classes.group_order().to_string(),
            bound: opts.max_order,
        })?;
    let layout = ClassLayout::from_classes(classes);
    let r = layout.len();
    let exponent = layout.exponent();
    if exponent > MAX_CONDUCTOR as u64 {
        return Err(Error::FeasibilityExceeded {
            order: order.to_string(),
            bound: opts.max_order,
        });
    }
    let p = dixon_prime(order, exponent, opts.prime_index);
    let lookup = classes.element_classes();
    let reps: Vec<&Permutation> = classes.classes().iter().map(|c| &c.representative).collect();
    let mut members: Vec<Vec<&Permutation>> = vec![Vec::new(); r];
    for (x, &c) in lookup.iter() {
        members[c].push(x);
    }
    let sizes: Vec<u64> = layout.sizes.iter().map(|s| biguint_mod(s, p)).collect();

    // M_j[i][k] = #{y ∈ C_j : g_k y⁻¹ ∈ C_i}
    let class_matrix = |j: usize| -> Vec<Vec<u64>> {
        let mut m = vec![vec![0u64; r]; r];
        for y in &members[j] {
            let yi = y.inverse();
            for (k, g) in reps.iter().enumerate() {
                let i = lookup[&g.compose(&yi)];
                m[i][k] += 1;
            }
        }
        for row in m.iter_mut() {
            for v in row.iter_mut() {
                *v %= p;
            }
        }
        m
    };

    // split F_p^r into common eigenspaces, smallest classes first
    let mut spaces: Vec<Vec<Vec<u64>>> = vec![identity_basis(r)];
    let mut order_of_use: Vec<usize> = (1..r).collect();
    order_of_use.sort_by_key(|&j| (layout.sizes[j].clone(), j));
    for j in order_of_use {
        if spaces.iter().all(|s| s.len() == 1) {
            break;
        }
        let m = class_matrix(j);
        let mut next = Vec::with_capacity(spaces.len());
        for space in spaces {
            if space.len() == 1 {
                next.push(space);
                continue;
            }
            next.extend(split(&m, space, p)?);
        }
        spaces = next;
    }
    if spaces.iter().any(|s| s.len() != 1) {
        return Err(Error::Consistency(
            "class matrices did not separate the characters".into(),
        ));
    }

    let inverse: Vec<usize> = reps.iter().map(|g| lookup[&g.inverse()]).collect();
    let z = root_of_unity(exponent, p);
    let order_mod = order % p;
    let mut rows = Vec::with_capacity(r);
    for space in &spaces {
        let w = &space[0];
        if w[0] != 1 {
            return Err(Error::Consistency(
                "central character does not start at the identity".into(),
            ));
        }
        // |G| / χ(1)² = Σ_k ω_k ω_k' / |C_k|
        let norm = (0..r).fold(0u64, |acc, k| {
            let t = mul_mod(mul_mod(w[k], w[inverse[k]], p), inv_mod(sizes[k], p), p);
            add_mod(acc, t, p)
        });
        if norm == 0 {
            return Err(Error::Consistency("degenerate central character".into()));
        }
        let d2 = mul_mod(order_mod, inv_mod(norm, p), p);
        let degree = (1..=order.sqrt())
            .find(|&d| mul_mod(d, d, p) == d2)
            .ok_or_else(|| Error::Consistency("no integral degree fits a central character".into()))?;
        let values: Vec<u64> = (0..r)
            .map(|k| mul_mod(mul_mod(degree % p, w[k], p), inv_mod(sizes[k], p), p))
            .collect();
        let mut row = Vec::with_capacity(r);
        for (k, g) in reps.iter().enumerate() {
            let o = layout.element_orders[k];
            let zo = pow_mod(z, exponent / o, p);
            let zo_inv = inv_mod(zo, p);
            let mut powers = Vec::with_capacity(o as usize);
            let mut x = Permutation::identity(g.degree());
            for _ in 0..o {
                powers.push(values[lookup[&x]]);
                x = x.compose(g);
            }
            // multiplicity of ζ_o^a as an eigenvalue: (1/o) Σ_t χ(g^t) ζ_o^(-a t)
            let o_inv = inv_mod(o % p, p);
            let mut terms = BTreeMap::new();
            let mut total = 0u64;
            for a in 0..o {
                let step = pow_mod(zo_inv, a, p);
                let mut s = 0u64;
                let mut f = 1u64;
                for &v in &powers {
                    s = add_mod(s, mul_mod(v, f, p), p);
                    f = mul_mod(f, step, p);
                }
                let mult = mul_mod(s, o_inv, p);
                if mult > degree {
                    return Err(Error::Consistency("eigenvalue multiplicity exceeds the degree".into()));
                }
                total += mult;
                if mult > 0 {
                    terms.insert(a as u32, BigInt::from(mult));
                }
            }
            if total != degree {
                return Err(Error::Consistency("eigenvalue multiplicities do not add up".into()));
            }
            row.push(Cyclotomic::from_exponents(o as u32, &terms).reduced());
        }
        rows.push(row);
    }
    sort_rows(&mut rows);
    CharacterTable::new(layout, rows, TableSource::Computed)
}

/// Canonical order: by degree, trivial character first, then by printed values.
pub(crate) fn sort_rows(rows: &mut [Vec<Cyclotomic>]) {
    let one = Cyclotomic::one();
    let mut keyed: Vec<(BigInt, bool, Vec<String>, Vec<Cyclotomic>)> = rows
        .iter()
        .map(|row| {
            let d = row[0].to_integer().unwrap_or_default();
            let nontrivial = !row.iter().all(|v| v == &one);
            (d, nontrivial, row.iter().map(|v| v.to_string()).collect(), row.clone())
        })
        .collect();
    keyed.sort_by(|a, b| (&a.0, a.1, &a.2).cmp(&(&b.0, b.1, &b.2)));
    for (slot, k) in rows.iter_mut().zip(keyed) {
        *slot = k.3;
    }
}

fn identity_basis(r: usize) -> Vec<Vec<u64>> {
    (0..r)
        .map(|i| {
            let mut v = vec![0u64; r];
            v[i] = 1;
            v
        })
        .collect()
}

/// Splits an invariant subspace (row-reduced basis) into eigenspaces of `m`.
fn split(m: &[Vec<u64>], basis: Vec<Vec<u64>>, p: u64) -> Result<Vec<Vec<Vec<u64>>>> {
    let d = basis.len();
    let r = m.len();
    let pivots: Vec<usize> = basis
        .iter()
        .map(|v| v.iter().position(|&x| x != 0).expect("nonzero basis vector"))
        .collect();
    // restriction: column t holds the coordinates of M·b_t
    let mut restricted = vec![vec![0u64; d]; d];
    for (t, b) in basis.iter().enumerate() {
        let image: Vec<u64> = (0..r)
            .map(|i| (0..r).fold(0u64, |acc, k| add_mod(acc, mul_mod(m[i][k], b[k], p), p)))
            .collect();
        for (s, &piv) in pivots.iter().enumerate() {
            restricted[s][t] = image[piv];
        }
    }
    let charpoly = characteristic_polynomial(&restricted, p);
    let roots = poly::roots(&charpoly, p);
    let mut out = Vec::with_capacity(roots.len());
    let mut dims = 0;
    for lambda in roots {
        let mut a = restricted.clone();
        for (s, row) in a.iter_mut().enumerate() {
            row[s] = sub_mod(row[s], lambda, p);
        }
        let kernel = nullspace(a, p);
        dims += kernel.len();
        let vectors: Vec<Vec<u64>> = kernel
            .iter()
            .map(|c| {
                (0..r)
                    .map(|k| (0..d).fold(0u64, |acc, t| add_mod(acc, mul_mod(c[t], basis[t][k], p), p)))
                    .collect()
            })
            .collect();
        out.push(row_reduce(vectors, p));
    }
    if dims != d {
        return Err(Error::Consistency("class matrix is not diagonalizable mod p".into()));
    }
    Ok(out)
}

/// Characteristic polynomial via reduction to upper Hessenberg form.
fn characteristic_polynomial(a: &[Vec<u64>], p: u64) -> Vec<u64> {
    let n = a.len();
    let mut h: Vec<Vec<u64>> = a.to_vec();
    for col in 0..n.saturating_sub(2) {
        let Some(piv) = (col + 1..n).find(|&i| h[i][col] != 0) else {
            continue;
        };
        if piv != col + 1 {
            h.swap(piv, col + 1);
            for row in h.iter_mut() {
                row.swap(piv, col + 1);
            }
        }
        let inv = inv_mod(h[col + 1][col], p);
        for i in col + 2..n {
            let f = mul_mod(h[i][col], inv, p);
            if f == 0 {
                continue;
            }
            for k in 0..n {
                let t = mul_mod(f, h[col + 1][k], p);
                h[i][k] = sub_mod(h[i][k], t, p);
            }
            // similarity: add f·column i to column col+1
            for row in h.iter_mut() {
                let t = mul_mod(f, row[i], p);
                row[col + 1] = add_mod(row[col + 1], t, p);
            }
        }
    }
    // p_k(x) = (x - h_kk) p_{k-1} - Σ_{i<k} h_ik (∏_{i<m≤k} h_{m,m-1}) p_{i-1}
    let mut ps: Vec<Vec<u64>> = vec![vec![1]];
    for k in 0..n {
        let mut next = vec![0u64; k + 2];
        for (i, &c) in ps[k].iter().enumerate() {
            next[i + 1] = add_mod(next[i + 1], c, p);
            next[i] = sub_mod(next[i], mul_mod(h[k][k], c, p), p);
        }
        let mut prod = 1u64;
        for i in (0..k).rev() {
            prod = mul_mod(prod, h[i + 1][i], p);
            let coef = mul_mod(h[i][k], prod, p);
            if coef == 0 {
                continue;
            }
            for (e, &c) in ps[i].iter().enumerate() {
                next[e] = sub_mod(next[e], mul_mod(coef, c, p), p);
            }
        }
        ps.push(next);
    }
    ps.pop().unwrap()
}

/// Basis of `{c : A c = 0}`.
fn nullspace(mut a: Vec<Vec<u64>>, p: u64) -> Vec<Vec<u64>> {
    let n = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut pivot_cols = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(pr) = (row..n).find(|&i| a[i][col] != 0) else {
            continue;
        };
        a.swap(row, pr);
        let inv = inv_mod(a[row][col], p);
        for v in a[row].iter_mut() {
            *v = mul_mod(*v, inv, p);
        }
        for i in 0..n {
            if i != row && a[i][col] != 0 {
                let f = a[i][col];
                for k in 0..cols {
                    let t = mul_mod(f, a[row][k], p);
                    a[i][k] = sub_mod(a[i][k], t, p);
                }
            }
        }
        pivot_cols.push(col);
        row += 1;
        if row == n {
            break;
        }
    }
    let mut out = Vec::new();
    for free in (0..cols).filter(|c| !pivot_cols.contains(c)) {
        let mut v = vec![0u64; cols];
        v[free] = 1;
        for (i, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = sub_mod(0, a[i][free], p);
        }
        out.push(v);
    }
    out
}

/// Reduced row echelon form, leading entries 1.
fn row_reduce(mut rows: Vec<Vec<u64>>, p: u64) -> Vec<Vec<u64>> {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..cols {
        let Some(pr) = (rank..rows.len()).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(rank, pr);
        let inv = inv_mod(rows[rank][col], p);
        for v in rows[rank].iter_mut() {
            *v = mul_mod(*v, inv, p);
        }
        for i in 0..rows.len() {
            if i != rank && rows[i][col] != 0 {
                let f = rows[i][col];
                for k in 0..cols {
                    let t = mul_mod(f, rows[rank][k], p);
                    rows[i][k] = sub_mod(rows[i][k], t, p);
                }
            }
        }
        rank += 1;
    }
    rows.truncate(rank);
    rows
}
