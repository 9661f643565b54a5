//! Exact row orthogonality through reduction modulo large primes.
//!
//! Each column `c` is written over `n_c`, the lcm of the conductors of its
//! values. For every `n`, the partial sum `B_n = Σ_{n_c = n} |c| χ(c) conj ψ(c)`
//! is rational when the table is genuine. `B_n` is an element of `Z[ζ_n]`,
//! and a prime `p ≡ 1 (mod n)` splits completely in it, so the embeddings
//! `ζ_n ↦ z^k` identify `Z[ζ_n]/p` with `F_p^φ(n)`. `B_n` is congruent to a
//! rational integer mod `p` exactly when all its embeddings agree. Working
//! modulo several primes whose product exceeds twice a coefficient bound turns
//! the congruences into equalities.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::modular::{add_mod, bigint_mod, biguint_mod, mul_mod, pow_mod, primes_one_mod, root_of_unity};
use super::ClassLayout;
use crate::cyclotomic::{Cyclotomic, MAX_CONDUCTOR};
use crate::error::{Error, Result};

struct Column {
    conductor: u32,
    /// Units mod the conductor; embedding `t` sends `ζ` to `z^units[t]`.
    units: Vec<u32>,
    /// `neg[t]`: the embedding index of `-units[t]`, i.e. of complex conjugation.
    neg: Vec<usize>,
    /// Lifted power-basis coefficients of each character's value.
    coeffs: Vec<Vec<BigInt>>,
}

pub(super) fn check_row_orthogonality(layout: &ClassLayout, rows: &[Vec<Cyclotomic>]) -> Result<()> {
    let r = layout.len();
    let mut columns = Vec::with_capacity(r);
    let mut modulus = 1u64;
    let mut max_norm = BigUint::zero();
    let mut max_reduce = 1u64;
    for c in 0..r {
        let n = rows
            .iter()
            .try_fold(1u32, |acc, row| {
                let m = acc.lcm(&row[c].conductor());
                (m <= MAX_CONDUCTOR).then_some(m)
            })
            .ok_or_else(|| Error::Consistency(format!("values in class {} need too large a field", c + 1)))?;
        modulus = modulus
            .checked_mul(n as u64 / modulus.gcd(&(n as u64)))
            .filter(|&m| m < 1 << 40)
            .ok_or_else(|| Error::Consistency("conductors have too large a common multiple".into()))?;
        max_reduce = max_reduce.max(Cyclotomic::reduction_bound(n));
        let coeffs: Vec<Vec<BigInt>> = rows.iter().map(|row| row[c].lifted_to(n)).collect();
        for v in &coeffs {
            let norm: BigUint = v.iter().map(|x| x.abs().to_biguint().unwrap()).sum();
            if norm > max_norm {
                max_norm = norm;
            }
        }
        let units: Vec<u32> = if n == 1 {
            vec![0]
        } else {
            (1..n).filter(|k| k.gcd(&n) == 1).collect()
        };
        let neg = units
            .iter()
            .map(|&k| units.iter().position(|&u| u == (n - k) % n).unwrap())
            .collect();
        columns.push(Column {
            conductor: n,
            units,
            neg,
            coeffs,
        });
    }
    // |coefficients of B_n| ≤ Σ |c| ‖χ(c)‖₁ ‖ψ(c)‖₁ R; the rational part also absorbs |G|
    let bound = &layout.group_order * &max_norm * &max_norm * BigUint::from(max_reduce) + &layout.group_order;
    let target = bound * 2u32;
    let mut primes = Vec::new();
    let mut product = BigUint::one();
    for p in primes_one_mod(modulus, 1 << 61) {
        primes.push(p);
        product *= p;
        if product > target {
            break;
        }
    }
    for &p in &primes {
        check_modulo(layout, &columns, modulus, p, r)?;
    }
    Ok(())
}

fn check_modulo(layout: &ClassLayout, columns: &[Column], modulus: u64, p: u64, r: usize) -> Result<()> {
    let z = root_of_unity(modulus, p);
    // emb[c][i][t]: image of χ_i(c) under embedding t
    let mut emb: Vec<Vec<Vec<u64>>> = Vec::with_capacity(columns.len());
    for col in columns {
        let n = col.conductor as u64;
        let zc = pow_mod(z, modulus / n, p);
        let powers: Vec<u64> = (0..n).map(|j| pow_mod(zc, j, p)).collect();
        let per_char = col
            .coeffs
            .iter()
            .map(|v| {
                let residues: Vec<u64> = v.iter().map(|x| bigint_mod(x, p)).collect();
                col.units
                    .iter()
                    .map(|&k| {
                        residues.iter().enumerate().fold(0u64, |acc, (a, &x)| {
                            if x == 0 {
                                acc
                            } else {
                                let e = (a as u64 * k as u64) % n;
                                add_mod(acc, mul_mod(x, powers[e as usize], p), p)
                            }
                        })
                    })
                    .collect()
            })
            .collect();
        emb.push(per_char);
    }
    let sizes: Vec<u64> = layout.sizes.iter().map(|s| biguint_mod(s, p)).collect();
    let order = biguint_mod(&layout.group_order, p);
    let mut buckets: Vec<(u32, Vec<usize>)> = Vec::new();
    for (c, col) in columns.iter().enumerate() {
        match buckets.iter_mut().find(|(n, _)| *n == col.conductor) {
            Some((_, v)) => v.push(c),
            None => buckets.push((col.conductor, vec![c])),
        }
    }
    let mut acc = Vec::new();
    for i in 0..r {
        for j in i..r {
            let mut total = 0u64;
            for (_, members) in &buckets {
                let phi = columns[members[0]].units.len();
                acc.clear();
                acc.resize(phi, 0u64);
                for &c in members {
                    let col = &columns[c];
                    let (a, b) = (&emb[c][i], &emb[c][j]);
                    for t in 0..phi {
                        let term = mul_mod(a[t], b[col.neg[t]], p);
                        acc[t] = add_mod(acc[t], mul_mod(sizes[c], term, p), p);
                    }
                }
                if acc.iter().any(|&v| v != acc[0]) {
                    return Err(not_orthogonal(i, j));
                }
                total = add_mod(total, acc[0], p);
            }
            let want = if i == j { order } else { 0 };
            if total != want {
                return Err(not_orthogonal(i, j));
            }
        }
    }
    Ok(())
}

fn not_orthogonal(i: usize, j: usize) -> Error {
    if i == j {
        Error::Consistency(format!("character {} does not have norm 1", i + 1))
    } else {
        Error::Consistency(format!("characters {} and {} are not orthogonal", i + 1, j + 1))
    }
}
