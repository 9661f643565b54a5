//! Arithmetic in prime fields `F_p` with `p < 2^63`.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::ToPrimitive;

pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 + b as u128) % p as u128) as u64
}

pub(crate) fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    add_mod(a, p - b % p, p)
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(a % p != 0);
    pow_mod(a, p - 2, p)
}

pub(crate) fn bigint_mod(v: &BigInt, p: u64) -> u64 {
    v.mod_floor(&BigInt::from(p)).to_u64().expect("residue below p")
}

pub(crate) fn biguint_mod(v: &BigUint, p: u64) -> u64 {
    (v % p).to_u64().expect("residue below p")
}

/// Deterministic Miller-Rabin for 64-bit inputs.
pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &w in &WITNESSES {
        if n % w == 0 {
            return n == w;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut q = 2;
    while q * q <= n {
        if n % q == 0 {
            out.push(q);
            while n % q == 0 {
                n /= q;
            }
        }
        q += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Primes `p ≡ 1 (mod m)` with `p > above`, in increasing order.
pub(crate) fn primes_one_mod(m: u64, above: u64) -> impl Iterator<Item = u64> {
    let start = above / m + 1;
    (start..)
        .map_while(move |k| k.checked_mul(m).and_then(|v| v.checked_add(1)))
        .filter(|&p| p < 1 << 62 && is_prime(p))
}

/// An element of multiplicative order exactly `m` in `F_p`, where `m | p - 1`.
pub(crate) fn root_of_unity(m: u64, p: u64) -> u64 {
    debug_assert_eq!((p - 1) % m, 0);
    let factors = prime_factors(m);
    (2..p)
        .map(|a| pow_mod(a, (p - 1) / m, p))
        .find(|&z| factors.iter().all(|&q| pow_mod(z, m / q, p) != 1))
        .expect("F_p* is cyclic")
}

/// Polynomials over `F_p`, lowest degree first, without trailing zeros.
pub(crate) mod poly {
    use super::*;

    pub(crate) fn trim(mut a: Vec<u64>) -> Vec<u64> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub(crate) fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let n = a.len().max(b.len());
        let out = (0..n)
            .map(|i| sub_mod(a.get(i).copied().unwrap_or(0), b.get(i).copied().unwrap_or(0), p))
            .collect();
        trim(out)
    }

    pub(crate) fn rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut r = trim(a.to_vec());
        let db = b.len() - 1;
        let lead_inv = inv_mod(b[db], p);
        while r.len() > db {
            let shift = r.len() - 1 - db;
            let c = mul_mod(*r.last().unwrap(), lead_inv, p);
            for (i, &bc) in b.iter().enumerate() {
                r[shift + i] = sub_mod(r[shift + i], mul_mod(c, bc, p), p);
            }
            r = trim(r);
        }
        r
    }

    pub(crate) fn mul_rem(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = add_mod(out[i + j], mul_mod(x, y, p), p);
            }
        }
        rem(&out, m, p)
    }

    pub(crate) fn pow_rem(base: &[u64], mut exp: u64, m: &[u64], p: u64) -> Vec<u64> {
        let mut acc = rem(&[1], m, p);
        let mut b = rem(base, m, p);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = mul_rem(&acc, &b, m, p);
            }
            b = mul_rem(&b, &b, m, p);
            exp >>= 1;
        }
        acc
    }

    pub(crate) fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut a = trim(a.to_vec());
        let mut b = trim(b.to_vec());
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        if let Some(&lead) = a.last() {
            let inv = inv_mod(lead, p);
            for c in a.iter_mut() {
                *c = mul_mod(*c, inv, p);
            }
        }
        a
    }

    #[cfg(test)]
    pub(crate) fn eval(a: &[u64], x: u64, p: u64) -> u64 {
        a.iter().rev().fold(0, |acc, &c| add_mod(mul_mod(acc, x, p), c, p))
    }

    /// Distinct roots of `f` in `F_p` (odd `p`), by equal-degree splitting.
    pub(crate) fn roots(f: &[u64], p: u64) -> Vec<u64> {
        let f = trim(f.to_vec());
        if f.len() <= 1 {
            return Vec::new();
        }
        // product of the distinct linear factors: gcd(f, x^p - x)
        let xp = pow_rem(&[0, 1], p, &f, p);
        let g = gcd(&f, &sub(&xp, &[0, 1], p), p);
        let mut out = Vec::new();
        let mut stack = vec![g];
        let mut shift = 0u64;
        while let Some(h) = stack.pop() {
            match h.len() {
                0 | 1 => {}
                2 => out.push(sub_mod(0, mul_mod(h[0], inv_mod(h[1], p), p), p)),
                _ => loop {
                    shift += 1;
                    let t = pow_rem(&[shift % p, 1], (p - 1) / 2, &h, p);
                    let d = gcd(&h, &sub(&t, &[1], p), p);
                    if d.len() > 1 && d.len() < h.len() {
                        let (q, r) = div(&h, &d, p);
                        debug_assert!(r.is_empty());
                        stack.push(d);
                        stack.push(q);
                        break;
                    }
                },
            }
        }
        out.sort_unstable();
        out
    }

    pub(crate) fn div(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
        let mut r = trim(a.to_vec());
        let db = b.len() - 1;
        if r.len() <= db {
            return (Vec::new(), r);
        }
        let mut q = vec![0u64; r.len() - db];
        let lead_inv = inv_mod(b[db], p);
        while r.len() > db {
            let shift = r.len() - 1 - db;
            let c = mul_mod(*r.last().unwrap(), lead_inv, p);
            q[shift] = c;
            for (i, &bc) in b.iter().enumerate() {
                r[shift + i] = sub_mod(r[shift + i], mul_mod(c, bc, p), p);
            }
            r = trim(r);
        }
        (trim(q), r)
    }
}
