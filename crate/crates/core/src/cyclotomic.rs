//! Exact arithmetic in cyclotomic fields.
//!
//! A value of conductor `n` is stored in the power basis `1, ζ, …, ζ^(φ(n)-1)`
//! of `Z[ζ_n]`, i.e. as a polynomial in `ζ_n = e^(2πi/n)` reduced modulo the
//! cyclotomic polynomial `Φ_n`. Values with only a constant term are stored
//! with conductor 1. Values of different conductors are compared and combined
//! in the field of the least common multiple.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Largest conductor we are willing to build reduction tables for.
pub const MAX_CONDUCTOR: u32 = 4096;

struct FieldData {
    phi: usize,
    /// `reduce[j]` holds `x^j mod Φ_n` for `j < n`.
    reduce: Vec<Vec<i64>>,
}

fn field(n: u32) -> Arc<FieldData> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<FieldData>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(f) = cache.lock().unwrap().get(&n) {
        return f.clone();
    }
    let data = Arc::new(build_field(n));
    cache.lock().unwrap().insert(n, data.clone());
    data
}

fn mobius(mut n: u32) -> i32 {
    let mut sign = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// Coefficients of Φ_n, lowest degree first, as `∏_{d|n} (x^d - 1)^μ(n/d)`.
fn cyclotomic_polynomial(n: u32) -> Vec<i64> {
    let divisors: Vec<u32> = (1..=n).filter(|d| n % d == 0).collect();
    let mut poly = vec![1i64];
    for &d in &divisors {
        if mobius(n / d) == 1 {
            let mut next = vec![0i64; poly.len() + d as usize];
            for (i, &c) in poly.iter().enumerate() {
                next[i] -= c;
                next[i + d as usize] += c;
            }
            poly = next;
        }
    }
    for &d in &divisors {
        if mobius(n / d) == -1 {
            // divide by x^d - 1: q_i = q_{i-d} - p_i, from the low end
            let d = d as usize;
            let mut quot = vec![0i64; poly.len() - d];
            for i in 0..quot.len() {
                let prev = if i >= d { quot[i - d] } else { 0 };
                quot[i] = prev - poly[i];
            }
            poly = quot;
        }
    }
    poly
}

fn build_field(n: u32) -> FieldData {
    let phi_poly = cyclotomic_polynomial(n);
    let phi = phi_poly.len() - 1;
    let mut reduce = Vec::with_capacity(n as usize);
    let mut cur = vec![0i64; phi];
    cur[0] = 1;
    for _ in 0..n {
        reduce.push(cur.clone());
        // multiply by x, then replace x^phi by -(Φ_n - x^phi)
        let top = cur[phi - 1];
        for k in (1..phi).rev() {
            cur[k] = cur[k - 1];
        }
        cur[0] = 0;
        if top != 0 {
            for k in 0..phi {
                cur[k] -= top * phi_poly[k];
            }
        }
    }
    FieldData { phi, reduce }
}

#[derive(Clone)]
pub struct Cyclotomic {
    conductor: u32,
    coeffs: Vec<BigInt>,
}

impl Cyclotomic {
    pub fn zero() -> Self {
        Self::from_integer(BigInt::zero())
    }

    pub fn one() -> Self {
        Self::from_integer(BigInt::one())
    }

    pub fn from_integer(v: impl Into<BigInt>) -> Self {
        Cyclotomic {
            conductor: 1,
            coeffs: vec![v.into()],
        }
    }

    /// `ζ_n^k`.
    pub fn root_of_unity(n: u32, k: i64) -> Self {
        let mut map = BTreeMap::new();
        map.insert(k.rem_euclid(n as i64) as u32, BigInt::one());
        Self::from_exponents(n, &map)
    }

    /// `Σ c_k ζ_n^k` for arbitrary exponents `k`, reduced into the power basis.
    pub fn from_exponents(n: u32, terms: &BTreeMap<u32, BigInt>) -> Self {
        assert!(n >= 1 && n <= MAX_CONDUCTOR, "conductor {n} out of range");
        let f = field(n);
        let mut coeffs = vec![BigInt::zero(); f.phi];
        for (&k, c) in terms {
            if c.is_zero() {
                continue;
            }
            for (slot, &r) in coeffs.iter_mut().zip(&f.reduce[(k % n) as usize]) {
                if r != 0 {
                    *slot += c * r;
                }
            }
        }
        Cyclotomic { conductor: n, coeffs }.normalized()
    }

    fn normalized(mut self) -> Self {
        if self.conductor != 1 && self.coeffs[1..].iter().all(|c| c.is_zero()) {
            self.coeffs.truncate(1);
            self.conductor = 1;
        }
        self
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    /// Power-basis coefficients for the stored conductor.
    pub fn coefficients(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Nonzero power-basis coefficients as `exponent → coefficient`.
    pub fn terms(&self) -> BTreeMap<u32, BigInt> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (k as u32, c.clone()))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.conductor == 1 && self.coeffs[0].is_zero()
    }

    /// The value as an integer, if it is one.
    pub fn to_integer(&self) -> Option<BigInt> {
        (self.conductor == 1).then(|| self.coeffs[0].clone())
    }

    /// Power-basis coefficients over conductor `m`, a multiple of the current one.
    pub(crate) fn lifted_to(&self, m: u32) -> Vec<BigInt> {
        self.lifted(m)
    }

    /// Largest absolute coefficient of `ζ_n^j` in the power basis, over all `j`.
    pub(crate) fn reduction_bound(n: u32) -> u64 {
        field(n)
            .reduce
            .iter()
            .flatten()
            .map(|c| c.unsigned_abs())
            .max()
            .unwrap_or(1)
    }

    fn lifted(&self, m: u32) -> Vec<BigInt> {
        if m == self.conductor {
            return self.coeffs.clone();
        }
        debug_assert_eq!(m % self.conductor, 0);
        let step = m / self.conductor;
        let f = field(m);
        let mut out = vec![BigInt::zero(); f.phi];
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = (k as u32 * step) % m;
            for (slot, &r) in out.iter_mut().zip(&f.reduce[e as usize]) {
                if r != 0 {
                    *slot += c * r;
                }
            }
        }
        out
    }

    fn common(&self, other: &Self) -> (u32, Vec<BigInt>, Vec<BigInt>) {
        let m = self.conductor.lcm(&other.conductor);
        assert!(m <= MAX_CONDUCTOR, "conductor {m} out of range");
        (m, self.lifted(m), other.lifted(m))
    }

    /// Image under the Galois automorphism `ζ ↦ ζ^j` (`j` coprime to the conductor).
    pub fn galois(&self, j: i64) -> Self {
        if self.conductor == 1 {
            return self.clone();
        }
        let n = self.conductor;
        let mut map: BTreeMap<u32, BigInt> = BTreeMap::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                let e = (k as i64 * j).rem_euclid(n as i64) as u32;
                *map.entry(e).or_insert_with(BigInt::zero) += c;
            }
        }
        Self::from_exponents(n, &map)
    }

    /// Complex conjugate.
    pub fn conj(&self) -> Self {
        self.galois(-1)
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Cyclotomic {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
        .normalized()
    }

    /// Divides every coefficient by `k`, returning `None` if that is not exact.
    pub fn div_exact(&self, k: &BigInt) -> Option<Self> {
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            let (q, r) = c.div_rem(k);
            if !r.is_zero() {
                return None;
            }
            coeffs.push(q);
        }
        Some(Cyclotomic {
            conductor: self.conductor,
            coeffs,
        })
    }
}

impl Cyclotomic {
    /// The same value written over the smallest possible conductor.
    pub fn reduced(&self) -> Cyclotomic {
        let mut x = self.clone();
        'outer: loop {
            let n = x.conductor;
            if n == 1 {
                return x;
            }
            for p in prime_factors(n) {
                let m = n / p;
                if x.in_subfield(m) {
                    x = x.descend(m);
                    continue 'outer;
                }
            }
            return x;
        }
    }

    /// Whether the value is fixed by every `ζ ↦ ζ^k` with `k ≡ 1 (mod m)`.
    fn in_subfield(&self, m: u32) -> bool {
        let n = self.conductor;
        (1..n)
            .step_by(m as usize)
            .skip(1)
            .filter(|k| k.gcd(&n) == 1)
            .all(|k| &self.galois(k as i64) == self)
    }

    /// Rewrites a value known to lie in `Q(ζ_m)` over conductor `m` by solving
    /// the lifting equations.
    fn descend(&self, m: u32) -> Cyclotomic {
        let n = self.conductor;
        let step = (n / m) as usize;
        let fm = field(m);
        let fnn = field(n);
        let rows = fnn.phi;
        let cols = fm.phi;
        let mut a: Vec<Vec<BigRational>> = (0..rows)
            .map(|r| {
                let mut row: Vec<BigRational> = (0..cols)
                    .map(|t| BigRational::from_integer(BigInt::from(fnn.reduce[(t * step) % n as usize][r])))
                    .collect();
                row.push(BigRational::from_integer(self.coeffs[r].clone()));
                row
            })
            .collect();
        let mut pivots = Vec::with_capacity(cols);
        let mut r0 = 0;
        for c in 0..cols {
            let Some(pr) = (r0..rows).find(|&r| !a[r][c].is_zero()) else {
                continue;
            };
            a.swap(r0, pr);
            let inv = a[r0][c].recip();
            for v in a[r0].iter_mut() {
                *v = &*v * &inv;
            }
            for r in 0..rows {
                if r != r0 && !a[r][c].is_zero() {
                    let f = a[r][c].clone();
                    for k in 0..=cols {
                        let t = &a[r0][k] * &f;
                        a[r][k] -= t;
                    }
                }
            }
            pivots.push(c);
            r0 += 1;
        }
        debug_assert_eq!(pivots.len(), cols, "lifting map is injective");
        let mut coeffs = vec![BigInt::zero(); cols];
        for (r, &c) in pivots.iter().enumerate() {
            debug_assert!(a[r][cols].is_integer());
            coeffs[c] = a[r][cols].to_integer();
        }
        Cyclotomic { conductor: m, coeffs }.normalized()
    }
}

fn prime_factors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        if self.conductor == other.conductor {
            return self.coeffs == other.coeffs;
        }
        let (_, a, b) = self.common(other);
        a == b
    }
}

impl Eq for Cyclotomic {}

impl Add for &Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &Cyclotomic) -> Cyclotomic {
        if self.conductor == 1 && rhs.conductor == 1 {
            return Cyclotomic::from_integer(&self.coeffs[0] + &rhs.coeffs[0]);
        }
        let (m, a, b) = self.common(rhs);
        Cyclotomic {
            conductor: m,
            coeffs: a.into_iter().zip(b).map(|(x, y)| x + y).collect(),
        }
        .normalized()
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Sub for &Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &Cyclotomic) -> Cyclotomic {
        self + &(-rhs)
    }
}

impl Mul for &Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        if self.conductor == 1 {
            return rhs.scale(&self.coeffs[0]);
        }
        if rhs.conductor == 1 {
            return self.scale(&rhs.coeffs[0]);
        }
        let (m, a, b) = self.common(rhs);
        let f = field(m);
        let mut acc = vec![BigInt::zero(); m as usize];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    acc[(i + j) % m as usize] += x * y;
                }
            }
        }
        let mut coeffs = vec![BigInt::zero(); f.phi];
        for (e, c) in acc.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (slot, &r) in coeffs.iter_mut().zip(&f.reduce[e]) {
                if r != 0 {
                    *slot += c * r;
                }
            }
        }
        Cyclotomic { conductor: m, coeffs }.normalized()
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for Cyclotomic {
            type Output = Cyclotomic;
            fn $method(self, rhs: Cyclotomic) -> Cyclotomic {
                (&self).$method(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl From<i64> for Cyclotomic {
    fn from(v: i64) -> Self {
        Cyclotomic::from_integer(v)
    }
}

/// GAP-like notation: `E(n)^k` terms, e.g. `-1-E(5)^2-E(5)^3`.
impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(v) = self.to_integer() {
            return write!(f, "{v}");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() {
                "-"
            } else if first {
                ""
            } else {
                "+"
            };
            let mag = c.abs();
            let root = match k {
                0 => String::new(),
                1 => format!("E({})", self.conductor),
                _ => format!("E({})^{}", self.conductor, k),
            };
            match (k, mag.is_one()) {
                (0, _) => write!(f, "{sign}{mag}")?,
                (_, true) => write!(f, "{sign}{root}")?,
                (_, false) => write!(f, "{sign}{mag}*{root}")?,
            }
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Cyclotomic {
    /// Small-integer view of the coefficients, used by the serializer.
    pub(crate) fn small_terms(&self) -> Option<BTreeMap<u32, i64>> {
        self.terms()
            .into_iter()
            .map(|(k, c)| c.to_i64().map(|c| (k, c)))
            .collect()
    }
}
