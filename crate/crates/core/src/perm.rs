//! Permutations of `{1..n}` stored as 0-based image vectors.
//!
//! Composition is left-to-right: `a.compose(&b)` first applies `a`, then `b`.
//! Permutations of different degrees compare and compose as if the shorter one
//! were extended by fixed points.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use num_bigint::BigUint;
use num_integer::Integer;

use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree as u32).collect(),
        }
    }

    /// Builds a permutation from 0-based images, checking bijectivity.
    pub fn from_images(images: Vec<u32>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &im in &images {
            let im = im as usize;
            if im >= n || seen[im] {
                return Err(Error::NotAPermutation(format!(
                    "image {} repeated or out of range for degree {}",
                    im + 1,
                    n
                )));
            }
            seen[im] = true;
        }
        Ok(Permutation { images })
    }

    /// Builds a permutation from 1-based images.
    pub fn from_one_based(images: &[u64]) -> Result<Self> {
        let mut zero = Vec::with_capacity(images.len());
        for &im in images {
            if im == 0 || im > u32::MAX as u64 {
                return Err(Error::NotAPermutation(format!("image {im} out of range")));
            }
            zero.push((im - 1) as u32);
        }
        Self::from_images(zero)
    }

    /// Builds a permutation of the given degree from disjoint cycles of 1-based points.
    /// The degree grows to fit the largest point mentioned.
    pub fn from_cycles(degree: usize, cycles: &[Vec<u32>]) -> Result<Self> {
        let max = cycles.iter().flatten().copied().max().unwrap_or(0) as usize;
        let n = degree.max(max);
        let mut images: Vec<u32> = (0..n as u32).collect();
        let mut touched = vec![false; n];
        for cycle in cycles {
            for (k, &pt) in cycle.iter().enumerate() {
                if pt == 0 {
                    return Err(Error::NotAPermutation("point 0 in cycle".into()));
                }
                let p = (pt - 1) as usize;
                if touched[p] {
                    return Err(Error::NotAPermutation(format!(
                        "point {pt} appears twice in cycle notation"
                    )));
                }
                touched[p] = true;
                images[p] = cycle[(k + 1) % cycle.len()] - 1;
            }
        }
        Ok(Permutation { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    /// Image of a 0-based point; points beyond the degree are fixed.
    #[inline]
    pub fn apply(&self, point: u32) -> u32 {
        match self.images.get(point as usize) {
            Some(&im) => im,
            None => point,
        }
    }

    /// Returns a copy with degree at least `degree`.
    pub fn extended(&self, degree: usize) -> Permutation {
        let mut p = self.clone();
        p.extend_to(degree);
        p
    }

    pub fn extend_to(&mut self, degree: usize) {
        let n = self.images.len();
        if degree > n {
            self.images.extend(n as u32..degree as u32);
        }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &im)| i as u32 == im)
    }

    /// `self` then `other`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        let n = self.degree().max(other.degree());
        let images = (0..n as u32).map(|i| other.apply(self.apply(i))).collect();
        Permutation { images }
    }

    /// Same as [`compose`](Self::compose) but writes into `out`, which must have the common degree.
    pub(crate) fn compose_into(&self, other: &Permutation, out: &mut Permutation) {
        debug_assert_eq!(self.degree(), other.degree());
        out.images.clear();
        out.images.extend(self.images.iter().map(|&i| other.images[i as usize]));
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0u32; self.degree()];
        for (i, &im) in self.images.iter().enumerate() {
            images[im as usize] = i as u32;
        }
        Permutation { images }
    }

    /// `g⁻¹ · self · g`, the conjugate `self^g`.
    pub fn conjugate_by(&self, g: &Permutation) -> Permutation {
        let n = self.degree().max(g.degree());
        let mut images = vec![0u32; n];
        // self^g maps g(x) to g(self(x))
        for x in 0..n as u32 {
            images[g.apply(x) as usize] = g.apply(self.apply(x));
        }
        Permutation { images }
    }

    pub fn pow(&self, exp: i64) -> Permutation {
        let n = self.degree();
        let mut images = vec![0u32; n];
        let mut done = vec![false; n];
        let mut cycle = Vec::new();
        for start in 0..n {
            if done[start] {
                continue;
            }
            cycle.clear();
            let mut p = start as u32;
            loop {
                cycle.push(p);
                done[p as usize] = true;
                p = self.images[p as usize];
                if p as usize == start {
                    break;
                }
            }
            let len = cycle.len() as i64;
            let shift = exp.rem_euclid(len) as usize;
            for (k, &pt) in cycle.iter().enumerate() {
                images[pt as usize] = cycle[(k + shift) % cycle.len()];
            }
        }
        Permutation { images }
    }

    /// Disjoint cycles of length at least two, as 0-based points, each starting at its least point.
    pub fn cycles(&self) -> Vec<Vec<u32>> {
        let n = self.degree();
        let mut done = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if done[start] || self.images[start] as usize == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut p = start as u32;
            while !done[p as usize] {
                done[p as usize] = true;
                cycle.push(p);
                p = self.images[p as usize];
            }
            out.push(cycle);
        }
        out
    }

    /// Cycle lengths (including fixed points as 1-cycles), sorted ascending.
    pub fn cycle_type(&self) -> Vec<u32> {
        let n = self.degree();
        let mut done = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if done[start] {
                continue;
            }
            let mut len = 0;
            let mut p = start;
            while !done[p] {
                done[p] = true;
                len += 1;
                p = self.images[p] as usize;
            }
            out.push(len);
        }
        out.sort_unstable();
        out
    }

    /// Element order as an exact integer: the lcm of the cycle lengths.
    pub fn order(&self) -> BigUint {
        let mut lens = self.cycle_type();
        lens.dedup();
        lens.into_iter()
            .fold(BigUint::from(1u32), |acc, l| acc.lcm(&BigUint::from(l)))
    }

    /// Element order if it fits in a `u64`.
    pub fn order_u64(&self) -> Option<u64> {
        let mut lens = self.cycle_type();
        lens.dedup();
        let mut acc: u64 = 1;
        for l in lens {
            let l = l as u64;
            acc = (acc / acc.gcd(&l)).checked_mul(l)?;
        }
        Some(acc)
    }

    /// Largest moved point plus one; 0 for the identity.
    pub fn largest_moved_point(&self) -> usize {
        self.images
            .iter()
            .enumerate()
            .rev()
            .find(|(i, &im)| *i as u32 != im)
            .map(|(i, _)| i + 1)
            .unwrap_or(0)
    }

    fn trimmed(&self) -> &[u32] {
        &self.images[..self.largest_moved_point()]
    }
}

impl PartialEq for Permutation {
    fn eq(&self, other: &Self) -> bool {
        self.trimmed() == other.trimmed()
    }
}

impl Eq for Permutation {}

impl Hash for Permutation {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.trimmed().hash(state);
    }
}

impl PartialOrd for Permutation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic order of image sequences after extending to a common degree.
impl Ord for Permutation {
    fn cmp(&self, other: &Self) -> Ordering {
        let n = self.degree().max(other.degree());
        (0..n as u32)
            .map(|i| self.apply(i).cmp(&other.apply(i)))
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal)
    }
}

/// Disjoint cycle notation with 1-based points, `()` for the identity.
impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for cycle in cycles {
            f.write_str("(")?;
            for (k, p) in cycle.iter().enumerate() {
                if k > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{}", p + 1)?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}
