//! Stabilizer chains (base and strong generating set).
//!
//! Construction is randomized Schreier–Sims followed by a deterministic pass
//! that sifts every Schreier generator; a chain is only handed out after that
//! pass, or after its order reached a known upper bound.

use num_bigint::BigUint;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::perm::Permutation;

const NOT_IN_ORBIT: u32 = u32::MAX;

#[derive(Clone, Debug)]
pub(crate) struct Level {
    pub base_point: u32,
    /// Strong generators fixing all earlier base points.
    pub gens: Vec<Permutation>,
    pub gen_inverses: Vec<Permutation>,
    /// Basic orbit in discovery order; `orbit[0]` is the base point.
    pub orbit: Vec<u32>,
    /// Position of a point in `orbit`, or `NOT_IN_ORBIT`.
    pub position: Vec<u32>,
    /// `reps[k]` maps the base point to `orbit[k]`.
    pub reps: Vec<Permutation>,
    pub inv_reps: Vec<Permutation>,
}

impl Level {
    fn new(base_point: u32, degree: usize) -> Self {
        let mut position = vec![NOT_IN_ORBIT; degree];
        position[base_point as usize] = 0;
        Level {
            base_point,
            gens: Vec::new(),
            gen_inverses: Vec::new(),
            orbit: vec![base_point],
            position,
            reps: vec![Permutation::identity(degree)],
            inv_reps: vec![Permutation::identity(degree)],
        }
    }

    #[inline]
    pub fn in_orbit(&self, point: u32) -> bool {
        self.position[point as usize] != NOT_IN_ORBIT
    }

    #[inline]
    pub fn rep(&self, point: u32) -> Option<&Permutation> {
        match self.position[point as usize] {
            NOT_IN_ORBIT => None,
            k => Some(&self.reps[k as usize]),
        }
    }

    #[inline]
    pub fn inv_rep(&self, point: u32) -> Option<&Permutation> {
        match self.position[point as usize] {
            NOT_IN_ORBIT => None,
            k => Some(&self.inv_reps[k as usize]),
        }
    }

    fn add_gen(&mut self, g: Permutation) {
        let inv = g.inverse();
        self.gens.push(g);
        self.gen_inverses.push(inv);
        let new = self.gens.len() - 1;
        // the new generator applied to the old orbit, then closure under all generators
        let old_len = self.orbit.len();
        for k in 0..old_len {
            self.try_extend(k, new);
        }
        let mut k = old_len;
        while k < self.orbit.len() {
            for s in 0..self.gens.len() {
                self.try_extend(k, s);
            }
            k += 1;
        }
    }

    fn try_extend(&mut self, k: usize, s: usize) {
        let delta = self.orbit[k];
        let gamma = self.gens[s].apply(delta);
        if self.position[gamma as usize] == NOT_IN_ORBIT {
            self.position[gamma as usize] = self.orbit.len() as u32;
            self.orbit.push(gamma);
            let rep = self.reps[k].compose(&self.gens[s]);
            let inv = self.gen_inverses[s].compose(&self.inv_reps[k]);
            self.reps.push(rep);
            self.inv_reps.push(inv);
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct StabChain {
    pub degree: usize,
    pub levels: Vec<Level>,
    /// Lower rank = preferred as a new base point.
    point_rank: Vec<u32>,
}

impl StabChain {
    pub fn empty(degree: usize, priority: Option<&[u32]>) -> Self {
        let mut point_rank: Vec<u32> = (0..degree as u32).collect();
        if let Some(pri) = priority {
            let mut next = 0u32;
            let mut rank = vec![u32::MAX; degree];
            for &p in pri {
                if (p as usize) < degree && rank[p as usize] == u32::MAX {
                    rank[p as usize] = next;
                    next += 1;
                }
            }
            for r in rank.iter_mut() {
                if *r == u32::MAX {
                    *r = next;
                    next += 1;
                }
            }
            point_rank = rank;
        }
        StabChain {
            degree,
            levels: Vec::new(),
            point_rank,
        }
    }

    pub fn base(&self) -> Vec<u32> {
        self.levels.iter().map(|l| l.base_point).collect()
    }

    pub fn order(&self) -> BigUint {
        self.levels
            .iter()
            .fold(BigUint::from(1u32), |acc, l| acc * BigUint::from(l.orbit.len()))
    }

    pub fn strong_generators(&self) -> &[Permutation] {
        self.levels.first().map(|l| &l.gens[..]).unwrap_or(&[])
    }

    /// Sifts `g` starting at `from`. Returns the residue and the level at which
    /// sifting stopped (`levels.len()` when it passed every level).
    pub fn sift(&self, g: &Permutation, from: usize) -> (Permutation, usize) {
        let mut cur = g.extended(self.degree);
        let mut buf = Permutation::identity(self.degree);
        for (i, level) in self.levels.iter().enumerate().skip(from) {
            let delta = cur.apply(level.base_point);
            match level.inv_rep(delta) {
                None => return (cur, i),
                Some(inv) => {
                    if delta != level.base_point {
                        cur.compose_into(inv, &mut buf);
                        std::mem::swap(&mut cur, &mut buf);
                    }
                }
            }
        }
        let n = self.levels.len();
        (cur, n)
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        if g.largest_moved_point() > self.degree {
            return false;
        }
        let (res, _) = self.sift(g, 0);
        res.is_identity()
    }

    fn choose_base_point(&self, g: &Permutation) -> u32 {
        (0..self.degree as u32)
            .filter(|&p| g.apply(p) != p)
            .min_by_key(|&p| self.point_rank[p as usize])
            .expect("non-identity permutation moves a point")
    }

    /// Adds a residue that fixes the base points of levels `..level`.
    fn add_strong_generator(&mut self, h: Permutation, level: usize) {
        if level == self.levels.len() {
            let bp = self.choose_base_point(&h);
            self.levels.push(Level::new(bp, self.degree));
        }
        for l in 0..=level {
            self.levels[l].add_gen(h.clone());
        }
    }

    /// Sifts `g` from the top and records its residue if non-trivial.
    /// Returns whether the chain changed.
    pub fn absorb(&mut self, g: &Permutation) -> bool {
        let (res, level) = self.sift(g, 0);
        if res.is_identity() {
            return false;
        }
        self.add_strong_generator(res, level);
        true
    }

    /// Deterministic completion: every Schreier generator must sift to the identity.
    pub fn complete(&mut self) {
        if self.levels.is_empty() {
            return;
        }
        let mut i = self.levels.len() - 1;
        loop {
            match self.first_failing_schreier_generator(i) {
                Some((res, j)) => {
                    self.add_strong_generator(res, j);
                    i = j.min(self.levels.len() - 1);
                }
                None => {
                    if i == 0 {
                        break;
                    }
                    i -= 1;
                }
            }
        }
    }

    fn first_failing_schreier_generator(&self, i: usize) -> Option<(Permutation, usize)> {
        let level = &self.levels[i];
        let mut tmp = Permutation::identity(self.degree);
        let mut h = Permutation::identity(self.degree);
        for k in 0..level.orbit.len() {
            let delta = level.orbit[k];
            for s in &level.gens {
                let gamma = s.apply(delta);
                level.reps[k].compose_into(s, &mut tmp);
                tmp.compose_into(level.inv_rep(gamma).expect("orbit closed"), &mut h);
                if h.is_identity() {
                    continue;
                }
                let (res, j) = self.sift(&h, i + 1);
                if !res.is_identity() {
                    return Some((res, j));
                }
            }
        }
        None
    }

    /// Randomized Schreier–Sims. With `target` set, stops as soon as the order
    /// reaches it; otherwise after `patience` consecutive sifts succeed.
    pub fn randomized(
        &mut self,
        gens: &[Permutation],
        rng: &mut ChaCha8Rng,
        target: Option<&BigUint>,
        patience: usize,
    ) {
        for g in gens {
            self.absorb(g);
        }
        if gens.iter().all(|g| g.is_identity()) {
            return;
        }
        if let Some(t) = target {
            if &self.order() >= t {
                return;
            }
        }
        let mut pr = ProductReplacement::new(gens, self.degree, rng);
        let mut quiet = 0;
        while quiet < patience {
            let r = pr.next(rng);
            if self.absorb(&r) {
                quiet = 0;
                if let Some(t) = target {
                    if &self.order() >= t {
                        return;
                    }
                }
            } else {
                quiet += 1;
            }
        }
    }

    /// Uniform random element: one random transversal element per level.
    pub fn random_element<R: Rng>(&self, rng: &mut R) -> Permutation {
        let mut g = Permutation::identity(self.degree);
        for level in self.levels.iter().rev() {
            let k = rng.gen_range(0..level.reps.len());
            g = g.compose(&level.reps[k]);
        }
        g
    }

    /// Visits every element of the group exactly once.
    pub fn for_each_element(&self, mut f: impl FnMut(&Permutation)) {
        fn rec(chain: &StabChain, level: usize, acc: &Permutation, f: &mut dyn FnMut(&Permutation)) {
            if level == chain.levels.len() {
                f(acc);
                return;
            }
            // elements are u_k · … · u_1 with u_i from level i's transversal
            for rep in &chain.levels[level].reps {
                let next = rep.compose(acc);
                rec(chain, level + 1, &next, f);
            }
        }
        rec(self, 0, &Permutation::identity(self.degree), &mut f);
    }

    /// Orbit partition of the stabilizer of the first `level` base points,
    /// as a representative label per point.
    pub fn stabilizer_orbit_labels(&self, level: usize) -> Vec<u32> {
        let gens: &[Permutation] = match self.levels.get(level) {
            Some(l) => &l.gens,
            None => &[],
        };
        orbit_labels(self.degree, gens)
    }
}

/// Labels each point by the least point of its orbit under `gens`.
pub(crate) fn orbit_labels(degree: usize, gens: &[Permutation]) -> Vec<u32> {
    let mut label = vec![u32::MAX; degree];
    let mut stack = Vec::new();
    for start in 0..degree as u32 {
        if label[start as usize] != u32::MAX {
            continue;
        }
        label[start as usize] = start;
        stack.push(start);
        while let Some(p) = stack.pop() {
            for g in gens {
                let q = g.apply(p);
                if label[q as usize] == u32::MAX {
                    label[q as usize] = start;
                    stack.push(q);
                }
            }
        }
    }
    label
}

/// Product replacement with an accumulator ("rattle").
pub(crate) struct ProductReplacement {
    state: Vec<Permutation>,
    acc: Permutation,
}

impl ProductReplacement {
    pub fn new(gens: &[Permutation], degree: usize, rng: &mut ChaCha8Rng) -> Self {
        let mut state: Vec<Permutation> = gens
            .iter()
            .filter(|g| !g.is_identity())
            .map(|g| g.extended(degree))
            .collect();
        if state.is_empty() {
            state.push(Permutation::identity(degree));
        }
        let base = state.clone();
        while state.len() < 10 {
            state.push(base[state.len() % base.len()].clone());
        }
        let mut pr = ProductReplacement {
            state,
            acc: Permutation::identity(degree),
        };
        for _ in 0..60 {
            pr.next(rng);
        }
        pr
    }

    pub fn next(&mut self, rng: &mut ChaCha8Rng) -> Permutation {
        let n = self.state.len();
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let other = if rng.gen_bool(0.5) {
            self.state[j].clone()
        } else {
            self.state[j].inverse()
        };
        self.state[i] = if rng.gen_bool(0.5) {
            self.state[i].compose(&other)
        } else {
            other.compose(&self.state[i])
        };
        let k = rng.gen_range(0..n);
        self.acc = self.acc.compose(&self.state[k]);
        self.acc.clone()
    }
}
