//! Writes permutation generators for SU(n, q) acting on the isotropic points
//! of its Hermitian space (q prime). For gcd(n, q+1) = 1 the action is a
//! faithful representation of PSU(n, q); `unitary_group 5 3` gives U5(3) on
//! 2440 points.
//!
//! The generators are random unitary transvections `x ↦ x + a(x,v)v` with
//! `v` isotropic and `a^q = -a`, which generate SU(n, q) for the cases used here.
//!
//! Usage: cargo run --release --example unitary_group -- N Q [SEED] > group.txt
//!
//! With `outer` in place of the seed it prints instead the field automorphism
//! `x ↦ x^q` on the same points, which normalizes the group.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_integer::Integer;
use polyscan::{PermGroup, Permutation};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// GF(q²) as pairs `a + b·w` with a fixed irreducible `w² = c1·w + c0`.
struct Field {
    q: u32,
    mul: Vec<u32>,
    add: Vec<u32>,
    frob: Vec<u32>,
}

impl Field {
    fn new(q: u32) -> Self {
        let (c0, c1) = (0..q)
            .flat_map(|c0| (0..q).map(move |c1| (c0, c1)))
            .find(|&(c0, c1)| (0..q).all(|x| (x * x % q + q * q - c1 * x % q - c0) % q != 0))
            .expect("irreducible quadratic exists");
        let size = (q * q) as usize;
        let split = |e: u32| (e % q, e / q);
        let join = |a: u32, b: u32| a % q + (b % q) * q;
        let mut mul = vec![0; size * size];
        let mut add = vec![0; size * size];
        for x in 0..size as u32 {
            for y in 0..size as u32 {
                let (a, b) = split(x);
                let (c, d) = split(y);
                // (a + bw)(c + dw) = ac + (ad + bc)w + bd(c1 w + c0)
                let bd = b * d % q;
                mul[x as usize * size + y as usize] = join(a * c + bd * c0, a * d + b * c + bd * c1);
                add[x as usize * size + y as usize] = join(a + c, b + d);
            }
        }
        let mut field = Field {
            q,
            mul,
            add,
            frob: Vec::new(),
        };
        field.frob = (0..size as u32).map(|x| field.pow(x, q)).collect();
        field
    }

    fn size(&self) -> usize {
        (self.q * self.q) as usize
    }
    fn mul(&self, x: u32, y: u32) -> u32 {
        self.mul[x as usize * self.size() + y as usize]
    }
    fn add(&self, x: u32, y: u32) -> u32 {
        self.add[x as usize * self.size() + y as usize]
    }
    fn pow(&self, x: u32, e: u32) -> u32 {
        (0..e).fold(1, |acc, _| self.mul(acc, x))
    }
    fn inv(&self, x: u32) -> u32 {
        (1..self.size() as u32)
            .find(|&y| self.mul(x, y) == 1)
            .expect("nonzero element is invertible")
    }
}

struct Space {
    field: Field,
    n: usize,
}

impl Space {
    fn form(&self, x: &[u32], y: &[u32]) -> u32 {
        let f = &self.field;
        (0..self.n).fold(0, |acc, i| f.add(acc, f.mul(x[i], f.frob[y[self.n - 1 - i] as usize])))
    }

    fn normalize(&self, v: &mut [u32]) {
        let f = &self.field;
        let lead = *v.iter().find(|&&c| c != 0).expect("nonzero vector");
        let s = f.inv(lead);
        for c in v.iter_mut() {
            *c = f.mul(*c, s);
        }
    }

    fn key(&self, v: &[u32]) -> u64 {
        v.iter().fold(0u64, |acc, &c| acc * self.field.size() as u64 + c as u64)
    }
}

fn main() {
    let args: Vec<String> = std::env::args().collect();
    if args.len() < 3 {
        eprintln!("usage: unitary_group N Q [SEED]");
        std::process::exit(2);
    }
    let n: usize = args[1].parse().expect("N");
    let q: u32 = args[2].parse().expect("Q");
    let outer = args.get(3).map(String::as_str) == Some("outer");
    let seed: u64 = if outer {
        1
    } else {
        args.get(3).map(|s| s.parse().expect("SEED")).unwrap_or(1)
    };
    let space = Space {
        field: Field::new(q),
        n,
    };
    let fsize = space.field.size() as u64;

    let mut points: Vec<Vec<u32>> = Vec::new();
    let mut index: HashMap<u64, u32> = HashMap::new();
    for code in 1..fsize.pow(n as u32) {
        let mut v = vec![0u32; n];
        let mut c = code;
        for slot in v.iter_mut().rev() {
            *slot = (c % fsize) as u32;
            c /= fsize;
        }
        if *v.iter().find(|&&x| x != 0).unwrap() != 1 || space.form(&v, &v) != 0 {
            continue;
        }
        index.insert(space.key(&v), points.len() as u32);
        points.push(v);
    }

    let f = &space.field;
    if outer {
        let images: Vec<u32> = points
            .iter()
            .map(|x| {
                let y: Vec<u32> = x.iter().map(|&c| f.frob[c as usize]).collect();
                index[&space.key(&y)]
            })
            .collect();
        println!(
            "{}",
            Permutation::from_images(images).expect("field automorphism permutes points")
        );
        return;
    }
    let trace_zero: Vec<u32> = (1..f.size() as u32)
        .filter(|&a| f.add(f.frob[a as usize], a) == 0)
        .collect();
    let transvection = |v: &[u32], a: u32| -> Permutation {
        let images: Vec<u32> = points
            .iter()
            .map(|x| {
                let coef = f.mul(a, space.form(x, v));
                let mut y: Vec<u32> = x.iter().zip(v).map(|(&xi, &vi)| f.add(xi, f.mul(coef, vi))).collect();
                space.normalize(&mut y);
                index[&space.key(&y)]
            })
            .collect();
        Permutation::from_images(images).expect("transvection permutes points")
    };

    // |PSU(n,q)|; the kernel of SU(n,q) on points is its centre, so this is
    // the order of the permutation group we are after.
    let mut target = BigUint::from(q).pow((n * (n - 1) / 2) as u32);
    for i in 2..=n as u32 {
        let qi = BigUint::from(q).pow(i);
        target = if i % 2 == 0 {
            target * (qi - 1u32)
        } else {
            target * (qi + 1u32)
        };
    }
    target /= BigUint::from((n as u64).gcd(&(q as u64 + 1)));

    for attempt in 0.. {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(attempt));
        let mut word = || {
            let mut g = Permutation::identity(points.len());
            for _ in 0..3 {
                let v = &points[rng.gen_range(0..points.len())];
                let a = trace_zero[rng.gen_range(0..trace_zero.len())];
                g = g.compose(&transvection(v, a));
            }
            g
        };
        let gens = vec![word(), word()];
        let group = PermGroup::new(gens.clone(), 1);
        if group.order() != &target {
            eprintln!("attempt {attempt}: order {} != {target}, retrying", group.order());
            continue;
        }
        println!("degree {}", points.len());
        println!(
            "# SU({n},{q}) on {} isotropic points, order {target}, products of transvections",
            points.len()
        );
        for g in gens {
            println!("{g}");
        }
        break;
    }
}
