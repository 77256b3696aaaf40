//! Deterministic Schreier-Sims stabilizer chains.
//!
//! Base points follow a fixed rule (first moved point at each level, after
//! any prescribed hint points), and all orbits and transversals are built by
//! breadth-first search in generator order, so a chain is a pure function of
//! the generator list. That keeps orders, membership tests and census output
//! bit-reproducible.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::One;

use crate::perm::Permutation;

#[derive(Debug)]
pub struct Level {
    pub base: u32,
    /// Strong generators introduced at this level; they fix the bases of all
    /// earlier levels. The generating set of level `i`'s stabilizer is the
    /// union of the generators of levels `i..`.
    pub gens: Vec<Permutation>,
    /// Orbit of `base` in BFS discovery order.
    pub orbit: Vec<u32>,
    /// For each orbit point `p`, an element `u` with `base^u = p`.
    pub transversal: HashMap<u32, Permutation>,
}

#[derive(Debug)]
pub struct Chain {
    pub degree: usize,
    pub levels: Vec<Level>,
}

impl Chain {
    pub fn order(&self) -> BigUint {
        let mut ord = BigUint::one();
        for level in &self.levels {
            ord *= BigUint::from(level.orbit.len());
        }
        ord
    }

    /// Strip `g` through the chain starting at `from`. Returns the residue
    /// and the level at which sifting stopped (`levels.len()` means the
    /// residue fixes every base point).
    pub fn sift_from(&self, from: usize, g: &Permutation) -> (Permutation, usize) {
        let mut h = g.clone();
        for (l, level) in self.levels.iter().enumerate().skip(from) {
            let beta = h.image(level.base);
            match level.transversal.get(&beta) {
                Some(u) => {
                    h = h.compose(&u.inverse()).expect("equal degree");
                }
                None => return (h, l),
            }
        }
        (h, self.levels.len())
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        if g.degree() != self.degree {
            return false;
        }
        let (residue, _) = self.sift_from(0, g);
        residue.is_identity()
    }

    /// Generators of the pointwise stabilizer of the first `k` base points:
    /// all strong generators of levels `k..`.
    pub fn stabilizer_gens(&self, k: usize) -> Vec<Permutation> {
        self.levels
            .iter()
            .skip(k)
            .flat_map(|l| l.gens.iter().cloned())
            .collect()
    }

    /// Element drawn uniformly from the group: independent uniform transversal
    /// choices multiplied deepest level first.
    pub fn uniform_element(&self, rng: &mut crate::rng::SplitMix64) -> Permutation {
        let mut acc = Permutation::identity(self.degree);
        for level in self.levels.iter().rev() {
            let p = level.orbit[rng.usize_below(level.orbit.len())];
            let u = &level.transversal[&p];
            acc = acc.compose(u).expect("equal degree");
        }
        acc
    }
}

pub fn build_chain(degree: usize, gens: &[Permutation], base_hint: &[u32]) -> Chain {
    let mut builder = Builder {
        degree,
        levels: Vec::new(),
    };
    for &b in base_hint {
        builder.push_level(b);
    }
    for g in gens {
        if g.is_identity() {
            continue;
        }
        builder.insert(g.clone());
    }
    Chain {
        degree,
        levels: builder.levels,
    }
}

struct Builder {
    degree: usize,
    levels: Vec<Level>,
}

impl Builder {
    fn push_level(&mut self, base: u32) {
        let mut transversal = HashMap::new();
        transversal.insert(base, Permutation::identity(self.degree));
        self.levels.push(Level {
            base,
            gens: Vec::new(),
            orbit: vec![base],
            transversal,
        });
    }

    fn sift_from(&self, from: usize, g: &Permutation) -> (Permutation, usize) {
        let mut h = g.clone();
        for l in from..self.levels.len() {
            let level = &self.levels[l];
            let beta = h.image(level.base);
            match level.transversal.get(&beta) {
                Some(u) => h = h.compose(&u.inverse()).expect("equal degree"),
                None => return (h, l),
            }
        }
        (h, self.levels.len())
    }

    fn insert(&mut self, g: Permutation) {
        let (residue, stuck) = self.sift_from(0, &g);
        if residue.is_identity() {
            return;
        }
        self.add_at(stuck, residue);
        for l in (0..=stuck.min(self.levels.len() - 1)).rev() {
            self.complete_level(l);
        }
    }

    fn add_at(&mut self, level: usize, residue: Permutation) {
        if level == self.levels.len() {
            let base = residue
                .first_moved_point()
                .expect("residue is not the identity");
            self.push_level(base);
        }
        self.levels[level].gens.push(residue);
    }

    /// Generators acting at level `i` (union over levels `i..`), in a fixed
    /// enumeration order.
    fn acting_gens(&self, i: usize) -> Vec<Permutation> {
        self.levels[i..]
            .iter()
            .flat_map(|l| l.gens.iter().cloned())
            .collect()
    }

    fn rebuild_orbit(&mut self, i: usize) {
        let gens = self.acting_gens(i);
        let base = self.levels[i].base;
        let mut orbit = vec![base];
        let mut transversal = HashMap::new();
        transversal.insert(base, Permutation::identity(self.degree));
        let mut head = 0;
        while head < orbit.len() {
            let p = orbit[head];
            head += 1;
            let up = transversal[&p].clone();
            for g in &gens {
                let q = g.image(p);
                transversal.entry(q).or_insert_with(|| {
                    orbit.push(q);
                    up.compose(g).expect("equal degree")
                });
            }
        }
        self.levels[i].orbit = orbit;
        self.levels[i].transversal = transversal;
    }

    /// Establish level `i`: every Schreier generator of the level's orbit
    /// must sift to the identity through the deeper levels. Assumes the
    /// deeper levels are already established.
    fn complete_level(&mut self, i: usize) {
        'restart: loop {
            self.rebuild_orbit(i);
            let gens = self.acting_gens(i);
            let orbit = self.levels[i].orbit.clone();
            for p in orbit {
                let up = self.levels[i].transversal[&p].clone();
                for g in &gens {
                    let q = g.image(p);
                    let uq_inv = self.levels[i].transversal[&q].inverse();
                    let schreier = up
                        .compose(g)
                        .and_then(|w| w.compose(&uq_inv))
                        .expect("equal degree");
                    if schreier.is_identity() {
                        continue;
                    }
                    let (residue, stuck) = self.sift_from(i + 1, &schreier);
                    if residue.is_identity() {
                        continue;
                    }
                    self.add_at(stuck, residue);
                    for l in ((i + 1)..=stuck.min(self.levels.len() - 1)).rev() {
                        self.complete_level(l);
                    }
                    continue 'restart;
                }
            }
            return;
        }
    }
}
