//! Multiplication tables of small groups and their regular representations.
//!
//! A [`CayleyTable`] is the domain on which skew-morphisms act: element 0 is
//! the identity, elements are ordered by first-seen BFS from the generators,
//! so indices are stable across runs.
//!
//! Products of table elements read as classical composition of maps: in
//! `mul(a, b)` the right factor acts first. With that reading the left
//! translations `L_g : x -> g*x` satisfy `L_g . L_h = L_{gh}` and every
//! skew-morphism identity holds on the table exactly as written.

use std::collections::HashMap;

use thiserror::Error;

use crate::group::{perm_key, GroupError, PermGroup};
use crate::perm::Permutation;

/// Full n x n tables are materialized only below this size; larger tables
/// compute products through the underlying permutations.
const FULL_TABLE_CAP: usize = 4096;

#[derive(Debug, Error)]
pub enum TableError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("element cap exceeded while enumerating the group (cap {0})")]
    CapExceeded(usize),
    #[error("table is not a group: {0}")]
    NotAGroup(&'static str),
    #[error("element index {0} out of range for order {1}")]
    BadIndex(u32, usize),
}

pub struct CayleyTable {
    n: usize,
    /// Underlying permutations, when the table came from a permutation group.
    elements: Vec<Permutation>,
    index: HashMap<Vec<u16>, u32>,
    names: Vec<String>,
    gen_indices: Vec<u32>,
    inv: Vec<u32>,
    table: Option<Vec<u32>>,
}

impl CayleyTable {
    /// Tabulate a permutation group by BFS element enumeration.
    pub fn from_perm_group(g: &PermGroup, cap: usize) -> Result<CayleyTable, TableError> {
        let elems = g.elements(cap).map_err(|e| match e {
            GroupError::ElementCapExceeded { cap } => TableError::CapExceeded(cap),
            other => TableError::Group(other),
        })?;
        let n = elems.len();
        let list = elems.list;
        let mut index = HashMap::with_capacity(n);
        for (i, e) in list.iter().enumerate() {
            index.insert(perm_key(e), i as u32);
        }
        let names = list.iter().map(|e| e.to_string()).collect();
        let gen_indices = g
            .generators()
            .iter()
            .map(|gen| index[&perm_key(gen)])
            .collect();
        let inv = list
            .iter()
            .map(|e| index[&perm_key(&e.inverse())])
            .collect();
        let table = if n <= FULL_TABLE_CAP {
            let mut t = vec![0u32; n * n];
            for a in 0..n {
                for b in 0..n {
                    // a * b: right factor acts first
                    let prod = list[b].compose(&list[a]).expect("equal degree");
                    t[a * n + b] = index[&perm_key(&prod)];
                }
            }
            Some(t)
        } else {
            None
        };
        let out = CayleyTable {
            n,
            elements: list,
            index,
            names,
            gen_indices,
            inv,
            table,
        };
        out.validate()?;
        Ok(out)
    }

    /// Build from an abstract multiplication function on `0..n` with identity
    /// at index 0. Used for small presented groups with no preferred
    /// permutation representation.
    pub fn from_fn(
        n: usize,
        mul: impl Fn(u32, u32) -> u32,
        names: Option<Vec<String>>,
    ) -> Result<CayleyTable, TableError> {
        if n == 0 || n > FULL_TABLE_CAP {
            return Err(TableError::CapExceeded(FULL_TABLE_CAP));
        }
        let mut t = vec![0u32; n * n];
        for a in 0..n as u32 {
            for b in 0..n as u32 {
                let v = mul(a, b);
                if v as usize >= n {
                    return Err(TableError::NotAGroup("product out of range"));
                }
                t[a as usize * n + b as usize] = v;
            }
        }
        let mut inv = vec![u32::MAX; n];
        for a in 0..n {
            for b in 0..n {
                if t[a * n + b] == 0 && t[b * n + a] == 0 {
                    inv[a] = b as u32;
                }
            }
        }
        if inv.contains(&u32::MAX) {
            return Err(TableError::NotAGroup("missing two-sided inverse"));
        }
        let names =
            names.unwrap_or_else(|| (0..n).map(|i| format!("g{i}")).collect());
        let out = CayleyTable {
            n,
            elements: Vec::new(),
            index: HashMap::new(),
            names,
            gen_indices: (1..n as u32).collect(),
            inv,
            table: Some(t),
        };
        out.validate()?;
        Ok(out)
    }

    /// Identity at 0, bijective rows and columns, two-sided inverses, and
    /// associativity (exhaustive up to order 200, sampled above).
    pub fn validate(&self) -> Result<(), TableError> {
        let n = self.n;
        for x in 0..n as u32 {
            if self.mul(0, x) != x || self.mul(x, 0) != x {
                return Err(TableError::NotAGroup("identity is not at index 0"));
            }
            if self.mul(x, self.inv[x as usize]) != 0 || self.mul(self.inv[x as usize], x) != 0 {
                return Err(TableError::NotAGroup("inverse table is wrong"));
            }
        }
        for a in 0..n {
            let mut seen_row = vec![false; n];
            let mut seen_col = vec![false; n];
            for b in 0..n {
                let r = self.mul(a as u32, b as u32) as usize;
                let c = self.mul(b as u32, a as u32) as usize;
                if seen_row[r] || seen_col[c] {
                    return Err(TableError::NotAGroup("row or column not a bijection"));
                }
                seen_row[r] = true;
                seen_col[c] = true;
            }
        }
        let assoc = |a: u32, b: u32, c: u32| {
            self.mul(self.mul(a, b), c) == self.mul(a, self.mul(b, c))
        };
        if n <= 200 {
            for a in 0..n as u32 {
                for b in 0..n as u32 {
                    for c in 0..n as u32 {
                        if !assoc(a, b, c) {
                            return Err(TableError::NotAGroup("associativity fails"));
                        }
                    }
                }
            }
        } else {
            let mut rng = crate::rng::SplitMix64::new(0xA550C);
            for _ in 0..4096 {
                let a = rng.below(n as u64) as u32;
                let b = rng.below(n as u64) as u32;
                let c = rng.below(n as u64) as u32;
                if !assoc(a, b, c) {
                    return Err(TableError::NotAGroup("associativity fails (sampled)"));
                }
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: u32) -> &str {
        &self.names[i as usize]
    }

    pub fn gen_indices(&self) -> &[u32] {
        &self.gen_indices
    }

    /// Underlying permutation of element `i` (perm-backed tables only).
    pub fn underlying(&self, i: u32) -> Option<&Permutation> {
        self.elements.get(i as usize)
    }

    pub fn position(&self, g: &Permutation) -> Option<u32> {
        self.index.get(&perm_key(g)).copied()
    }

    /// Product `a * b`; the right factor acts first.
    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if let Some(t) = &self.table {
            t[a as usize * self.n + b as usize]
        } else {
            let prod = self.elements[b as usize]
                .compose(&self.elements[a as usize])
                .expect("equal degree");
            self.index[&perm_key(&prod)]
        }
    }

    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        self.inv[a as usize]
    }

    /// Order of element `i` in the group.
    pub fn element_order(&self, i: u32) -> u64 {
        let mut ord = 1u64;
        let mut acc = i;
        while acc != 0 {
            acc = self.mul(acc, i);
            ord += 1;
        }
        ord
    }

    /// Left translation `L_g : x -> g*x` as a permutation of element indices.
    pub fn left_translation(&self, g: u32) -> Permutation {
        let images = (0..self.n as u32).map(|x| self.mul(g, x)).collect();
        Permutation::from_images(images).expect("translations are bijections")
    }

    /// Index permutation of the conjugation map `x -> x^r` for a
    /// permutation `r` normalizing the underlying group (perm-backed tables
    /// only). When `r` lies in the group this is the inner automorphism.
    pub fn conjugation_action(&self, r: &Permutation) -> Result<Permutation, TableError> {
        if self.elements.is_empty() {
            return Err(TableError::NotAGroup("table has no underlying permutations"));
        }
        let images = self
            .elements
            .iter()
            .map(|u| {
                let c = u
                    .conjugate(r)
                    .map_err(|_| TableError::NotAGroup("degree mismatch in conjugation"))?;
                self.position(&c)
                    .ok_or(TableError::NotAGroup("conjugation leaves the group"))
            })
            .collect::<Result<Vec<u32>, _>>()?;
        Ok(Permutation::from_images(images).expect("conjugation is a bijection"))
    }

    /// The left regular representation `L_G` on `|G|` points, generated by
    /// the translations of the table's generators.
    pub fn regular_rep(&self) -> PermGroup {
        let gens = self
            .gen_indices
            .iter()
            .map(|&g| self.left_translation(g))
            .collect();
        PermGroup::new(self.n, gens).expect("translations share a degree")
    }
}
