//! Permutation groups given by generators: order, membership, orbits, blocks,
//! cores, conjugacy classes, normal closure, derived subgroup, element search.
//!
//! A [`PermGroup`] owns its generators and builds a stabilizer chain lazily on
//! first use; after that every query is read-only, so a frozen group can be
//! shared across threads.

mod chain;
mod core;

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigUint;
use num_traits::Zero;
use thiserror::Error;

use crate::perm::{PermError, Permutation};
use crate::rng::SplitMix64;

pub use chain::{build_chain, Chain};

/// Memory cap for conjugacy-class enumeration (number of stored elements).
pub const CLASS_CAP: usize = 2_000_000;
/// Cap on the number of cosets enumerated for core computations.
pub const COSET_CAP: usize = 1_000_000;
/// Cap on full element enumeration.
pub const ELEMENT_CAP: usize = 100_000;

#[derive(Debug, Error)]
pub enum GroupError {
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error("generator degree {0} does not match group degree {1}")]
    DegreeMismatch(usize, usize),
    #[error("element is not a member of the group")]
    NotInGroup,
    #[error("subgroup generators do not all lie in the overgroup")]
    NotSubgroup,
    #[error("conjugacy class cap exceeded: reached {reached} elements (cap {cap})")]
    ClassCapExceeded { reached: usize, cap: usize },
    #[error("coset enumeration cap exceeded (cap {cap})")]
    CosetCapExceeded { cap: usize },
    #[error("element enumeration cap exceeded (cap {cap})")]
    ElementCapExceeded { cap: usize },
    #[error("group is not transitive")]
    Intransitive,
    #[error("point {0} out of range for degree {1}")]
    PointOutOfRange(u32, usize),
}

pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    base_hint: Vec<u32>,
    chain: OnceLock<Chain>,
}

impl Clone for PermGroup {
    fn clone(&self) -> Self {
        PermGroup {
            degree: self.degree,
            generators: self.generators.clone(),
            base_hint: self.base_hint.clone(),
            chain: OnceLock::new(),
        }
    }
}

impl fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "PermGroup(degree {}, {} generators)",
            self.degree,
            self.generators.len()
        )
    }
}

impl PermGroup {
    pub fn new(degree: usize, generators: Vec<Permutation>) -> Result<Self, GroupError> {
        for g in &generators {
            if g.degree() != degree {
                return Err(GroupError::DegreeMismatch(g.degree(), degree));
            }
        }
        Ok(PermGroup {
            degree,
            generators,
            base_hint: Vec::new(),
            chain: OnceLock::new(),
        })
    }

    /// Group with a prescribed initial base for its stabilizer chain. Used
    /// where the chain must expose a particular point stabilizer.
    pub fn with_base_hint(
        degree: usize,
        generators: Vec<Permutation>,
        base_hint: Vec<u32>,
    ) -> Result<Self, GroupError> {
        let mut g = PermGroup::new(degree, generators)?;
        g.base_hint = base_hint;
        Ok(g)
    }

    pub fn trivial(degree: usize) -> Self {
        PermGroup::new(degree, Vec::new()).expect("no generators to validate")
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn identity(&self) -> Permutation {
        Permutation::identity(self.degree)
    }

    pub fn chain(&self) -> &Chain {
        self.chain
            .get_or_init(|| chain::build_chain(self.degree, &self.generators, &self.base_hint))
    }

    pub fn order(&self) -> BigUint {
        self.chain().order()
    }

    /// Group order as `u128`; panics if it does not fit (callers in this
    /// crate stay far below that).
    pub fn order_u128(&self) -> u128 {
        let digits = self.order().to_u64_digits();
        match digits.len() {
            0 => 0,
            1 => digits[0] as u128,
            2 => (digits[1] as u128) << 64 | digits[0] as u128,
            _ => panic!("group order exceeds u128"),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.generators.iter().all(|g| g.is_identity())
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        self.chain().contains(g)
    }

    pub fn is_subgroup_of(&self, other: &PermGroup) -> bool {
        self.degree == other.degree && self.generators.iter().all(|g| other.contains(g))
    }

    pub fn orbit(&self, point: u32) -> Result<Vec<u32>, GroupError> {
        if point as usize >= self.degree {
            return Err(GroupError::PointOutOfRange(point, self.degree));
        }
        let mut seen = vec![false; self.degree];
        seen[point as usize] = true;
        let mut orbit = vec![point];
        let mut head = 0;
        while head < orbit.len() {
            let p = orbit[head];
            head += 1;
            for g in &self.generators {
                let q = g.image(p);
                if !seen[q as usize] {
                    seen[q as usize] = true;
                    orbit.push(q);
                }
            }
        }
        orbit.sort_unstable();
        Ok(orbit)
    }

    /// Orbits of the group on its points, each sorted, ordered by least point.
    pub fn orbits(&self) -> Vec<Vec<u32>> {
        let mut seen = vec![false; self.degree];
        let mut out = Vec::new();
        for p in 0..self.degree as u32 {
            if seen[p as usize] {
                continue;
            }
            let orbit = self.orbit(p).expect("point in range");
            for &q in &orbit {
                seen[q as usize] = true;
            }
            out.push(orbit);
        }
        out
    }

    pub fn is_transitive(&self) -> bool {
        self.degree <= 1 || self.orbit(0).expect("point in range").len() == self.degree
    }

    /// The finest block system in which `a` and `b` share a block, or `None`
    /// if that system is the trivial one-block partition.
    pub fn minimal_blocks(&self, a: u32, b: u32) -> Result<Option<BlockSystem>, GroupError> {
        if !self.is_transitive() {
            return Err(GroupError::Intransitive);
        }
        if a as usize >= self.degree || b as usize >= self.degree || a == b {
            return Err(GroupError::PointOutOfRange(a.max(b), self.degree));
        }
        let mut uf = UnionFind::new(self.degree);
        uf.union(a as usize, b as usize);
        let mut queue = vec![(a, b)];
        while let Some((x, y)) = queue.pop() {
            for g in &self.generators {
                let (u, v) = (g.image(x), g.image(y));
                if uf.union(u as usize, v as usize) {
                    queue.push((u, v));
                }
            }
        }
        let mut classes: HashMap<usize, Vec<u32>> = HashMap::new();
        for p in 0..self.degree {
            classes.entry(uf.find(p)).or_default().push(p as u32);
        }
        if classes.len() == 1 {
            return Ok(None);
        }
        let mut blocks: Vec<Vec<u32>> = classes.into_values().collect();
        blocks.sort_by_key(|b| b[0]);
        let size = blocks[0].len();
        debug_assert!(blocks.iter().all(|b| b.len() == size));
        Ok(Some(BlockSystem { blocks }))
    }

    pub fn is_primitive(&self) -> Result<bool, GroupError> {
        if !self.is_transitive() {
            return Err(GroupError::Intransitive);
        }
        if self.degree <= 2 {
            return Ok(true);
        }
        for b in 1..self.degree as u32 {
            if self.minimal_blocks(0, b)?.is_some() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Conjugacy class of `g` in this group, enumerated breadth-first under
    /// generator conjugation. Returned sorted by image table.
    pub fn conjugacy_class(
        &self,
        g: &Permutation,
        cap: usize,
    ) -> Result<Vec<Permutation>, GroupError> {
        if g.degree() != self.degree {
            return Err(GroupError::DegreeMismatch(g.degree(), self.degree));
        }
        let mut seen: HashSet<Vec<u16>> = HashSet::new();
        seen.insert(perm_key(g));
        let mut queue = VecDeque::new();
        queue.push_back(g.clone());
        let mut class = vec![g.clone()];
        while let Some(cur) = queue.pop_front() {
            for h in &self.generators {
                let c = cur.conjugate(h).expect("equal degree");
                let k = perm_key(&c);
                if seen.insert(k) {
                    if class.len() + 1 > cap {
                        return Err(GroupError::ClassCapExceeded {
                            reached: class.len() + 1,
                            cap,
                        });
                    }
                    class.push(c.clone());
                    queue.push_back(c);
                }
            }
        }
        class.sort_unstable();
        Ok(class)
    }

    /// `|C_X(g)| = |X| / |g^X|`.
    pub fn centralizer_order(&self, g: &Permutation) -> Result<BigUint, GroupError> {
        let class_len = self.conjugacy_class(g, CLASS_CAP)?.len();
        let order = self.order();
        let (q, r) = num_integer::Integer::div_rem(&order, &BigUint::from(class_len));
        assert!(r.is_zero(), "class size must divide the group order");
        Ok(q)
    }

    /// Smallest normal subgroup of this group containing `seed`.
    pub fn normal_closure(&self, seed: &[Permutation]) -> Result<PermGroup, GroupError> {
        for s in seed {
            if s.degree() != self.degree {
                return Err(GroupError::DegreeMismatch(s.degree(), self.degree));
            }
        }
        let mut gens: Vec<Permutation> =
            seed.iter().filter(|s| !s.is_identity()).cloned().collect();
        loop {
            let h = PermGroup::new(self.degree, gens.clone())?;
            let mut new_gens = Vec::new();
            for s in &gens {
                for g in &self.generators {
                    let c = s.conjugate(g).expect("equal degree");
                    if !h.contains(&c) {
                        new_gens.push(c);
                    }
                }
            }
            if new_gens.is_empty() {
                return Ok(h);
            }
            gens.extend(new_gens);
        }
    }

    pub fn derived_subgroup(&self) -> Result<PermGroup, GroupError> {
        let mut comms = Vec::new();
        for a in &self.generators {
            for b in &self.generators {
                let comm = a
                    .inverse()
                    .compose(&b.inverse())
                    .and_then(|w| w.compose(a))
                    .and_then(|w| w.compose(b))
                    .expect("equal degree");
                if !comm.is_identity() {
                    comms.push(comm);
                }
            }
        }
        self.normal_closure(&comms)
    }

    pub fn is_perfect(&self) -> Result<bool, GroupError> {
        Ok(self.derived_subgroup()?.order() == self.order())
    }

    pub fn subgroup_generated(&self, elems: &[Permutation]) -> Result<PermGroup, GroupError> {
        for e in elems {
            if !self.contains(e) {
                return Err(GroupError::NotInGroup);
            }
        }
        PermGroup::new(self.degree, elems.to_vec())
    }

    /// Whether conjugation by every generator of `self` maps `h` into itself.
    pub fn normalizes(&self, h: &PermGroup) -> bool {
        self.generators
            .iter()
            .all(|g| h.generators.iter().all(|s| {
                h.contains(&s.conjugate(g).expect("equal degree"))
            }))
    }

    /// Uniformly random element via the chain transversals; deterministic for
    /// a given seed.
    pub fn random_element(&self, seed: u64) -> Permutation {
        let mut rng = SplitMix64::new(seed);
        self.chain().uniform_element(&mut rng)
    }

    /// Random search for an element of order exactly `n`, by powering random
    /// elements. Returns `None` after a bounded number of attempts.
    pub fn find_element_of_order(&self, n: u128, seed: u64) -> Option<Permutation> {
        let mut rng = SplitMix64::new(seed);
        for _ in 0..1024 {
            let r = self.chain().uniform_element(&mut rng);
            let m = r.order();
            if m.is_multiple_of(n) {
                let e = power_u(&r, m / n);
                debug_assert_eq!(e.order(), n);
                if !e.is_identity() || n == 1 {
                    return Some(e);
                }
            }
        }
        None
    }

    /// All elements in first-seen BFS order from the identity (right
    /// multiplication by generators).
    pub fn elements(&self, cap: usize) -> Result<ElementList, GroupError> {
        let mut list = vec![Permutation::identity(self.degree)];
        let mut index: HashMap<Vec<u16>, u32> = HashMap::new();
        index.insert(perm_key(&list[0]), 0);
        let mut head = 0;
        while head < list.len() {
            let e = list[head].clone();
            head += 1;
            for g in &self.generators {
                let t = e.compose(g).expect("equal degree");
                let k = perm_key(&t);
                if let std::collections::hash_map::Entry::Vacant(e) = index.entry(k) {
                    if list.len() >= cap {
                        return Err(GroupError::ElementCapExceeded { cap });
                    }
                    e.insert(list.len() as u32);
                    list.push(t);
                }
            }
        }
        Ok(ElementList { list, index })
    }

    /// Generators of the pointwise stabilizer of `points`, via a chain with
    /// those points prescribed as the initial base.
    pub fn pointwise_stabilizer(&self, points: &[u32]) -> Result<PermGroup, GroupError> {
        for &p in points {
            if p as usize >= self.degree {
                return Err(GroupError::PointOutOfRange(p, self.degree));
            }
        }
        let aux = chain::build_chain(self.degree, &self.generators, points);
        let gens = aux.stabilizer_gens(points.len());
        PermGroup::new(self.degree, gens)
    }

    /// Largest normal subgroup of `self` contained in the subgroup `g`:
    /// the kernel of the action on the right cosets of `g`, with a divisor
    /// walk shortcut for cyclic subgroups.
    pub fn core_of_subgroup(&self, g: &PermGroup) -> Result<PermGroup, GroupError> {
        core::core_of_subgroup(self, g, COSET_CAP)
    }
}

pub struct ElementList {
    pub list: Vec<Permutation>,
    index: HashMap<Vec<u16>, u32>,
}

impl ElementList {
    pub fn len(&self) -> usize {
        self.list.len()
    }

    pub fn is_empty(&self) -> bool {
        self.list.is_empty()
    }

    pub fn position(&self, g: &Permutation) -> Option<u32> {
        self.index.get(&perm_key(g)).copied()
    }
}

/// Compact hash key for a permutation (degrees in this crate stay < 2^16).
pub fn perm_key(g: &Permutation) -> Vec<u16> {
    debug_assert!(g.degree() < 1 << 16);
    g.images().iter().map(|&x| x as u16).collect()
}

/// `g^e` for an unsigned exponent that may exceed `i64`.
pub fn power_u(g: &Permutation, mut e: u128) -> Permutation {
    let mut acc = Permutation::identity(g.degree());
    let mut sq = g.clone();
    while e > 0 {
        if e & 1 == 1 {
            acc = acc.compose(&sq).expect("equal degree");
        }
        sq = sq.compose(&sq).expect("equal degree");
        e >>= 1;
    }
    acc
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockSystem {
    blocks: Vec<Vec<u32>>,
}

impl BlockSystem {
    pub fn blocks(&self) -> &[Vec<u32>] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn block_size(&self) -> usize {
        self.blocks[0].len()
    }
}

impl fmt::Display for BlockSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for block in &self.blocks {
            write!(f, "{{")?;
            for (i, p) in block.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", p + 1)?;
            }
            write!(f, "}}")?;
        }
        Ok(())
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut c = x;
        while self.parent[c] != r {
            let next = self.parent[c];
            self.parent[c] = r;
            c = next;
        }
        r
    }

    /// Returns true if a merge happened.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = (ra.min(rb), ra.max(rb));
        self.parent[hi] = lo;
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(text: &str, degree: usize) -> Permutation {
        Permutation::parse(text, degree).unwrap()
    }

    fn a5() -> PermGroup {
        PermGroup::new(5, vec![p("(1,2,3,4,5)", 5), p("(3,4,5)", 5)]).unwrap()
    }

    #[test]
    fn a5_basics() {
        let g = a5();
        assert_eq!(g.order(), BigUint::from(60u32));
        assert!(g.contains(&p("(1,2,3)", 5)));
        assert!(!g.contains(&p("(1,2)", 5)));
        assert_eq!(g.orbit(0).unwrap(), vec![0, 1, 2, 3, 4]);
        assert!(g.is_transitive());
        assert!(g.is_primitive().unwrap());
    }

    #[test]
    fn contains_agrees_with_enumeration() {
        // S4 on 4 points: check membership against the explicit element list.
        let s4 = PermGroup::new(4, vec![p("(1,2)", 4), p("(1,2,3,4)", 4)]).unwrap();
        let elems = s4.elements(ELEMENT_CAP).unwrap();
        assert_eq!(elems.len(), 24);
        for e in &elems.list {
            assert!(s4.contains(e));
        }
    }

    #[test]
    fn c4_blocks() {
        let c4 = PermGroup::new(4, vec![p("(1,2,3,4)", 4)]).unwrap();
        assert!(!c4.is_primitive().unwrap());
        let sys = c4.minimal_blocks(0, 2).unwrap().expect("nontrivial");
        assert_eq!(sys.blocks(), &[vec![0, 2], vec![1, 3]]);
        assert_eq!(sys.to_string(), "{1,3}{2,4}");
    }

    #[test]
    fn block_search_rejects_intransitive() {
        let g = PermGroup::new(4, vec![p("(1,2)", 4)]).unwrap();
        assert!(matches!(
            g.minimal_blocks(0, 1),
            Err(GroupError::Intransitive)
        ));
    }

    #[test]
    fn conjugacy_class_of_identity() {
        let g = a5();
        let class = g.conjugacy_class(&Permutation::identity(5), 10).unwrap();
        assert_eq!(class.len(), 1);
        assert_eq!(g.centralizer_order(&Permutation::identity(5)).unwrap(), g.order());
    }

    #[test]
    fn class_size_times_centralizer_is_order() {
        let g = a5();
        for rep in [p("(1,2,3)", 5), p("(1,2,3,4,5)", 5), p("(1,2)(3,4)", 5)] {
            let class = g.conjugacy_class(&rep, CLASS_CAP).unwrap();
            let cent = g.centralizer_order(&rep).unwrap();
            assert_eq!(BigUint::from(class.len()) * cent, g.order());
        }
    }

    #[test]
    fn class_cap_errors_with_reached_size() {
        let g = a5();
        let err = g.conjugacy_class(&p("(1,2,3)", 5), 5).unwrap_err();
        assert!(matches!(err, GroupError::ClassCapExceeded { reached: 6, cap: 5 }));
    }

    #[test]
    fn derived_subgroup_of_s5_is_a5() {
        let s5 = PermGroup::new(5, vec![p("(1,2)", 5), p("(1,2,3,4,5)", 5)]).unwrap();
        let d = s5.derived_subgroup().unwrap();
        assert_eq!(d.order(), BigUint::from(60u32));
        assert!(d.contains(&p("(1,2,3)", 5)));
        assert!(!d.contains(&p("(1,2)", 5)));
    }

    #[test]
    fn lagrange_consistency() {
        let s5 = PermGroup::new(5, vec![p("(1,2)", 5), p("(1,2,3,4,5)", 5)]).unwrap();
        for sub in [
            s5.derived_subgroup().unwrap(),
            s5.normal_closure(&[p("(1,2,3)", 5)]).unwrap(),
            s5.subgroup_generated(&[p("(1,2)", 5)]).unwrap(),
            s5.pointwise_stabilizer(&[4]).unwrap(),
        ] {
            assert!((s5.order() % sub.order()).is_zero());
            assert!(sub.is_subgroup_of(&s5));
        }
    }

    #[test]
    fn pointwise_stabilizer_of_s5_point() {
        let s5 = PermGroup::new(5, vec![p("(1,2)", 5), p("(1,2,3,4,5)", 5)]).unwrap();
        let stab = s5.pointwise_stabilizer(&[4]).unwrap();
        assert_eq!(stab.order(), BigUint::from(24u32));
        for g in stab.generators() {
            assert_eq!(g.image(4), 4);
        }
    }

    #[test]
    fn random_element_is_member_and_deterministic() {
        let g = a5();
        for seed in 0..20 {
            let r = g.random_element(seed);
            assert!(g.contains(&r));
            assert_eq!(r, g.random_element(seed));
        }
    }

    #[test]
    fn find_element_of_order_works() {
        let g = a5();
        let e = g.find_element_of_order(5, 1).expect("A5 has order-5 elements");
        assert_eq!(e.order(), 5);
        assert!(g.find_element_of_order(7, 1).is_none());
    }

    #[test]
    fn normal_closure_of_three_cycle_in_a5() {
        let g = a5();
        let n = g.normal_closure(&[p("(1,2,3)", 5)]).unwrap();
        assert_eq!(n.order(), BigUint::from(60u32), "A5 is simple");
    }

    #[test]
    fn primitivity_matches_exhaustive_partition_search() {
        // Oracle: enumerate all equal-size partitions for degree <= 8 and
        // test invariance directly.
        fn primitive_oracle(g: &PermGroup) -> bool {
            let n = g.degree();
            let mut partitions = Vec::new();
            gen_partitions(n, &mut vec![u32::MAX; n], 0, &mut partitions);
            for part in partitions {
                let sizes: HashMap<u32, usize> =
                    part.iter().fold(HashMap::new(), |mut m, &b| {
                        *m.entry(b).or_insert(0) += 1;
                        m
                    });
                let k = sizes.len();
                if k <= 1 || k == n {
                    continue;
                }
                let size0 = sizes.values().next().copied().unwrap();
                if sizes.values().any(|&s| s != size0) {
                    continue;
                }
                let invariant = g.generators().iter().all(|gen| {
                    // blocks map to blocks
                    let mut image_block: HashMap<u32, u32> = HashMap::new();
                    (0..n).all(|x| {
                        let bx = part[x];
                        let ix = part[gen.image(x as u32) as usize];
                        match image_block.entry(bx) {
                            std::collections::hash_map::Entry::Occupied(o) => *o.get() == ix,
                            std::collections::hash_map::Entry::Vacant(v) => {
                                v.insert(ix);
                                true
                            }
                        }
                    })
                });
                if invariant {
                    return false;
                }
            }
            true
        }

        fn gen_partitions(n: usize, cur: &mut Vec<u32>, i: usize, out: &mut Vec<Vec<u32>>) {
            if i == n {
                out.push(cur.clone());
                return;
            }
            let max_used = cur[..i].iter().filter(|&&b| b != u32::MAX).max().copied();
            let limit = max_used.map(|m| m + 1).unwrap_or(0);
            for b in 0..=limit {
                cur[i] = b;
                gen_partitions(n, cur, i + 1, out);
            }
            cur[i] = u32::MAX;
        }

        let cases: Vec<PermGroup> = vec![
            PermGroup::new(4, vec![p("(1,2,3,4)", 4)]).unwrap(),
            PermGroup::new(4, vec![p("(1,2)", 4), p("(1,2,3,4)", 4)]).unwrap(),
            a5(),
            PermGroup::new(6, vec![p("(1,2,3,4,5,6)", 6)]).unwrap(),
            PermGroup::new(8, vec![p("(1,2,3,4,5,6,7,8)", 8), p("(1,5)(2,6)(3,7)(4,8)", 8)])
                .unwrap(),
            PermGroup::new(7, vec![p("(1,2,3,4,5,6,7)", 7), p("(2,3)(4,7)", 7)]).unwrap(),
        ];
        for g in cases {
            if !g.is_transitive() {
                continue;
            }
            assert_eq!(
                g.is_primitive().unwrap(),
                primitive_oracle(&g),
                "degree {} group",
                g.degree()
            );
        }
    }
}
