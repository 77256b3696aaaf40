//! Constructors for the named groups and actions.
//!
//! Every constructor self-checks its stabilizer-chain order against an
//! independently known value (closed formula or published order) before
//! returning; a mismatch is a hard error, never a silent fallback.

pub mod modp;
mod table;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;
use thiserror::Error;

use crate::group::{GroupError, PermGroup, ELEMENT_CAP};
use crate::perm::{PermError, Permutation};

pub use modp::{legendre, sqrt_mod, FieldElem, FieldError};
pub use table::{CayleyTable, TableError};

#[derive(Debug, Error)]
pub enum AtlasError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error(transparent)]
    Table(#[from] TableError),
    #[error("{0}. is not an odd prime")]
    NotOddPrime(u64),
    #[error("matrix is singular mod {0}")]
    SingularMatrix(u64),
    #[error("self-check failed for {what}: expected order {expected}, chain computed {got}")]
    SelfCheckFailed {
        what: String,
        expected: BigUint,
        got: BigUint,
    },
    #[error("coordinate index {0} out of range 1..={1}")]
    CoordinateOutOfRange(u32, u32),
    #[error("element does not preserve coordinate block {0}")]
    NotBlockPreserving(u32),
    #[error("cannot parse group spec: {0}")]
    BadSpec(String),
}

pub fn factorial(n: u64) -> BigUint {
    let mut f = BigUint::one();
    for k in 2..=n {
        f *= BigUint::from(k);
    }
    f
}

fn self_check(what: &str, g: PermGroup, expected: BigUint) -> Result<PermGroup, AtlasError> {
    let got = g.order();
    if got != expected {
        return Err(AtlasError::SelfCheckFailed {
            what: what.to_string(),
            expected,
            got,
        });
    }
    Ok(g)
}

/// Alternating group on `n` points, order `n!/2`.
pub fn alternating(n: u32) -> Result<PermGroup, AtlasError> {
    let n = n.max(1) as usize;
    let gens: Vec<Permutation> = if n < 4 {
        if n == 3 {
            vec![Permutation::parse("(1,2,3)", 3)?]
        } else {
            vec![]
        }
    } else if n % 2 == 1 {
        let full: Vec<u32> = (0..n as u32).map(|i| (i + 1) % n as u32).collect();
        vec![
            Permutation::parse("(1,2,3)", n)?,
            Permutation::from_images(full)?,
        ]
    } else {
        // (2,3,...,n) is even when n is even
        let mut images: Vec<u32> = (0..n as u32).collect();
        for (i, img) in images.iter_mut().enumerate().skip(1) {
            *img = if i + 1 < n { i as u32 + 1 } else { 1 };
        }
        vec![
            Permutation::parse("(1,2,3)", n)?,
            Permutation::from_images(images)?,
        ]
    };
    let expected = if n >= 2 {
        factorial(n as u64) / BigUint::from(2u32)
    } else {
        BigUint::one()
    };
    self_check(
        &format!("A({n})"),
        PermGroup::new(n, gens)?,
        expected,
    )
}

/// Symmetric group on `n` points, order `n!`.
pub fn symmetric(n: u32) -> Result<PermGroup, AtlasError> {
    let n = n.max(1) as usize;
    let gens: Vec<Permutation> = if n < 2 {
        vec![]
    } else {
        let full: Vec<u32> = (0..n as u32).map(|i| (i + 1) % n as u32).collect();
        vec![
            Permutation::parse("(1,2)", n)?,
            Permutation::from_images(full)?,
        ]
    };
    self_check(
        &format!("S({n})"),
        PermGroup::new(n, gens)?,
        factorial(n as u64),
    )
}

/// Cyclic group generated by an `n`-cycle.
pub fn cyclic(n: u32) -> Result<PermGroup, AtlasError> {
    let n = n.max(1) as usize;
    let gens = if n < 2 {
        vec![]
    } else {
        let full: Vec<u32> = (0..n as u32).map(|i| (i + 1) % n as u32).collect();
        vec![Permutation::from_images(full)?]
    };
    self_check(
        &format!("C({n})"),
        PermGroup::new(n, gens)?,
        BigUint::from(n),
    )
}

/// A point of the projective line over F_p, stored in normalized homogeneous
/// coordinates: `[x : 1]` for the affine points and `[1 : 0]` for infinity.
/// There are exactly `p + 1` points; the index order is
/// `[0:1], [1:1], ..., [p-1:1], [1:0]`, so infinity is the last point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ProjectivePoint {
    x: FieldElem,
    y: FieldElem,
}

impl ProjectivePoint {
    /// Normalize an arbitrary nonzero homogeneous pair.
    pub fn new(x: FieldElem, y: FieldElem) -> ProjectivePoint {
        if y.is_zero() {
            assert!(!x.is_zero(), "[0 : 0] is not a projective point");
            ProjectivePoint {
                x: FieldElem::new(1, x.modulus()),
                y,
            }
        } else {
            ProjectivePoint {
                x: x.mul(y.inv().expect("nonzero")),
                y: FieldElem::new(1, y.modulus()),
            }
        }
    }

    pub fn is_infinity(&self) -> bool {
        self.y.is_zero()
    }

    pub fn coords(&self) -> (FieldElem, FieldElem) {
        (self.x, self.y)
    }

    /// 0-based point index in the fixed ordering.
    pub fn index(&self) -> u32 {
        if self.is_infinity() {
            self.x.modulus() as u32
        } else {
            self.x.value() as u32
        }
    }

    pub fn from_index(i: u32, p: u64) -> ProjectivePoint {
        if i as u64 == p {
            ProjectivePoint::new(FieldElem::new(1, p), FieldElem::new(0, p))
        } else {
            ProjectivePoint::new(FieldElem::new(i as i64, p), FieldElem::new(1, p))
        }
    }

    /// All `p + 1` points in index order.
    pub fn all(p: u64) -> Vec<ProjectivePoint> {
        (0..=p as u32).map(|i| ProjectivePoint::from_index(i, p)).collect()
    }

    /// Image under right multiplication of the row vector `[x, y]` by a
    /// matrix with entries already reduced mod p.
    pub fn apply(&self, m: &[[FieldElem; 2]; 2]) -> ProjectivePoint {
        let nx = self.x.mul(m[0][0]).add(self.y.mul(m[1][0]));
        let ny = self.x.mul(m[0][1]).add(self.y.mul(m[1][1]));
        ProjectivePoint::new(nx, ny)
    }
}

/// A 2x2 matrix mod p with nonzero determinant, acting on the projective
/// line by right multiplication of row vectors, as a permutation of the
/// `p + 1` points in [`ProjectivePoint`] index order.
pub fn matrix_to_perm(m: [[i64; 2]; 2], p: u64) -> Result<Permutation, AtlasError> {
    if !modp::is_odd_prime(p) {
        return Err(AtlasError::NotOddPrime(p));
    }
    let reduced = [
        [FieldElem::new(m[0][0], p), FieldElem::new(m[0][1], p)],
        [FieldElem::new(m[1][0], p), FieldElem::new(m[1][1], p)],
    ];
    let det = reduced[0][0]
        .mul(reduced[1][1])
        .sub(reduced[0][1].mul(reduced[1][0]));
    if det.is_zero() {
        return Err(AtlasError::SingularMatrix(p));
    }
    let n = (p + 1) as usize;
    let mut images = vec![0u32; n];
    for i in 0..n as u32 {
        images[i as usize] = ProjectivePoint::from_index(i, p).apply(&reduced).index();
    }
    Ok(Permutation::from_images(images)?)
}

/// PSL(2, p) acting on the p+1 projective points, order p(p^2-1)/2.
pub fn psl2(p: u64) -> Result<PermGroup, AtlasError> {
    if !modp::is_odd_prime(p) {
        return Err(AtlasError::NotOddPrime(p));
    }
    let r = matrix_to_perm([[1, 1], [0, 1]], p)?;
    let s = matrix_to_perm([[0, 1], [-1, 0]], p)?;
    let expected = BigUint::from(p) * BigUint::from(p * p - 1) / BigUint::from(2u32);
    self_check(
        &format!("PSL(2,{p})"),
        PermGroup::new((p + 1) as usize, vec![r, s])?,
        expected,
    )
}

/// PGL(2, p) on the same points, order p(p^2-1); contains psl2(p) with
/// index 2.
pub fn pgl2(p: u64) -> Result<PermGroup, AtlasError> {
    if !modp::is_odd_prime(p) {
        return Err(AtlasError::NotOddPrime(p));
    }
    let r = matrix_to_perm([[1, 1], [0, 1]], p)?;
    let s = matrix_to_perm([[0, 1], [-1, 0]], p)?;
    let nu = (1..p)
        .find(|&v| modp::legendre(v as i64, p) == -1)
        .expect("odd primes have non-residues");
    let diag = matrix_to_perm([[nu as i64, 0], [0, 1]], p)?;
    let expected = BigUint::from(p) * BigUint::from(p * p - 1);
    self_check(
        &format!("PGL(2,{p})"),
        PermGroup::new((p + 1) as usize, vec![r, s, diag])?,
        expected,
    )
}

// Classical generator pair for the Mathieu group on 23 points: the 23-cycle
// together with an element of order 5, as tabulated in the standard
// computational group theory systems. The constructor re-derives the group
// order from its stabilizer chain and refuses to return on mismatch, so the
// data is never trusted blindly.
const M23_GEN_A: &str =
    "(1,2,3,4,5,6,7,8,9,10,11,12,13,14,15,16,17,18,19,20,21,22,23)";
const M23_GEN_B: &str = "(3,17,10,7,9)(4,13,14,19,5)(8,18,11,12,23)(15,20,22,21,16)";

pub const M23_ORDER: u64 = 10_200_960;
pub const M22_ORDER: u64 = 443_520;

/// Mathieu group M23 on 23 points. The first generator is the 23-cycle
/// `(1,...,23)`.
pub fn mathieu23() -> Result<PermGroup, AtlasError> {
    let a = Permutation::parse(M23_GEN_A, 23)?;
    let b = Permutation::parse(M23_GEN_B, 23)?;
    self_check(
        "M23",
        PermGroup::new(23, vec![a, b])?,
        BigUint::from(M23_ORDER),
    )
}

/// Mathieu group M22 on 22 points, extracted as the stabilizer of point 23
/// in [`mathieu23`] via a chain based at that point.
pub fn mathieu22() -> Result<PermGroup, AtlasError> {
    let m23 = mathieu22_in_m23()?;
    let gens = m23
        .generators()
        .iter()
        .map(|g| g.restrict(22))
        .collect::<Result<Vec<_>, _>>()?;
    self_check(
        "M22",
        PermGroup::new(22, gens)?,
        BigUint::from(M22_ORDER),
    )
}

/// M22 as the stabilizer of point 23 inside M23, still on 23 points. This is
/// the vertex group used by the M22 census.
pub fn mathieu22_in_m23() -> Result<PermGroup, AtlasError> {
    let m23 = mathieu23()?;
    let stab = m23.pointwise_stabilizer(&[22])?;
    self_check("M22 < M23", stab, BigUint::from(M22_ORDER))
}

/// The direct power `T^l` in its disjoint-union action: coordinate `i`
/// (1-based) acts on the points `[(i-1)d, id)` where `d = deg T`.
pub struct DirectPower {
    copies: u32,
    block: usize,
    group: PermGroup,
}

impl DirectPower {
    pub fn new(t: &PermGroup, l: u32) -> Result<DirectPower, AtlasError> {
        let l = l.max(1);
        let d = t.degree();
        let degree = d * l as usize;
        let mut gens = Vec::new();
        for i in 0..l as usize {
            for g in t.generators() {
                gens.push(g.shift(i * d, degree)?);
            }
        }
        let mut expected = BigUint::one();
        let t_order = t.order();
        for _ in 0..l {
            expected *= &t_order;
        }
        let group = self_check(
            &format!("T^{l} (deg {d} base)"),
            PermGroup::new(degree, gens)?,
            expected,
        )?;
        Ok(DirectPower {
            copies: l,
            block: d,
            group,
        })
    }

    pub fn group(&self) -> &PermGroup {
        &self.group
    }

    pub fn copies(&self) -> u32 {
        self.copies
    }

    pub fn degree(&self) -> usize {
        self.group.degree()
    }

    /// The block `l`-cycle: conjugation by it rotates the coordinates, so
    /// `coordinate_embed(t, i)^rotation = coordinate_embed(t, i+1)`.
    pub fn rotation(&self) -> Permutation {
        let n = self.degree();
        let d = self.block;
        let images = (0..n)
            .map(|p| ((p + d) % n) as u32)
            .collect();
        Permutation::from_images(images).expect("rotation is a bijection")
    }

    /// `phi_i(t)`: the element acting as `t` in coordinate `i` (1-based).
    pub fn coordinate_embed(&self, t: &Permutation, i: u32) -> Result<Permutation, AtlasError> {
        if i == 0 || i > self.copies {
            return Err(AtlasError::CoordinateOutOfRange(i, self.copies));
        }
        Ok(t.shift((i as usize - 1) * self.block, self.degree())?)
    }

    /// `rho_i(g)`: the action of `g` on coordinate `i` (1-based). Errors if
    /// `g` moves points of block `i` outside the block.
    pub fn project(&self, g: &Permutation, i: u32) -> Result<Permutation, AtlasError> {
        if i == 0 || i > self.copies {
            return Err(AtlasError::CoordinateOutOfRange(i, self.copies));
        }
        let lo = (i as usize - 1) * self.block;
        let mut images = Vec::with_capacity(self.block);
        for p in lo..lo + self.block {
            let q = g.image(p as u32) as usize;
            if q < lo || q >= lo + self.block {
                return Err(AtlasError::NotBlockPreserving(i));
            }
            images.push((q - lo) as u32);
        }
        Ok(Permutation::from_images(images)?)
    }
}

/// `cayley_table(G)`: multiplication table of a small permutation group.
pub fn cayley_table(g: &PermGroup) -> Result<CayleyTable, AtlasError> {
    Ok(CayleyTable::from_perm_group(g, ELEMENT_CAP)?)
}

/// Textual constructor grammar:
/// `A(n) | S(n) | C(n) | PSL(2,p) | PGL(2,p) | M22 | M23 | SPEC^l | Reg(SPEC)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupSpec {
    Alternating(u32),
    Symmetric(u32),
    Cyclic(u32),
    Psl2(u64),
    Pgl2(u64),
    M22,
    M23,
    Power(Box<GroupSpec>, u32),
    Regular(Box<GroupSpec>),
}

impl GroupSpec {
    pub fn build(&self) -> Result<PermGroup, AtlasError> {
        match self {
            GroupSpec::Alternating(n) => alternating(*n),
            GroupSpec::Symmetric(n) => symmetric(*n),
            GroupSpec::Cyclic(n) => cyclic(*n),
            GroupSpec::Psl2(p) => psl2(*p),
            GroupSpec::Pgl2(p) => pgl2(*p),
            GroupSpec::M22 => mathieu22(),
            GroupSpec::M23 => mathieu23(),
            GroupSpec::Power(inner, l) => Ok(DirectPower::new(&inner.build()?, *l)?.group().clone()),
            GroupSpec::Regular(inner) => {
                let g = inner.build()?;
                Ok(cayley_table(&g)?.regular_rep())
            }
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Alternating(n) => write!(f, "A({n})"),
            GroupSpec::Symmetric(n) => write!(f, "S({n})"),
            GroupSpec::Cyclic(n) => write!(f, "C({n})"),
            GroupSpec::Psl2(p) => write!(f, "PSL(2,{p})"),
            GroupSpec::Pgl2(p) => write!(f, "PGL(2,{p})"),
            GroupSpec::M22 => write!(f, "M22"),
            GroupSpec::M23 => write!(f, "M23"),
            GroupSpec::Power(inner, l) => write!(f, "{inner}^{l}"),
            GroupSpec::Regular(inner) => write!(f, "Reg({inner})"),
        }
    }
}

impl FromStr for GroupSpec {
    type Err = AtlasError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || AtlasError::BadSpec(s.to_string());
        if let Some((head, tail)) = s.rsplit_once('^') {
            let l: u32 = tail.trim().parse().map_err(|_| bad())?;
            return Ok(GroupSpec::Power(Box::new(head.parse()?), l));
        }
        if let Some(inner) = s
            .strip_prefix("Reg(")
            .and_then(|r| r.strip_suffix(')'))
        {
            return Ok(GroupSpec::Regular(Box::new(inner.parse()?)));
        }
        match s {
            "M22" => return Ok(GroupSpec::M22),
            "M23" => return Ok(GroupSpec::M23),
            _ => {}
        }
        let parse_arg = |prefix: &str| -> Option<&str> {
            s.strip_prefix(prefix).and_then(|r| r.strip_suffix(')'))
        };
        if let Some(arg) = parse_arg("A(") {
            return Ok(GroupSpec::Alternating(arg.trim().parse().map_err(|_| bad())?));
        }
        if let Some(arg) = parse_arg("S(") {
            return Ok(GroupSpec::Symmetric(arg.trim().parse().map_err(|_| bad())?));
        }
        if let Some(arg) = parse_arg("C(") {
            return Ok(GroupSpec::Cyclic(arg.trim().parse().map_err(|_| bad())?));
        }
        if let Some(arg) = parse_arg("PSL(") {
            let (two, p) = arg.split_once(',').ok_or_else(bad)?;
            if two.trim() != "2" {
                return Err(bad());
            }
            return Ok(GroupSpec::Psl2(p.trim().parse().map_err(|_| bad())?));
        }
        if let Some(arg) = parse_arg("PGL(") {
            let (two, p) = arg.split_once(',').ok_or_else(bad)?;
            if two.trim() != "2" {
                return Err(bad());
            }
            return Ok(GroupSpec::Pgl2(p.trim().parse().map_err(|_| bad())?));
        }
        Err(bad())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_group_orders() {
        assert_eq!(alternating(5).unwrap().order(), BigUint::from(60u32));
        assert_eq!(symmetric(7).unwrap().order(), factorial(7));
        assert_eq!(cyclic(12).unwrap().order(), BigUint::from(12u32));
        assert_eq!(alternating(1).unwrap().order(), BigUint::one());
    }

    #[test]
    fn parity_membership() {
        let t = Permutation::parse("(1,2)", 7).unwrap();
        assert!(symmetric(7).unwrap().contains(&t));
        assert!(!alternating(7).unwrap().contains(&t));
    }

    #[test]
    fn psl_and_pgl_orders() {
        assert_eq!(psl2(11).unwrap().order(), BigUint::from(660u32));
        assert_eq!(pgl2(11).unwrap().order(), BigUint::from(1320u32));
        assert_eq!(psl2(5).unwrap().order(), BigUint::from(60u32));
        assert!(psl2(9).is_err());
    }

    #[test]
    fn psl_inside_pgl() {
        let psl = psl2(7).unwrap();
        let pgl = pgl2(7).unwrap();
        assert!(psl.is_subgroup_of(&pgl));
    }

    #[test]
    fn projective_points_are_normalized_and_complete() {
        for p in [5u64, 7, 11] {
            let pts = ProjectivePoint::all(p);
            assert_eq!(pts.len() as u64, p + 1, "exactly p+1 points");
            let unique: std::collections::HashSet<_> = pts.iter().copied().collect();
            assert_eq!(unique.len() as u64, p + 1);
            for (i, pt) in pts.iter().enumerate() {
                assert_eq!(pt.index() as usize, i, "index round trip");
                let (x, y) = pt.coords();
                assert!(y.value() == 1 || (y.is_zero() && x.value() == 1));
            }
            // normalization is canonical: scaling does not change the point
            let a = ProjectivePoint::new(FieldElem::new(3, p), FieldElem::new(2, p));
            let b = ProjectivePoint::new(FieldElem::new(6, p), FieldElem::new(4, p));
            assert_eq!(a, b);
        }
        assert!(ProjectivePoint::from_index(11, 11).is_infinity());
    }

    #[test]
    fn matrix_orders() {
        let r = matrix_to_perm([[1, 1], [0, 1]], 11).unwrap();
        assert_eq!(r.order(), 11);
        for p in [5u64, 7, 11, 13] {
            let s = matrix_to_perm([[0, 1], [-1, 0]], p).unwrap();
            assert_eq!(s.order(), 2, "s has order 2 in PSL(2,{p})");
        }
        assert!(matrix_to_perm([[1, 1], [1, 1]], 7).is_err());
    }

    #[test]
    fn matrix_to_perm_is_a_homomorphism() {
        let mut rng = crate::rng::SplitMix64::new(0x707);
        for p in [5u64, 7, 11, 13] {
            for _ in 0..1000 {
                let mut m = || {
                    loop {
                        let a = [
                            [rng.below(p) as i64, rng.below(p) as i64],
                            [rng.below(p) as i64, rng.below(p) as i64],
                        ];
                        if (a[0][0] * a[1][1] - a[0][1] * a[1][0]).rem_euclid(p as i64) != 0 {
                            return a;
                        }
                    }
                };
                let (a, b) = (m(), m());
                let prod = [
                    [
                        a[0][0] * b[0][0] + a[0][1] * b[1][0],
                        a[0][0] * b[0][1] + a[0][1] * b[1][1],
                    ],
                    [
                        a[1][0] * b[0][0] + a[1][1] * b[1][0],
                        a[1][0] * b[0][1] + a[1][1] * b[1][1],
                    ],
                ];
                let pa = matrix_to_perm(a, p).unwrap();
                let pb = matrix_to_perm(b, p).unwrap();
                let pprod = matrix_to_perm(prod, p).unwrap();
                assert_eq!(pa.compose(&pb).unwrap(), pprod);
            }
        }
    }

    #[test]
    fn mathieu_orders() {
        assert_eq!(mathieu23().unwrap().order(), BigUint::from(M23_ORDER));
        assert_eq!(mathieu22().unwrap().order(), BigUint::from(M22_ORDER));
        let emb = mathieu22_in_m23().unwrap();
        assert_eq!(emb.degree(), 23);
        for g in emb.generators() {
            assert_eq!(g.image(22), 22);
        }
    }

    #[test]
    fn mathieu23_is_4_transitive() {
        let m23 = mathieu23().unwrap();
        // orbit of an ordered 4-tuple under the generators
        let start = [0u32, 1, 2, 3];
        let mut seen = std::collections::HashSet::new();
        seen.insert(start);
        let mut queue = vec![start];
        while let Some(t) = queue.pop() {
            for g in m23.generators() {
                let img = [g.image(t[0]), g.image(t[1]), g.image(t[2]), g.image(t[3])];
                if seen.insert(img) {
                    queue.push(img);
                }
            }
        }
        assert_eq!(seen.len(), 23 * 22 * 21 * 20);
    }

    #[test]
    fn direct_power_basics() {
        let a5 = alternating(5).unwrap();
        let dp = DirectPower::new(&a5, 3).unwrap();
        assert_eq!(dp.degree(), 15);
        assert_eq!(
            dp.group().order(),
            BigUint::from(60u32).pow(3)
        );
        let t = Permutation::parse("(1,2,3)", 5).unwrap();
        let e1 = dp.coordinate_embed(&t, 1).unwrap();
        let e2 = dp.coordinate_embed(&t, 2).unwrap();
        assert_eq!(e1.conjugate(&dp.rotation()).unwrap(), e2);
        assert!(dp.coordinate_embed(&t, 4).is_err());
    }

    #[test]
    fn projection_extracts_coordinates() {
        let a5 = alternating(5).unwrap();
        let dp = DirectPower::new(&a5, 2).unwrap();
        let t = Permutation::parse("(1,2,3)", 5).unwrap();
        let u = Permutation::parse("(1,2,3,4,5)", 5).unwrap();
        let g = dp
            .coordinate_embed(&t, 1)
            .unwrap()
            .compose(&dp.coordinate_embed(&u, 2).unwrap())
            .unwrap();
        assert_eq!(dp.project(&g, 1).unwrap(), t);
        assert_eq!(dp.project(&g, 2).unwrap(), u);
        assert!(dp.project(&dp.rotation(), 1).is_err());
    }

    #[test]
    fn rotation_conjugation_identity_on_random_elements() {
        let a5 = alternating(5).unwrap();
        let dp = DirectPower::new(&a5, 3).unwrap();
        let rot = dp.rotation();
        for seed in 0..10 {
            let g = dp.group().random_element(seed);
            let g_rot = g.conjugate(&rot).unwrap();
            for i in 1..=3u32 {
                let j = if i == 3 { 1 } else { i + 1 };
                assert_eq!(
                    dp.project(&g, i).unwrap(),
                    dp.project(&g_rot, j).unwrap(),
                    "coordinate {i} moves to {j} under the rotation"
                );
            }
        }
    }

    #[test]
    fn regular_rep_of_a5() {
        let a5 = alternating(5).unwrap();
        let table = cayley_table(&a5).unwrap();
        let reg = table.regular_rep();
        assert_eq!(reg.degree(), 60);
        assert_eq!(reg.order(), BigUint::from(60u32));
    }

    #[test]
    fn spec_parsing_round_trip() {
        for text in [
            "A(5)",
            "S(7)",
            "C(12)",
            "PSL(2,11)",
            "PGL(2,7)",
            "M22",
            "M23",
            "A(5)^3",
            "Reg(S(3))",
            "Reg(A(5))^2",
        ] {
            let spec: GroupSpec = text.parse().unwrap();
            assert_eq!(spec.to_string(), text);
        }
        assert!("B(5)".parse::<GroupSpec>().is_err());
        assert!("PSL(3,4)".parse::<GroupSpec>().is_err());
    }

    #[test]
    fn spec_builds_groups() {
        let g: GroupSpec = "Reg(S(3))".parse().unwrap();
        let built = g.build().unwrap();
        assert_eq!(built.degree(), 6);
        assert_eq!(built.order(), BigUint::from(6u32));
        let p: GroupSpec = "C(3)^2".parse().unwrap();
        assert_eq!(p.build().unwrap().order(), BigUint::from(9u32));
    }
}
