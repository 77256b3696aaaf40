//! Regular Cayley maps as triples `(X, sigma, iota)`: validation, cached
//! invariants, isomorphism testing, direct products, census enumeration.
//!
//! A map is the data of a group `X` generated by `sigma` and an involution
//! `iota`, together with a vertex group `G` complementing `<sigma>` in `X`.
//! Vertices, edges and faces are coset counts, and the genus comes from the
//! Euler formula.

pub mod census;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::Signed;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::{perm_key, power_u, GroupError, PermGroup, CLASS_CAP};
use crate::perm::{PermError, Permutation};
use crate::skew::{biguint_from_u128, prime_divisors};

#[derive(Debug, Error)]
pub enum MapError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error("iota is the identity")]
    IotaTrivial,
    #[error("iota is not an involution (order {0})")]
    IotaNotInvolution(u128),
    #[error("sigma does not lie in X")]
    SigmaNotInX,
    #[error("iota does not lie in X")]
    IotaNotInX,
    #[error("<sigma, iota> has order {got}, X has order {expected}: not generating")]
    NotGenerating { expected: BigUint, got: BigUint },
    #[error("vertex group is not a subgroup of X")]
    VertexGroupNotInX,
    #[error("|G| * |sigma| = {got} differs from |X| = {expected}: not complementary")]
    NotComplementary { expected: BigUint, got: BigUint },
    #[error("G meets <sigma> nontrivially (a power of sigma of prime order lies in G)")]
    IntersectionNontrivial,
    #[error("euler characteristic {0} is odd")]
    OddEuler(BigInt),
    #[error("maps live in different groups X")]
    DifferentX,
    #[error("the supplied automorphism overgroup does not normalize X")]
    AutDoesNotNormalize,
    #[error("centralizer of sigma in Aut(X) is larger than <sigma>; transport search unsupported")]
    CentralizerTooLarge,
    #[error("census cross-check failed: {0}")]
    CensusCheck(String),
}

/// A validated regular Cayley map.
#[derive(Debug, Clone)]
pub struct RegularCayleyMap {
    x: PermGroup,
    vertex_group: PermGroup,
    sigma: Permutation,
    iota: Permutation,
    vertex_valency: u128,
    face_valency: u128,
    n_vertices: BigUint,
    n_edges: BigUint,
    n_faces: BigUint,
    euler_characteristic: BigInt,
    genus: BigUint,
}

/// Validate the triple `(X, sigma, iota)` with vertex group `G` and cache the
/// map invariants. Every violated condition is reported by name.
pub fn make_map(
    x: &PermGroup,
    vertex_group: &PermGroup,
    sigma: &Permutation,
    iota: &Permutation,
) -> Result<RegularCayleyMap, MapError> {
    if iota.is_identity() {
        return Err(MapError::IotaTrivial);
    }
    let iota_order = iota.order();
    if iota_order != 2 {
        return Err(MapError::IotaNotInvolution(iota_order));
    }
    if !x.contains(sigma) {
        return Err(MapError::SigmaNotInX);
    }
    if !x.contains(iota) {
        return Err(MapError::IotaNotInX);
    }
    let x_order = x.order();
    let generated = PermGroup::new(x.degree(), vec![sigma.clone(), iota.clone()])?;
    let got = generated.order();
    if got != x_order {
        return Err(MapError::NotGenerating {
            expected: x_order,
            got,
        });
    }
    if !vertex_group.is_subgroup_of(x) {
        return Err(MapError::VertexGroupNotInX);
    }
    let sigma_order = sigma.order();
    let complement = vertex_group.order() * biguint_from_u128(sigma_order);
    if complement != x_order {
        return Err(MapError::NotComplementary {
            expected: x_order,
            got: complement,
        });
    }
    for q in prime_divisors(sigma_order) {
        if vertex_group.contains(&power_u(sigma, sigma_order / q)) {
            return Err(MapError::IntersectionNontrivial);
        }
    }

    let face = sigma.compose(iota).expect("equal degree").order();
    let n_vertices = &x_order / biguint_from_u128(sigma_order);
    let n_edges = &x_order / BigUint::from(2u32);
    let n_faces = &x_order / biguint_from_u128(face);
    let chi = BigInt::from(n_vertices.clone()) - BigInt::from(n_edges.clone())
        + BigInt::from(n_faces.clone());
    if chi.is_odd() {
        return Err(MapError::OddEuler(chi));
    }
    let genus_int = (BigInt::from(2) - &chi) / BigInt::from(2);
    assert!(
        !genus_int.is_negative(),
        "genus is nonnegative for any valid map"
    );
    let genus = genus_int.to_biguint().expect("nonnegative");
    Ok(RegularCayleyMap {
        x: x.clone(),
        vertex_group: vertex_group.clone(),
        sigma: sigma.clone(),
        iota: iota.clone(),
        vertex_valency: sigma_order,
        face_valency: face,
        n_vertices,
        n_edges,
        n_faces,
        euler_characteristic: chi,
        genus,
    })
}

impl RegularCayleyMap {
    pub fn x(&self) -> &PermGroup {
        &self.x
    }

    pub fn vertex_group(&self) -> &PermGroup {
        &self.vertex_group
    }

    pub fn sigma(&self) -> &Permutation {
        &self.sigma
    }

    pub fn iota(&self) -> &Permutation {
        &self.iota
    }

    pub fn vertex_valency(&self) -> u128 {
        self.vertex_valency
    }

    pub fn face_valency(&self) -> u128 {
        self.face_valency
    }

    pub fn n_vertices(&self) -> &BigUint {
        &self.n_vertices
    }

    pub fn n_edges(&self) -> &BigUint {
        &self.n_edges
    }

    pub fn n_faces(&self) -> &BigUint {
        &self.n_faces
    }

    pub fn euler_characteristic(&self) -> &BigInt {
        &self.euler_characteristic
    }

    pub fn genus(&self) -> &BigUint {
        &self.genus
    }

    pub fn export(&self) -> MapExport {
        MapExport {
            degree: self.x.degree(),
            sigma: self.sigma.to_string(),
            iota: self.iota.to_string(),
            vertex_group: self
                .vertex_group
                .generators()
                .iter()
                .map(|g| g.to_string())
                .collect(),
            x_order: self.x.order().to_string(),
            vertex_valency: self.vertex_valency.to_string(),
            face_valency: self.face_valency.to_string(),
            n_vertices: self.n_vertices.to_string(),
            n_edges: self.n_edges.to_string(),
            n_faces: self.n_faces.to_string(),
            euler_characteristic: self.euler_characteristic.to_string(),
            genus: self.genus.to_string(),
        }
    }

    /// Rebuild and revalidate a map from its export: `X` is regenerated as
    /// `<sigma, iota>`.
    pub fn from_export(e: &MapExport) -> Result<RegularCayleyMap, MapError> {
        let sigma = Permutation::parse(&e.sigma, e.degree)?;
        let iota = Permutation::parse(&e.iota, e.degree)?;
        let x = PermGroup::new(e.degree, vec![sigma.clone(), iota.clone()])?;
        let gens = e
            .vertex_group
            .iter()
            .map(|t| Permutation::parse(t, e.degree))
            .collect::<Result<Vec<_>, _>>()?;
        let g = PermGroup::new(e.degree, gens)?;
        make_map(&x, &g, &sigma, &iota)
    }

    /// `(vertex valency, face valency, genus)`: the isomorphism-invariant
    /// signature used in cross-checks.
    pub fn signature(&self) -> (u128, u128, BigUint) {
        (self.vertex_valency, self.face_valency, self.genus.clone())
    }
}

/// On-disk shape of a single map; counts are decimal strings since orders
/// overflow fixed-width integers already for moderate alternating powers.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MapExport {
    pub degree: usize,
    pub sigma: String,
    pub iota: String,
    pub vertex_group: Vec<String>,
    pub x_order: String,
    pub vertex_valency: String,
    pub face_valency: String,
    pub n_vertices: String,
    pub n_edges: String,
    pub n_faces: String,
    pub euler_characteristic: String,
    pub genus: String,
}

/// Map isomorphism: existence of `a` in the supplied automorphism overgroup
/// with `sigma1^a = sigma2` and `iota1^a = iota2`. The element transporting
/// `sigma1` onto `sigma2` is found by breadth-first search over the class
/// with witnesses, then adjusted through the centralizer of `sigma2`, which
/// must be `<sigma2>` itself (true in every census case here: the centralizer
/// of a long cycle).
pub fn isomorphic(
    m1: &RegularCayleyMap,
    m2: &RegularCayleyMap,
    aut: &PermGroup,
) -> Result<bool, MapError> {
    if m1.x.degree() != m2.x.degree() || m1.x.order() != m2.x.order() {
        return Err(MapError::DifferentX);
    }
    if !aut.normalizes(&m1.x) {
        return Err(MapError::AutDoesNotNormalize);
    }
    if m1.signature() != m2.signature() {
        return Ok(false);
    }
    // transport sigma1 to sigma2 under aut-conjugation
    let mut witness: std::collections::HashMap<Vec<u16>, Permutation> =
        std::collections::HashMap::new();
    witness.insert(perm_key(&m1.sigma), Permutation::identity(aut.degree()));
    let mut queue = std::collections::VecDeque::new();
    queue.push_back(m1.sigma.clone());
    let mut transport = (m1.sigma == m2.sigma).then(|| Permutation::identity(aut.degree()));
    'bfs: while transport.is_none() {
        let Some(cur) = queue.pop_front() else {
            break;
        };
        let w = witness[&perm_key(&cur)].clone();
        for gen in aut.generators() {
            let next = cur.conjugate(gen).expect("equal degree");
            let k = perm_key(&next);
            if !witness.contains_key(&k) {
                if witness.len() >= CLASS_CAP {
                    return Err(MapError::Group(GroupError::ClassCapExceeded {
                        reached: witness.len(),
                        cap: CLASS_CAP,
                    }));
                }
                let w_next = w.compose(gen).expect("equal degree");
                if next == m2.sigma {
                    transport = Some(w_next.clone());
                    witness.insert(k, w_next);
                    break 'bfs;
                }
                witness.insert(k, w_next);
                queue.push_back(next);
            }
        }
    }
    let Some(a0) = transport else {
        return Ok(false);
    };
    debug_assert_eq!(m1.sigma.conjugate(&a0).expect("equal degree"), m2.sigma);
    // adjust within the centralizer of sigma2
    let cent = aut.centralizer_order(&m2.sigma)?;
    if cent != biguint_from_u128(m2.vertex_valency) {
        return Err(MapError::CentralizerTooLarge);
    }
    let mut c = Permutation::identity(aut.degree());
    for _ in 0..m2.vertex_valency {
        let a = a0.compose(&c).expect("equal degree");
        if m1.iota.conjugate(&a).expect("equal degree") == m2.iota {
            return Ok(true);
        }
        c = c.compose(&m2.sigma).expect("equal degree");
    }
    Ok(false)
}

/// Direct product of two maps: block permutations `sigma = (sigma1, sigma2)`
/// and `iota = (iota1, iota2)` on the disjoint union of the point sets,
/// `X = <sigma, iota>`, vertex group `G1 x G2`. Returns the validated map or
/// the named condition that fails.
pub fn direct_product(
    m1: &RegularCayleyMap,
    m2: &RegularCayleyMap,
) -> Result<RegularCayleyMap, MapError> {
    direct_product_raw(
        &m1.vertex_group,
        &m1.sigma,
        &m1.iota,
        &m2.vertex_group,
        &m2.sigma,
        &m2.iota,
    )
}

/// Product assembly from raw triples; exposed so degenerate factors (an
/// identity second factor on one point) can be combined in tests and tools.
pub fn direct_product_raw(
    g1: &PermGroup,
    sigma1: &Permutation,
    iota1: &Permutation,
    g2: &PermGroup,
    sigma2: &Permutation,
    iota2: &Permutation,
) -> Result<RegularCayleyMap, MapError> {
    let d1 = sigma1.degree();
    let d2 = sigma2.degree();
    let n = d1 + d2;
    let sigma = sigma1.direct_sum(sigma2);
    let iota = iota1.direct_sum(iota2);
    let x = PermGroup::new(n, vec![sigma.clone(), iota.clone()])?;
    let mut g_gens: Vec<Permutation> = g1.generators().iter().map(|g| g.direct_sum(&Permutation::identity(d2))).collect();
    for g in g2.generators() {
        g_gens.push(g.shift(d1, n)?);
    }
    let g = PermGroup::new(n, g_gens)?;
    make_map(&x, &g, &sigma, &iota)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atlas::{alternating, pgl2, psl2};

    fn p(text: &str, degree: usize) -> Permutation {
        Permutation::parse(text, degree).unwrap()
    }

    /// The pentagonal dipole: X is dihedral of order 10 in its natural
    /// degree-5 action, the vertex group is generated by the reflection.
    fn dihedral_dipole() -> RegularCayleyMap {
        let sigma = p("(1,2,3,4,5)", 5);
        let iota = p("(2,5)(3,4)", 5);
        let x = PermGroup::new(5, vec![sigma.clone(), iota.clone()]).unwrap();
        let g = PermGroup::new(5, vec![iota.clone()]).unwrap();
        make_map(&x, &g, &sigma, &iota).unwrap()
    }

    #[test]
    fn spherical_dipole_has_genus_zero() {
        let m = dihedral_dipole();
        assert_eq!(m.vertex_valency(), 5);
        assert_eq!(m.face_valency(), 2);
        assert_eq!(m.n_vertices(), &BigUint::from(2u32));
        assert_eq!(m.n_edges(), &BigUint::from(5u32));
        assert_eq!(m.n_faces(), &BigUint::from(5u32));
        assert_eq!(m.genus(), &BigUint::from(0u32));
    }

    #[test]
    fn a7_map_from_full_cycle_and_double_transposition() {
        let x = alternating(7).unwrap();
        let g = x.pointwise_stabilizer(&[6]).unwrap();
        let sigma = p("(1,2,3,4,5,6,7)", 7);
        let iota = p("(1,2)(3,4)", 7);
        let m = make_map(&x, &g, &sigma, &iota).unwrap();
        assert_eq!(m.vertex_valency(), 7);
        assert_eq!(
            m.face_valency(),
            sigma.compose(&iota).unwrap().order(),
            "face valency is the order of sigma * iota"
        );
    }

    #[test]
    fn iota_identity_is_rejected() {
        let x = alternating(7).unwrap();
        let g = x.pointwise_stabilizer(&[6]).unwrap();
        let sigma = p("(1,2,3,4,5,6,7)", 7);
        let id = Permutation::identity(7);
        assert!(matches!(
            make_map(&x, &g, &sigma, &id),
            Err(MapError::IotaTrivial)
        ));
    }

    #[test]
    fn non_generating_pair_is_rejected() {
        let x = alternating(7).unwrap();
        let g = x.pointwise_stabilizer(&[6]).unwrap();
        let sigma = p("(1,2,3)", 7);
        let iota = p("(1,2)(3,4)", 7);
        assert!(matches!(
            make_map(&x, &g, &sigma, &iota),
            Err(MapError::NotGenerating { .. })
        ));
    }

    #[test]
    fn psl2_11_map_counts() {
        let x = psl2(11).unwrap();
        let g = census::a5_inside_psl2_11(&x).unwrap();
        // any order-11 element and generating involution
        let sigma = x.find_element_of_order(11, 7).unwrap();
        let elements = x.elements(2000).unwrap();
        let iota = elements
            .list
            .iter()
            .find(|e| {
                e.order() == 2
                    && PermGroup::new(12, vec![sigma.clone(), (*e).clone()])
                        .unwrap()
                        .order()
                        == x.order()
            })
            .expect("a generating involution exists")
            .clone();
        let m = make_map(&x, &g, &sigma, &iota).unwrap();
        assert_eq!(m.n_vertices(), &BigUint::from(60u32));
        assert_eq!(m.n_edges(), &BigUint::from(330u32));
        if m.face_valency() == 11 {
            assert_eq!(m.genus(), &BigUint::from(106u32));
        }
    }

    #[test]
    fn isomorphic_is_reflexive_and_respects_sigma_conjugates() {
        let x = alternating(7).unwrap();
        let g = x.pointwise_stabilizer(&[6]).unwrap();
        let sigma = p("(1,2,3,4,5,6,7)", 7);
        let iota = p("(1,2)(3,4)", 7);
        let m = make_map(&x, &g, &sigma, &iota).unwrap();
        let aut = crate::atlas::symmetric(7).unwrap();
        assert!(isomorphic(&m, &m, &aut).unwrap());
        // conjugating iota by sigma gives an isomorphic map
        let iota2 = iota.conjugate(&sigma).unwrap();
        let m2 = make_map(&x, &g, &sigma, &iota2).unwrap();
        assert!(isomorphic(&m, &m2, &aut).unwrap());
    }

    #[test]
    fn isomorphic_distinguishes_face_valencies() {
        let x = psl2(11).unwrap();
        let g = census::a5_inside_psl2_11(&x).unwrap();
        let aut = pgl2(11).unwrap();
        let census = census::census_a5(1).unwrap();
        let reps = census.maps(&x, &g).unwrap();
        let mut seen_noniso = false;
        for i in 0..reps.len() {
            for j in i + 1..reps.len() {
                if reps[i].face_valency() != reps[j].face_valency() {
                    assert!(!isomorphic(&reps[i], &reps[j], &aut).unwrap());
                    seen_noniso = true;
                }
            }
        }
        assert!(seen_noniso);
    }

    #[test]
    fn product_with_identity_factor_keeps_invariants() {
        let m = dihedral_dipole();
        let trivial_g = PermGroup::trivial(1);
        let id1 = Permutation::identity(1);
        let prod = direct_product_raw(
            m.vertex_group(),
            m.sigma(),
            m.iota(),
            &trivial_g,
            &id1,
            &id1,
        )
        .unwrap();
        assert_eq!(prod.signature(), m.signature());
        assert_eq!(prod.x().order(), m.x().order());
    }

    #[test]
    fn product_of_dipole_with_itself_collapses() {
        // equal sigma orders: <(s1,s2)> is a proper diagonal-ish subgroup and
        // the complement condition fails
        let m = dihedral_dipole();
        match direct_product(&m, &m) {
            Err(MapError::NotComplementary { .. })
            | Err(MapError::NotGenerating { .. })
            | Err(MapError::VertexGroupNotInX) => {}
            other => panic!("expected a named product rejection, got {other:?}"),
        }
    }

    #[test]
    fn export_round_trip() {
        let m = dihedral_dipole();
        let e = m.export();
        let text = serde_json::to_string_pretty(&e).unwrap();
        let back: MapExport = serde_json::from_str(&text).unwrap();
        let m2 = RegularCayleyMap::from_export(&back).unwrap();
        assert_eq!(m2.signature(), m.signature());
        assert_eq!(m2.sigma(), m.sigma());
    }
}
