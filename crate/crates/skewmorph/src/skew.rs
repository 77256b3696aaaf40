//! Skew-morphisms and skew-product groups.
//!
//! A skew-morphism of a group `G` is a permutation `sigma` of the elements of
//! `G` fixing the identity, together with a power function `pi` such that
//! `sigma(g*h) = sigma(g) * sigma^pi(g)(h)` for all `g, h`. The product of
//! the left regular representation `L_G` with `<sigma>` is then a permutation
//! group on `G` of order `|G| * |sigma|`, the skew-product group; the core of
//! `L_G` in it (all of `L_G`, trivial, or strictly between) classifies the
//! skew-morphism as balanced, simple or mixed.

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::One;
use serde::Serialize;
use thiserror::Error;

use crate::atlas::CayleyTable;
use crate::group::{power_u, GroupError, PermGroup};
use crate::perm::Permutation;
use crate::rng::SplitMix64;

/// Exhaustive axiom verification up to this group order; sampled above.
pub const EXHAUSTIVE_CAP: usize = 5000;
/// Number of fixed-seed axiom samples used above the exhaustive cap.
pub const SAMPLE_BUDGET: usize = 100_000;
/// Cap on the order of a candidate skew-morphism permutation.
pub const SIGMA_ORDER_CAP: u128 = 1_000_000;
/// Brute-force enumeration cap.
pub const TINY_CAP: usize = 12;

#[derive(Debug, Error)]
pub enum SkewError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("sigma has degree {0}, table has order {1}")]
    DegreeMismatch(usize, usize),
    #[error("sigma moves the identity element")]
    MovesIdentity,
    #[error("sigma order {0} exceeds the verification cap")]
    OrderCapExceeded(u128),
    #[error(
        "not a skew-morphism: no power of sigma satisfies the axiom at g={g_name}, h={h_name}"
    )]
    Rejected {
        g: u32,
        h: u32,
        g_name: String,
        h_name: String,
    },
    #[error("group order {0} exceeds the cap {1}")]
    SizeCap(usize, usize),
    #[error("skew-product order mismatch: expected {expected}, chain computed {got}")]
    ProductOrder { expected: BigUint, got: BigUint },
    #[error("commuting relation L_g . sigma = sigma^pi(g) . L_sigma(g) fails at g={0}")]
    RelationFailed(u32),
    #[error("<sigma> is not core-free in the skew-product")]
    SigmaNotCoreFree,
    #[error("factorization hypothesis violated: {0}")]
    Factorization(&'static str),
    #[error("element of the subgroup failed to factor as sigma(g) * y^i")]
    FactorizationIncomplete,
    #[error("decomposition check failed: {0}")]
    Decomposition(&'static str),
    #[error("classification is {0}, not mixed")]
    NotMixed(SkewKind),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SkewKind {
    Balanced,
    Simple,
    Mixed,
}

impl std::fmt::Display for SkewKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SkewKind::Balanced => write!(f, "balanced"),
            SkewKind::Simple => write!(f, "simple"),
            SkewKind::Mixed => write!(f, "mixed"),
        }
    }
}

/// A verified skew-morphism on an explicit multiplication table.
pub struct SkewMorphism {
    base: Arc<CayleyTable>,
    sigma: Permutation,
    order: u128,
    pi: Vec<u32>,
    exhaustive: bool,
}

impl std::fmt::Debug for SkewMorphism {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "SkewMorphism(sigma {}, order {}, |G| {})",
            self.sigma,
            self.order,
            self.base.n()
        )
    }
}

impl SkewMorphism {
    pub fn base(&self) -> &Arc<CayleyTable> {
        &self.base
    }

    pub fn sigma(&self) -> &Permutation {
        &self.sigma
    }

    pub fn order(&self) -> u128 {
        self.order
    }

    /// Power-function value at element index `g`, as a residue in
    /// `[0, |sigma|)`.
    pub fn pi(&self, g: u32) -> u32 {
        self.pi[g as usize]
    }

    pub fn pi_table(&self) -> &[u32] {
        &self.pi
    }

    pub fn apply(&self, g: u32) -> u32 {
        self.sigma.image(g)
    }

    /// Whether the axiom was checked on all pairs (small groups) or sampled.
    pub fn verified_exhaustively(&self) -> bool {
        self.exhaustive
    }

    /// `pi == 1` everywhere is exactly the automorphism case.
    pub fn is_automorphism(&self) -> bool {
        let one = if self.order == 1 { 0 } else { 1 };
        self.pi.iter().all(|&k| k == one)
    }

    pub fn export(&self, group_spec: &str, kind: SkewKind, core_order: &BigUint) -> SkewExport {
        SkewExport {
            group_spec: group_spec.to_string(),
            order_sigma: self.order.to_string(),
            images: Some(self.sigma.images().to_vec()),
            pi: Some(self.pi.clone()),
            kind: kind.to_string(),
            core_order: core_order.to_string(),
        }
    }
}

/// JSON shape for a skew-morphism. Image and power tables are element-index
/// vectors and are omitted above the materialization cap.
#[derive(Debug, Serialize)]
pub struct SkewExport {
    pub group_spec: String,
    pub order_sigma: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub images: Option<Vec<u32>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pi: Option<Vec<u32>>,
    pub kind: String,
    pub core_order: String,
}

/// Check the skew-morphism axiom for `sigma` on `base` and compute the power
/// function. For each `g` the candidate exponent is pinned by a probe element
/// on a longest `sigma`-cycle, then verified against every `h` (exhaustively
/// up to [`EXHAUSTIVE_CAP`], on fixed-seed samples above).
pub fn verify_skew(
    base: &Arc<CayleyTable>,
    sigma: &Permutation,
) -> Result<SkewMorphism, SkewError> {
    let n = base.n();
    if sigma.degree() != n {
        return Err(SkewError::DegreeMismatch(sigma.degree(), n));
    }
    if sigma.image(0) != 0 {
        return Err(SkewError::MovesIdentity);
    }
    let ord = sigma.order();
    if ord > SIGMA_ORDER_CAP || ord.saturating_mul(n as u128) > 50_000_000 {
        return Err(SkewError::OrderCapExceeded(ord));
    }
    if ord == 1 {
        return Ok(SkewMorphism {
            base: Arc::clone(base),
            sigma: sigma.clone(),
            order: 1,
            pi: vec![0; n],
            exhaustive: true,
        });
    }

    // A point on a longest cycle of sigma pins the exponent modulo that
    // cycle's length.
    let cycles = sigma.cycles();
    let longest = cycles
        .cycles()
        .iter()
        .max_by_key(|c| c.len())
        .expect("sigma is not the identity");
    let cycle_len = longest.len() as u128;
    let h_star = longest[0];
    let mut pos_on_cycle: HashMap<u32, u128> = HashMap::new();
    for (i, &p) in longest.iter().enumerate() {
        pos_on_cycle.insert(p, i as u128);
    }
    let reps = ord / cycle_len;

    let exhaustive = n <= EXHAUSTIVE_CAP;
    let per_g_samples = (SAMPLE_BUDGET / n).max(4);
    let mut power_cache: HashMap<u128, Vec<u32>> = HashMap::new();
    let mut pi = vec![0u32; n];
    let mut rng = SplitMix64::new(0x5eed0a);

    for g in 0..n as u32 {
        let sg = sigma.image(g);
        let sg_inv = base.inv(sg);
        let needed = base.mul(sg_inv, sigma.image(base.mul(g, h_star)));
        let Some(&p_needed) = pos_on_cycle.get(&needed) else {
            return Err(reject(base, g, h_star));
        };
        let p_star = pos_on_cycle[&h_star];
        let k0 = (p_needed + cycle_len - p_star) % cycle_len;
        let mut found = None;
        let mut witness_h = h_star;
        't: for t in 0..reps {
            let k = k0 + t * cycle_len;
            let sk = power_cache
                .entry(k)
                .or_insert_with(|| power_u(sigma, k).images().to_vec());
            let check =
                |h: u32| -> bool { sigma.image(base.mul(g, h)) == base.mul(sg, sk[h as usize]) };
            if exhaustive {
                for h in 0..n as u32 {
                    if !check(h) {
                        witness_h = h;
                        continue 't;
                    }
                }
            } else {
                for _ in 0..per_g_samples {
                    let h = rng.below(n as u64) as u32;
                    if !check(h) {
                        witness_h = h;
                        continue 't;
                    }
                }
            }
            found = Some(k);
            break;
        }
        match found {
            Some(k) => pi[g as usize] = k as u32,
            None => return Err(reject(base, g, witness_h)),
        }
    }
    debug_assert_eq!(pi[0] as u128, 1 % ord, "pi is 1 at the identity");
    Ok(SkewMorphism {
        base: Arc::clone(base),
        sigma: sigma.clone(),
        order: ord,
        pi,
        exhaustive,
    })
}

fn reject(base: &Arc<CayleyTable>, g: u32, h: u32) -> SkewError {
    SkewError::Rejected {
        g,
        h,
        g_name: base.name(g).to_string(),
        h_name: base.name(h).to_string(),
    }
}

/// The skew-product group `X = <L_G, sigma>` on `|G|` points, with its core
/// data and classification.
pub struct SkewProduct {
    pub x: PermGroup,
    pub l_g: PermGroup,
    pub sigma: Permutation,
    pub kind: SkewKind,
    pub core: PermGroup,
}

pub fn skew_product(sm: &SkewMorphism) -> Result<SkewProduct, SkewError> {
    let base = sm.base();
    let n = base.n();
    let l_g = base.regular_rep();
    if l_g.order() != BigUint::from(n) {
        return Err(SkewError::ProductOrder {
            expected: BigUint::from(n),
            got: l_g.order(),
        });
    }
    let mut gens = l_g.generators().to_vec();
    gens.push(sm.sigma().clone());
    let x = PermGroup::new(n, gens)?;
    let expected = BigUint::from(n) * biguint_from_u128(sm.order());
    let got = x.order();
    if got != expected {
        return Err(SkewError::ProductOrder { expected, got });
    }

    // L_g . sigma = sigma^pi(g) . L_sigma(g): checked on every element for
    // small tables and on a fixed-seed sample otherwise. A failure here is a
    // bug in verify_skew or the engine, not bad input.
    let mut rng = SplitMix64::new(0x5eed5b);
    let sample: Vec<u32> = if n <= 512 {
        (0..n as u32).collect()
    } else {
        (0..64).map(|_| rng.below(n as u64) as u32).collect()
    };
    for g in sample {
        let lhs = base
            .left_translation(g)
            .compose(sm.sigma())
            .expect("equal degree");
        let rhs = power_u(sm.sigma(), sm.pi(g) as u128)
            .compose(&base.left_translation(sm.apply(g)))
            .expect("equal degree");
        if lhs != rhs {
            return Err(SkewError::RelationFailed(g));
        }
    }

    let core = x.core_of_subgroup(&l_g)?;
    let kind = kind_from_core(&core, &l_g);
    let sigma_group = PermGroup::new(n, vec![sm.sigma().clone()])?;
    if x.core_of_subgroup(&sigma_group)?.order() != BigUint::one() {
        return Err(SkewError::SigmaNotCoreFree);
    }
    Ok(SkewProduct {
        x,
        l_g,
        sigma: sm.sigma().clone(),
        kind,
        core,
    })
}

fn kind_from_core(core: &PermGroup, g: &PermGroup) -> SkewKind {
    if core.order() == g.order() {
        SkewKind::Balanced
    } else if core.order() == BigUint::one() {
        SkewKind::Simple
    } else {
        SkewKind::Mixed
    }
}

/// Classify `(X, G)` by the core of `G` in `X`: core equal to `G` is
/// balanced, trivial core is simple, anything strictly between is mixed.
pub fn classify(x: &PermGroup, g: &PermGroup) -> Result<(SkewKind, PermGroup), SkewError> {
    let core = x.core_of_subgroup(g)?;
    Ok((kind_from_core(&core, g), core))
}

/// A skew-morphism presented by a complementary factorization `X = G <y>`:
/// images are computed on demand, so the underlying group may be far larger
/// than any explicit table. Evaluation is pure, so concurrent reads agree.
pub struct FactorizedSkew {
    x: PermGroup,
    g: PermGroup,
    y: Permutation,
    y_order: u128,
    y_inv_powers: Vec<Permutation>,
}

/// Derive the skew-morphism of `G` from the factorization `X = G <y>` with
/// `<y>` cyclic, core-free and meeting `G` trivially: each `g * y` strips to
/// an element of `G` by a unique inverse power of `y`, which defines
/// `sigma(g)` and `pi(g)`.
pub fn from_factorization(
    x: &PermGroup,
    g: &PermGroup,
    y: &Permutation,
) -> Result<FactorizedSkew, SkewError> {
    if !g.is_subgroup_of(x) {
        return Err(SkewError::Factorization("G is not a subgroup of X"));
    }
    if !x.contains(y) {
        return Err(SkewError::Factorization("y is not an element of X"));
    }
    let y_order = y.order();
    if biguint_from_u128(y_order) * g.order() != x.order() {
        return Err(SkewError::Factorization("|G| * |y| differs from |X|"));
    }
    for q in prime_divisors(y_order) {
        if g.contains(&power_u(y, y_order / q)) {
            return Err(SkewError::Factorization("<y> meets G nontrivially"));
        }
    }
    let y_group = PermGroup::new(x.degree(), vec![y.clone()])?;
    if x.core_of_subgroup(&y_group)?.order() != BigUint::one() {
        return Err(SkewError::Factorization("<y> is not core-free in X"));
    }
    let mut y_inv_powers = Vec::with_capacity(y_order as usize);
    let y_inv = y.inverse();
    let mut acc = Permutation::identity(x.degree());
    for _ in 0..y_order {
        y_inv_powers.push(acc.clone());
        acc = acc.compose(&y_inv).expect("equal degree");
    }
    Ok(FactorizedSkew {
        x: x.clone(),
        g: g.clone(),
        y: y.clone(),
        y_order,
        y_inv_powers,
    })
}

impl FactorizedSkew {
    pub fn x(&self) -> &PermGroup {
        &self.x
    }

    pub fn group(&self) -> &PermGroup {
        &self.g
    }

    pub fn y(&self) -> &Permutation {
        &self.y
    }

    pub fn order(&self) -> u128 {
        self.y_order
    }

    /// `sigma(g)` and `pi(g)` for a group element given as a permutation.
    pub fn eval(&self, elem: &Permutation) -> Result<(Permutation, u32), SkewError> {
        if !self.g.contains(elem) {
            return Err(SkewError::Factorization("element is not in G"));
        }
        let w = elem.compose(&self.y).expect("equal degree");
        for i in 0..self.y_order {
            let cand = self.y_inv_powers[i as usize]
                .compose(&w)
                .expect("equal degree");
            if self.g.contains(&cand) {
                return Ok((cand, i as u32));
            }
        }
        Err(SkewError::FactorizationIncomplete)
    }

    /// Materialize the explicit skew-morphism on the multiplication table of
    /// `G`. The result is re-verified through [`verify_skew`] and the power
    /// functions are checked to agree.
    pub fn materialize(&self, cap: usize) -> Result<SkewMorphism, SkewError> {
        if self.g.order() > BigUint::from(cap) {
            return Err(SkewError::SizeCap(cap, cap));
        }
        let table = Arc::new(
            crate::atlas::cayley_table(&self.g).map_err(|_| SkewError::SizeCap(cap, cap))?,
        );
        let n = table.n();
        let mut images = vec![0u32; n];
        let mut pis = vec![0u32; n];
        for idx in 0..n as u32 {
            let elem = table.underlying(idx).expect("perm-backed table").clone();
            let (img, i) = self.eval(&elem)?;
            images[idx as usize] = table
                .position(&img)
                .ok_or(SkewError::FactorizationIncomplete)?;
            pis[idx as usize] = i;
        }
        let sigma = Permutation::from_images(images).map_err(GroupError::from)?;
        let sm = verify_skew(&table, &sigma)?;
        for g in 0..n as u32 {
            if sm.pi(g) as u128 % sm.order() != pis[g as usize] as u128 % sm.order() {
                return Err(SkewError::Decomposition(
                    "factorization power function disagrees with the verified one",
                ));
            }
        }
        Ok(sm)
    }
}

/// Mixed-decomposition data: `X = X1 x X2` with `X1 = G1 : <sigma^i>` and
/// `X2 = G2 <tau>`, where `G1` is the core of `G` in `X`,
/// `sigma^(|sigma|/i)` splits as `g_part * tau`, `g_part` is fixed by
/// `sigma^i`, and `|g_part|` divides `|tau|`.
#[derive(Debug)]
pub struct MixedDecomposition {
    pub core: PermGroup,
    pub i: u128,
    pub x1: PermGroup,
    pub x2: PermGroup,
    pub g2: PermGroup,
    pub g_part: Permutation,
    pub tau: Permutation,
    pub tau_order: u128,
}

/// Decompose a mixed skew-product `(X, G, sigma)`. The direct factors are
/// located through the orbit structure of `X` (the mixed products built in
/// this crate have support-disjoint factors); every side condition is
/// re-verified and any failure is reported as a named check.
pub fn decompose_mixed(
    x: &PermGroup,
    g: &PermGroup,
    sigma: &Permutation,
) -> Result<MixedDecomposition, SkewError> {
    let (kind, core) = classify(x, g)?;
    if kind != SkewKind::Mixed {
        return Err(SkewError::NotMixed(kind));
    }

    let orbits = x.orbits();
    if orbits.len() > 16 {
        return Err(SkewError::Decomposition(
            "too many orbits for factor search",
        ));
    }
    let mut split: Option<(PermGroup, PermGroup, Vec<u32>)> = None;
    for mask in 1u32..(1u32 << orbits.len()) - 1 {
        let mut s_points = Vec::new();
        let mut rest_points = Vec::new();
        for (oi, orbit) in orbits.iter().enumerate() {
            if mask & (1 << oi) != 0 {
                s_points.extend_from_slice(orbit);
            } else {
                rest_points.extend_from_slice(orbit);
            }
        }
        let x1 = x.pointwise_stabilizer(&rest_points)?;
        if !core.is_subgroup_of(&x1) {
            continue;
        }
        let x2 = x.pointwise_stabilizer(&s_points)?;
        // the second factor is the simple side of the decomposition; a
        // support split can also realize X1 x X2 with a cyclic part pushed
        // into X2, which the simplicity test rejects
        if x1.order() * x2.order() == x.order() && looks_simple(&x2)? {
            split = Some((x1, x2, s_points));
            break;
        }
    }
    let Some((x1, x2, s_points)) = split else {
        return Err(SkewError::Decomposition(
            "no support-split direct factorization X = X1 x X2 found",
        ));
    };
    for a in x1.generators() {
        for b in x2.generators() {
            if a.compose(b).expect("equal degree") != b.compose(a).expect("equal degree") {
                return Err(SkewError::Decomposition("factors do not commute"));
            }
        }
    }

    let ord = sigma.order();
    let q = biguint_to_u128(&(x1.order() / core.order()))
        .ok_or(SkewError::Decomposition("factor index too large"))?;
    if q == 0 || !ord.is_multiple_of(q) {
        return Err(SkewError::Decomposition(
            "|X1|/|G1| does not divide |sigma|",
        ));
    }
    let i = ord / q;
    let sigma_i = power_u(sigma, i);
    if sigma_i.order() != q {
        return Err(SkewError::Decomposition("sigma^i has the wrong order"));
    }
    if !x1.contains(&sigma_i) {
        return Err(SkewError::Decomposition("sigma^i does not lie in X1"));
    }
    {
        let mut gens = core.generators().to_vec();
        gens.push(sigma_i.clone());
        let rebuilt = PermGroup::new(x.degree(), gens)?;
        if rebuilt.order() != x1.order() {
            return Err(SkewError::Decomposition("X1 is not G1 : <sigma^i>"));
        }
    }

    let j = q;
    let sigma_j = power_u(sigma, j);
    // split sigma^j over the two supports
    let degree = x.degree();
    let mut in_s = vec![false; degree];
    for &p in &s_points {
        in_s[p as usize] = true;
    }
    let mut g_images: Vec<u32> = (0..degree as u32).collect();
    let mut t_images: Vec<u32> = (0..degree as u32).collect();
    for p in 0..degree {
        let img = sigma_j.image(p as u32);
        if in_s[p] {
            g_images[p] = img;
        } else {
            t_images[p] = img;
        }
    }
    let bad_split = SkewError::Decomposition("sigma^j does not respect the split");
    let g_part = Permutation::from_images(g_images).map_err(|_| bad_split)?;
    let tau = Permutation::from_images(t_images)
        .map_err(|_| SkewError::Decomposition("sigma^j does not respect the split"))?;
    if g_part.compose(&tau).expect("equal degree") != sigma_j {
        return Err(SkewError::Decomposition("sigma^j != g_part * tau"));
    }
    if !core.contains(&g_part) {
        return Err(SkewError::Decomposition("g_part is not in G1"));
    }
    if !x2.contains(&tau) {
        return Err(SkewError::Decomposition("tau is not in X2"));
    }
    let tau_order = tau.order();
    if g_part.conjugate(&sigma_i).expect("equal degree") != g_part {
        return Err(SkewError::Decomposition("g_part is not fixed by sigma^i"));
    }
    if !g_part.is_identity() && tau_order % g_part.order() != 0 {
        return Err(SkewError::Decomposition("|g_part| does not divide |tau|"));
    }
    if sigma_i.order().checked_mul(sigma_j.order()) != Some(ord)
        || num_integer::gcd(sigma_i.order(), sigma_j.order()) != 1
    {
        return Err(SkewError::Decomposition(
            "<sigma> != <sigma^i> x <sigma^j> order-wise",
        ));
    }

    let g2 = g.pointwise_stabilizer(&s_points)?;
    if g2.order() * biguint_from_u128(tau_order) != x2.order() {
        return Err(SkewError::Decomposition("X2 != G2 <tau> order-wise"));
    }
    for p in prime_divisors(tau_order) {
        if g2.contains(&power_u(&tau, tau_order / p)) {
            return Err(SkewError::Decomposition("<tau> meets G2 nontrivially"));
        }
    }

    Ok(MixedDecomposition {
        core,
        i,
        x1,
        x2,
        g2,
        g_part,
        tau,
        tau_order,
    })
}

/// All skew-morphisms of a group of order at most [`TINY_CAP`], by
/// backtracking over partial image tables in element-index order. Partial
/// assignments are pruned by two sound consequences of the axiom: each
/// partial quotient map `h -> sigma(g)^-1 sigma(gh)` must be injective and
/// must commute with `sigma` wherever both sides are defined. Leaves are
/// confirmed through [`verify_skew`].
pub fn enumerate_skew_tiny(base: &Arc<CayleyTable>) -> Result<Vec<SkewMorphism>, SkewError> {
    let n = base.n();
    if n > TINY_CAP {
        return Err(SkewError::SizeCap(n, TINY_CAP));
    }
    let mut found = Vec::new();
    if n == 0 {
        return Ok(found);
    }
    let mut img = vec![u32::MAX; n];
    img[0] = 0;
    let mut used = vec![false; n];
    used[0] = true;
    dfs(base, 1, &mut img, &mut used, &mut found);
    Ok(found)
}

fn dfs(
    base: &Arc<CayleyTable>,
    depth: usize,
    img: &mut Vec<u32>,
    used: &mut Vec<bool>,
    found: &mut Vec<SkewMorphism>,
) {
    let n = base.n();
    if depth == n {
        let sigma = Permutation::from_images(img.clone()).expect("bijection by construction");
        if let Ok(sm) = verify_skew(base, &sigma) {
            found.push(sm);
        }
        return;
    }
    for v in 1..n as u32 {
        if used[v as usize] {
            continue;
        }
        img[depth] = v;
        used[v as usize] = true;
        if partial_ok(base, img, depth) {
            dfs(base, depth + 1, img, used, found);
        }
        img[depth] = u32::MAX;
        used[v as usize] = false;
    }
}

/// Sound pruning checks on the partial assignment `img[0..=d]`.
fn partial_ok(base: &Arc<CayleyTable>, img: &[u32], d: usize) -> bool {
    let n = base.n();
    let defined = |e: u32| -> bool { (e as usize) <= d };
    let mut quotient = vec![u32::MAX; n];
    let mut hit = vec![false; n];
    for g in 0..=d as u32 {
        let sg_inv = base.inv(img[g as usize]);
        quotient.fill(u32::MAX);
        hit.fill(false);
        for h in 0..=d as u32 {
            let gh = base.mul(g, h);
            if !defined(gh) {
                continue;
            }
            let t = base.mul(sg_inv, img[gh as usize]);
            if hit[t as usize] {
                return false;
            }
            hit[t as usize] = true;
            quotient[h as usize] = t;
        }
        for h in 0..=d as u32 {
            let t = quotient[h as usize];
            if t == u32::MAX {
                continue;
            }
            let sh = img[h as usize];
            if defined(sh)
                && quotient[sh as usize] != u32::MAX
                && defined(t)
                && quotient[sh as usize] != img[t as usize]
            {
                return false;
            }
        }
    }
    true
}

/// Desk-scale simplicity test: perfect, and the normal closure of every
/// generator and of a few seeded random elements is the whole group.
fn looks_simple(g: &PermGroup) -> Result<bool, GroupError> {
    if g.is_trivial() {
        return Ok(false);
    }
    if g.derived_subgroup()?.order() != g.order() {
        return Ok(false);
    }
    let order = g.order();
    let mut probes: Vec<Permutation> = g
        .generators()
        .iter()
        .filter(|p| !p.is_identity())
        .cloned()
        .collect();
    for seed in 0..8u64 {
        let r = g.random_element(0x51a9 ^ seed);
        if !r.is_identity() {
            probes.push(r);
        }
    }
    for p in probes {
        if g.normal_closure(std::slice::from_ref(&p))?.order() != order {
            return Ok(false);
        }
    }
    Ok(true)
}

pub(crate) fn biguint_from_u128(v: u128) -> BigUint {
    let lo = (v & u64::MAX as u128) as u64;
    let hi = (v >> 64) as u64;
    (BigUint::from(hi) << 64) | BigUint::from(lo)
}

pub(crate) fn biguint_to_u128(v: &BigUint) -> Option<u128> {
    let digits = v.to_u64_digits();
    match digits.len() {
        0 => Some(0),
        1 => Some(digits[0] as u128),
        2 => Some(((digits[1] as u128) << 64) | digits[0] as u128),
        _ => None,
    }
}

pub(crate) fn prime_divisors(mut v: u128) -> Vec<u128> {
    let mut out = Vec::new();
    let mut d = 2u128;
    while d * d <= v {
        if v.is_multiple_of(d) {
            out.push(d);
            while v.is_multiple_of(d) {
                v /= d;
            }
        }
        d += 1;
    }
    if v > 1 {
        out.push(v);
    }
    out
}
