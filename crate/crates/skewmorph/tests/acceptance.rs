//! Acceptance suite: every release criterion as one test, each printing a
//! PASS line with its measured runtime. Run with
//! `cargo test --test acceptance -- --nocapture` to see the lines.

use std::sync::Arc;
use std::time::{Duration, Instant};

use num_bigint::BigUint;

use skewmorph::atlas::{self, cayley_table, factorial, CayleyTable};
use skewmorph::constructions::{
    all_pass, classify_balanced_psl2, indecomposable_mixed_map, family_p_parameters, full_cycle_check, map_p_family,
    map_q_family, mixed_map_on_alternating_power,
};
use skewmorph::group::PermGroup;
use skewmorph::maps::census::{
    census_a5, census_m22, compare_with_published, CensusAudit, PUBLISHED_A5_VALENCIES, PUBLISHED_M22_VALENCIES,
};
use skewmorph::skew::{
    enumerate_skew_tiny, from_factorization, skew_product, verify_skew, SkewKind, SkewMorphism,
};
use skewmorph::{Permutation, DEFAULT_SEED};

const THREADS: usize = 4;

fn finish(name: &str, started: Instant, budget: Duration) {
    let elapsed = started.elapsed();
    eprintln!("[PASS] {name}: {elapsed:.2?} (budget {budget:.0?})");
    assert!(
        elapsed < budget,
        "{name} exceeded its runtime budget: {elapsed:.2?} >= {budget:.0?}"
    );
}

#[test]
fn criterion_a5_census_two_ways() {
    let started = Instant::now();
    let census = census_a5(THREADS).expect("census runs");
    assert_eq!(census.class_count, 5, "exactly 5 classes on A5");
    assert_eq!(census.aut_group_spec, "PGL(2,11)");
    let CensusAudit::A5 {
        orbit_count,
        formula_count,
        ..
    } = &census.audit
    else {
        panic!("wrong audit variant")
    };
    assert_eq!(*orbit_count, 5, "explicit orbit partition");
    assert_eq!(*formula_count, 5, "|Delta| / |Aut| = 6600 / 1320");
    finish("A5 census (two independent counts)", started, Duration::from_secs(60));
}

#[test]
fn criterion_a5_intermediate_quantities() {
    let started = Instant::now();
    let census = census_a5(THREADS).expect("census runs");
    let CensusAudit::A5 {
        involutions,
        involution_centralizer,
        order11,
        delta,
        all_pairs_generate,
        ..
    } = &census.audit
    else {
        panic!("wrong audit variant")
    };
    assert_eq!(*involutions, 55, "PSL(2,11) has 55 involutions");
    assert_eq!(*involution_centralizer, 12, "involution centralizer order");
    assert_eq!(*order11, 120, "elements of order 11");
    assert_eq!(*delta, 6600, "|Delta| = 55 * 120");
    assert!(*all_pairs_generate, "every (11,2)-pair generates");
    finish("A5 intermediate quantities", started, Duration::from_secs(60));
}

#[test]
fn criterion_m22_census() {
    let started = Instant::now();
    let census = census_m22(THREADS).expect("census runs");
    assert_eq!(census.class_count, 330, "exactly 330 classes on M22");
    let CensusAudit::M22 {
        involutions,
        involution_centralizer,
        order23,
        per_class_orbits,
        all_pairs_generate,
        formula_count,
    } = &census.audit
    else {
        panic!("wrong audit variant")
    };
    assert_eq!(per_class_orbits, &vec![165, 165], "165 orbits per sigma class");
    assert_eq!(*formula_count, 330, "|X| / (1344 * 23) cross-check");
    assert_eq!(*involutions, 3795);
    assert_eq!(*involution_centralizer, 2688);
    assert_eq!(*order23, 887_040);
    assert!(*all_pairs_generate);
    // the formula constant from the centralizer orders
    assert_eq!(10_200_960 / (1344 * 23), 330u64);
    finish("M22 census (slice and formula paths)", started, Duration::from_secs(1800));
}

#[test]
fn criterion_published_valency_multisets() {
    let started = Instant::now();
    let m22 = census_m22(THREADS).expect("census runs");
    let cmp = compare_with_published(&m22.valency_multiset, PUBLISHED_M22_VALENCIES);
    assert!(
        cmp.matches,
        "M22 multiset must equal the published table exactly: {cmp:?}"
    );

    let a5 = census_a5(THREADS).expect("census runs");
    let cmp = compare_with_published(&a5.valency_multiset, PUBLISHED_A5_VALENCIES);
    assert!(!cmp.matches, "the A5 table has a documented discrepancy");
    assert_eq!(
        cmp.derived_only,
        vec![(6, 1)],
        "the derived census finds face valency 6"
    );
    assert_eq!(
        cmp.published_only,
        vec![(16, 1)],
        "the published entry 16 is impossible: 16 is not an element order of PSL(2,11)"
    );
    // four of the five entries agree
    let matching: u64 = a5
        .valency_multiset
        .iter()
        .map(|(v, c)| {
            PUBLISHED_A5_VALENCIES
                .iter()
                .find(|(pv, _)| pv == v)
                .map(|(_, pc)| (*c).min(*pc))
                .unwrap_or(0)
        })
        .sum();
    assert_eq!(matching, 4);
    // the impossibility of 16: element orders of PSL(2,11)
    let x = atlas::psl2(11).unwrap();
    let orders: std::collections::BTreeSet<u128> = x
        .elements(2000)
        .unwrap()
        .list
        .iter()
        .map(|e| e.order())
        .collect();
    assert_eq!(orders, [1u128, 2, 3, 5, 6, 11].into_iter().collect());
    finish("published valency multisets", started, Duration::from_secs(1800));
}

#[test]
fn criterion_full_cycle_check_up_to_20() {
    let started = Instant::now();
    for m in (6..=20).step_by(2) {
        let out = full_cycle_check(m).expect("parameters are legal");
        assert!(all_pass(&out.checks), "m = {m}: {:?}", out.checks);
        assert_eq!(out.a_word, "(1,2,3)", "m = {m}");
    }
    finish("full-cycle a-word checks for even m in 6..=20", started, Duration::from_secs(10));
}

#[test]
fn criterion_pq_families() {
    let started = Instant::now();
    for p in [5u64, 7, 11, 13] {
        let deltas = family_p_parameters(p).unwrap();
        assert_eq!(
            deltas.len() as u64,
            (p - 1) / 2 - delta_size(p),
            "|F' \\ Delta(p)| for p = {p}"
        );
        for d in &deltas {
            let fam = map_p_family(p, *d).expect("family member constructs");
            assert_eq!(fam.kind, SkewKind::Balanced, "p={p} delta={d}");
            assert_eq!(fam.map.vertex_valency(), 3);
        }
        for c in 1..=(p - 1) / 2 {
            let fam = map_q_family(p, c).expect("family member constructs");
            assert_eq!(fam.kind, SkewKind::Balanced, "p={p} c={c}");
            assert_eq!(fam.map.vertex_valency(), p as u128);
        }
    }
    // brute-force orbit classification cross-check at p in {5, 7}
    for p in [5u64, 7] {
        for valency in [3, p] {
            let out = classify_balanced_psl2(p, valency, THREADS).unwrap();
            assert_eq!(
                out.class_count, out.expected_count,
                "p={p} valency={valency}"
            );
            assert!(out.family_bijection, "p={p} valency={valency}");
        }
    }
    finish("P/Q families and their classification", started, Duration::from_secs(300));
}

/// |Delta(p)| so the expected family size can be written against (p-1)/2.
fn delta_size(p: u64) -> u64 {
    skewmorph::constructions::delta_set(p).unwrap().members.len() as u64
}

#[test]
fn criterion_indecomposable_mixed_map() {
    let started = Instant::now();
    let out = indecomposable_mixed_map(3, 5).expect("parameters are legal");
    assert!(all_pass(&out.checks), "{:#?}", out.checks);
    assert_eq!(out.kind, SkewKind::Mixed);
    let d = out.decomposition.expect("decomposition succeeds");
    // Side conditions re-stated: g is fixed by sigma^i and |g| divides |tau|
    let sigma_i = skewmorph::group::power_u(out.map.sigma(), d.i);
    assert_eq!(d.g_part.conjugate(&sigma_i).unwrap(), d.g_part);
    assert_eq!(d.tau_order % d.g_part.order(), 0);
    finish("mixed example (n,p) = (3,5)", started, Duration::from_secs(60));
}

#[test]
fn criterion_mixed_power_m6_ell5() {
    let started = Instant::now();
    let out = mixed_map_on_alternating_power(6, 5, DEFAULT_SEED).expect("instance constructs");
    assert!(all_pass(&out.checks), "{:#?}", out.checks);
    assert_eq!(out.sigma_order, 28, "rotation order 4 * 7");
    assert_eq!(out.kind, SkewKind::Mixed);
    finish("mixed product on A6^5", started, Duration::from_secs(120));
}

// --- criterion: property suites ---------------------------------------------

/// The skew-morphism corpus: everything the library produces on groups of
/// order at most 500, plus the enumerated tiny groups.
fn corpus() -> Vec<SkewMorphism> {
    let mut out = Vec::new();
    // enumerations on tiny groups
    for table in tiny_tables() {
        out.extend(enumerate_skew_tiny(&table).unwrap());
    }
    // inner rotations on A5 and PSL(2,7)
    for (g, r_text) in [
        (atlas::alternating(5).unwrap(), "(1,2,3,4,5)"),
        (atlas::psl2(7).unwrap(), "(1,2)(3,4)"),
    ] {
        let table = Arc::new(cayley_table(&g).unwrap());
        let r = g
            .elements(2000)
            .unwrap()
            .list
            .iter()
            .find(|e| e.order() > 2)
            .cloned()
            .unwrap_or_else(|| Permutation::parse(r_text, g.degree()).unwrap());
        let sigma = table.conjugation_action(&r).unwrap();
        out.push(verify_skew(&table, &sigma).unwrap());
    }
    // the order-11 skew-morphism of A5 from the PSL(2,11) factorization
    let x = atlas::psl2(11).unwrap();
    let a5 = skewmorph::maps::census::a5_inside_psl2_11(&x).unwrap();
    let y = x.find_element_of_order(11, DEFAULT_SEED).unwrap();
    let fs = from_factorization(&x, &a5, &y).unwrap();
    out.push(fs.materialize(5000).unwrap());
    out
}

fn tiny_tables() -> Vec<Arc<CayleyTable>> {
    let mut tables = Vec::new();
    for n in [3u32, 4, 6] {
        tables.push(Arc::new(cayley_table(&atlas::cyclic(n).unwrap()).unwrap()));
    }
    tables.push(Arc::new(cayley_table(&atlas::symmetric(3).unwrap()).unwrap()));
    // dihedral of order 8 in its natural degree-4 action
    let d4 = PermGroup::new(
        4,
        vec![
            Permutation::parse("(1,2,3,4)", 4).unwrap(),
            Permutation::parse("(1,3)", 4).unwrap(),
        ],
    )
    .unwrap();
    tables.push(Arc::new(cayley_table(&d4).unwrap()));
    tables.push(Arc::new(quaternion_table()));
    tables
}

fn quaternion_table() -> CayleyTable {
    // indices 0..7 = 1, i, j, k, -1, -i, -j, -k
    let mul = |a: u32, b: u32| -> u32 {
        let (sa, xa) = (a / 4, a % 4);
        let (sb, xb) = (b / 4, b % 4);
        let (s, x) = match (xa, xb) {
            (0, y) => (0, y),
            (y, 0) => (0, y),
            (1, 1) | (2, 2) | (3, 3) => (1, 0),
            (1, 2) => (0, 3),
            (2, 1) => (1, 3),
            (2, 3) => (0, 1),
            (3, 2) => (1, 1),
            (3, 1) => (0, 2),
            (1, 3) => (1, 2),
            _ => unreachable!(),
        };
        ((s + sa + sb) % 2) * 4 + x
    };
    CayleyTable::from_fn(8, mul, None).unwrap()
}

#[test]
fn criterion_property_skew_axiom_exhaustive() {
    let started = Instant::now();
    for sm in corpus() {
        assert!(sm.base().n() <= 500);
        assert!(
            sm.verified_exhaustively(),
            "axiom checked on all pairs for order {}",
            sm.base().n()
        );
    }
    finish("property: exhaustive axiom verification on the corpus", started, Duration::from_secs(120));
}

#[test]
fn criterion_property_factorization_round_trip() {
    let started = Instant::now();
    for sm in corpus() {
        let sp = skew_product(&sm).expect("skew-product builds");
        let fs = from_factorization(&sp.x, &sp.l_g, &sp.sigma).expect("factorization hypothesis");
        let back = fs.materialize(5000).expect("materializes");
        assert_eq!(back.sigma(), sm.sigma(), "same image table");
        for g in 0..sm.base().n() as u32 {
            assert_eq!(
                back.pi(g) as u128 % sm.order(),
                sm.pi(g) as u128 % sm.order(),
                "same power function mod |sigma|"
            );
        }
    }
    finish("property: factorization round trip on the corpus", started, Duration::from_secs(300));
}

#[test]
fn criterion_property_enumerate_tiny_matches_brute_force() {
    let started = Instant::now();
    for table in tiny_tables() {
        let enumerated = enumerate_skew_tiny(&table).unwrap();
        let keys: std::collections::BTreeSet<Vec<u32>> = enumerated
            .iter()
            .map(|sm| sm.sigma().images().to_vec())
            .collect();
        assert_eq!(keys.len(), enumerated.len(), "no duplicates");
        // oracle: filter every identity-fixing permutation through the
        // axiom checker
        let n = table.n();
        let mut oracle = 0usize;
        let mut idx: Vec<u32> = (1..n as u32).collect();
        permute(&mut idx, 0, &mut |rest| {
            let mut images = vec![0u32];
            images.extend_from_slice(rest);
            let sigma = Permutation::from_images(images).unwrap();
            if verify_skew(&table, &sigma).is_ok() {
                oracle += 1;
                assert!(keys.contains(sigma.images()), "enumeration misses {sigma}");
            }
        });
        assert_eq!(enumerated.len(), oracle, "order {n}");
    }
    finish("property: tiny enumeration equals the brute-force filter", started, Duration::from_secs(120));
}

fn permute(idx: &mut Vec<u32>, at: usize, visit: &mut impl FnMut(&[u32])) {
    if at == idx.len() {
        visit(idx);
        return;
    }
    for i in at..idx.len() {
        idx.swap(at, i);
        permute(idx, at + 1, visit);
        idx.swap(at, i);
    }
}

#[test]
fn criterion_property_core_trichotomy() {
    let started = Instant::now();
    for sm in corpus() {
        let sp = skew_product(&sm).expect("skew-product builds");
        let core_order = sp.core.order();
        let g_order = sp.l_g.order();
        let balanced = core_order == g_order;
        let simple = core_order == BigUint::from(1u32);
        let mixed = !balanced && !simple;
        // trichotomy: exactly one case holds (groups of order > 1)
        assert_eq!(
            u8::from(balanced) + u8::from(simple) + u8::from(mixed),
            1,
            "exclusive and exhaustive"
        );
        let expected = if balanced {
            SkewKind::Balanced
        } else if simple {
            SkewKind::Simple
        } else {
            SkewKind::Mixed
        };
        assert_eq!(sp.kind, expected);
        // balanced exactly when the power function is identically 1
        assert_eq!(sp.kind == SkewKind::Balanced, sm.is_automorphism());
    }
    finish("property: core trichotomy on every constructed skew-product", started, Duration::from_secs(300));
}

#[test]
fn criterion_property_full_cycle_witness_maps() {
    // the census witness involution stays valid at the
    // map level for every even m in the desk range
    let started = Instant::now();
    for m in (6..=12).step_by(2) {
        let n = (m + 1) as usize;
        let x = atlas::alternating(m + 1).unwrap();
        let g = x.pointwise_stabilizer(&[(n - 1) as u32]).unwrap();
        let sigma =
            Permutation::from_images((0..n as u32).map(|i| (i + 1) % n as u32).collect()).unwrap();
        let iota = Permutation::parse("(1,2)(3,4)", n).unwrap();
        let map = skewmorph::maps::make_map(&x, &g, &sigma, &iota).unwrap();
        assert_eq!(map.vertex_valency(), (m + 1) as u128);
        assert_eq!(
            map.n_vertices() * BigUint::from(m as u64 + 1),
            factorial(m as u64 + 1) / BigUint::from(2u32)
        );
    }
    finish("property: full-cycle witness maps for even m in 6..=12", started, Duration::from_secs(60));
}
