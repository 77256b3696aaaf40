//! Core of a subgroup: the largest normal subgroup of `X` inside `G`,
//! computed as the kernel of the action of `X` on the right cosets of `G`.
//!
//! Cosets are labelled by canonical representatives: the representative of
//! `G*t` is the lexicographically least image table among `{g*t : g in G}`,
//! found greedily along a chain of `G` whose base is all points in order.
//! Distinct cosets get distinct canonical elements, so labels never collide.

use std::collections::HashMap;

use num_traits::Zero;

use super::chain::{build_chain, Chain};
use super::{perm_key, power_u, GroupError, PermGroup};
use crate::perm::Permutation;

pub fn core_of_subgroup(
    x: &PermGroup,
    g: &PermGroup,
    coset_cap: usize,
) -> Result<PermGroup, GroupError> {
    if g.degree() != x.degree() {
        return Err(GroupError::DegreeMismatch(g.degree(), x.degree()));
    }
    if !g.is_subgroup_of(x) {
        return Err(GroupError::NotSubgroup);
    }
    // Normal subgroups are their own core.
    if x.normalizes(g) {
        return PermGroup::new(x.degree(), g.generators().to_vec());
    }
    // A cyclic subgroup admits a divisor walk: any normal subgroup inside
    // <y> contains a characteristic prime-order subgroup of <y>, so the core
    // is the largest <y^(ord/o)> that X normalizes. This avoids enumerating
    // huge coset spaces for point stabilizers like <sigma> in M23.
    if g.generators().len() == 1 {
        return cyclic_core(x, &g.generators()[0]);
    }

    let index_bound = {
        let (q, r) = num_integer::Integer::div_rem(&x.order(), &g.order());
        assert!(r.is_zero(), "subgroup order must divide the group order");
        q
    };
    if index_bound > num_bigint::BigUint::from(coset_cap) {
        return Err(GroupError::CosetCapExceeded { cap: coset_cap });
    }

    let n = x.degree();
    let full_base: Vec<u32> = (0..n as u32).collect();
    let canon_chain = build_chain(n, g.generators(), &full_base);

    // Enumerate cosets of G by right multiplication, labelling each by its
    // canonical representative.
    let mut reps: Vec<Permutation> = vec![canonical_rep(&canon_chain, &Permutation::identity(n))];
    let mut label: HashMap<Vec<u16>, u32> = HashMap::new();
    label.insert(perm_key(&reps[0]), 0);
    let mut action: Vec<Vec<u32>> = vec![Vec::new(); x.generators().len()];
    let mut head = 0;
    while head < reps.len() {
        let rep = reps[head].clone();
        head += 1;
        for (gi, gen) in x.generators().iter().enumerate() {
            let c = canonical_rep(&canon_chain, &rep.compose(gen).expect("equal degree"));
            let k = perm_key(&c);
            let target = match label.get(&k) {
                Some(&t) => t,
                None => {
                    if reps.len() >= coset_cap {
                        return Err(GroupError::CosetCapExceeded { cap: coset_cap });
                    }
                    let t = reps.len() as u32;
                    label.insert(k, t);
                    reps.push(c);
                    t
                }
            };
            action[gi].push(target);
        }
    }
    let m = reps.len();

    // Kernel of the coset action: the pointwise stabilizer of the coset
    // points in the combined (points + cosets) action.
    let combined: Vec<Permutation> = x
        .generators()
        .iter()
        .enumerate()
        .map(|(gi, gen)| {
            let mut images: Vec<u32> = gen.images().to_vec();
            images.extend(action[gi].iter().map(|&t| t + n as u32));
            Permutation::from_images(images).expect("generator action is a bijection")
        })
        .collect();
    let coset_points: Vec<u32> = (n as u32..(n + m) as u32).collect();
    let combined_chain = build_chain(n + m, &combined, &coset_points);
    let kernel_gens: Vec<Permutation> = combined_chain
        .stabilizer_gens(m)
        .into_iter()
        .map(|p| p.restrict(n).expect("kernel fixes all coset points"))
        .collect();
    PermGroup::new(n, kernel_gens)
}

fn cyclic_core(x: &PermGroup, y: &Permutation) -> Result<PermGroup, GroupError> {
    let ord = y.order();
    let mut divisors: Vec<u128> = Vec::new();
    let mut d = 1;
    while d * d <= ord {
        if ord.is_multiple_of(d) {
            divisors.push(d);
            divisors.push(ord / d);
        }
        d += 1;
    }
    divisors.sort_unstable();
    divisors.dedup();
    // Largest subgroup order o (proper: the full <y> case was handled by the
    // normality fast path) whose subgroup X normalizes.
    for &o in divisors.iter().rev() {
        if o == ord {
            continue;
        }
        let z = power_u(y, ord / o);
        let zg = PermGroup::new(x.degree(), vec![z])?;
        if x.normalizes(&zg) {
            return Ok(zg);
        }
    }
    Ok(PermGroup::trivial(x.degree()))
}

/// Least element of the right coset `G*t` in image-table order, found by
/// choosing transversal representatives greedily along the all-points base.
fn canonical_rep(canon_chain: &Chain, t: &Permutation) -> Permutation {
    let mut cur = t.clone();
    for level in &canon_chain.levels {
        if level.orbit.len() == 1 {
            continue;
        }
        let p_best = level
            .orbit
            .iter()
            .copied()
            .min_by_key(|&p| cur.image(p))
            .expect("orbit nonempty");
        if p_best != level.base {
            let u = &level.transversal[&p_best];
            cur = u.compose(&cur).expect("equal degree");
        }
    }
    cur
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;
    use num_traits::One;

    fn p(text: &str, degree: usize) -> Permutation {
        Permutation::parse(text, degree).unwrap()
    }

    #[test]
    fn canonical_rep_constant_on_cosets() {
        let g = PermGroup::new(4, vec![p("(1,2,3)", 4)]).unwrap();
        let full_base: Vec<u32> = (0..4).collect();
        let chain = build_chain(4, g.generators(), &full_base);
        let t = p("(1,4)", 4);
        let mut reps = std::collections::HashSet::new();
        for k in 0..3i64 {
            let gt = p("(1,2,3)", 4).power(k).compose(&t).unwrap();
            reps.insert(canonical_rep(&chain, &gt));
        }
        assert_eq!(reps.len(), 1, "one canonical element per coset");
    }

    #[test]
    fn core_of_normal_subgroup_is_itself() {
        // V4 inside S4.
        let s4 = PermGroup::new(4, vec![p("(1,2)", 4), p("(1,2,3,4)", 4)]).unwrap();
        let v4 = PermGroup::new(4, vec![p("(1,2)(3,4)", 4), p("(1,3)(2,4)", 4)]).unwrap();
        let core = core_of_subgroup(&s4, &v4, 1000).unwrap();
        assert_eq!(core.order(), BigUint::from(4u32));
    }

    #[test]
    fn core_of_point_stabilizer_in_s4_is_trivial() {
        let s4 = PermGroup::new(4, vec![p("(1,2)", 4), p("(1,2,3,4)", 4)]).unwrap();
        let s3 = s4.pointwise_stabilizer(&[3]).unwrap();
        assert_eq!(s3.order(), BigUint::from(6u32));
        let core = core_of_subgroup(&s4, &s3, 1000).unwrap();
        assert_eq!(core.order(), BigUint::one());
    }

    #[test]
    fn core_with_intermediate_normal_part() {
        // X = S3 x S3 acting on 6 points, G = S3 x <(4,5)>: the core is
        // S3 x 1.
        let gens_x = vec![
            p("(1,2)", 6),
            p("(1,2,3)", 6),
            p("(4,5)", 6),
            p("(4,5,6)", 6),
        ];
        let x = PermGroup::new(6, gens_x).unwrap();
        let g = PermGroup::new(6, vec![p("(1,2)", 6), p("(1,2,3)", 6), p("(4,5)", 6)]).unwrap();
        let core = core_of_subgroup(&x, &g, 1000).unwrap();
        assert_eq!(core.order(), BigUint::from(6u32));
        assert!(core.contains(&p("(1,2,3)", 6)));
        assert!(!core.contains(&p("(4,5)", 6)));
        // Core invariants: normal in X and contained in G.
        assert!(x.normalizes(&core));
        assert!(core.is_subgroup_of(&g));
    }

    #[test]
    fn cyclic_core_detects_central_part() {
        // X = C6 = <(1..6)>, G = <(1..6)^1> is normal; take instead
        // X = S3 acting regularly... simpler: core of <(1,2,3,4,5,6)> of
        // order 6 inside C6 itself is everything (normal).
        let c6 = PermGroup::new(6, vec![p("(1,2,3,4,5,6)", 6)]).unwrap();
        let sub = PermGroup::new(6, vec![p("(1,3,5)(2,4,6)", 6)]).unwrap();
        let core = core_of_subgroup(&c6, &sub, 100).unwrap();
        assert_eq!(core.order(), BigUint::from(3u32));
    }

    #[test]
    fn cyclic_core_free_case() {
        // <(1,2)> inside S3 is core-free.
        let s3 = PermGroup::new(3, vec![p("(1,2)", 3), p("(1,2,3)", 3)]).unwrap();
        let c2 = PermGroup::new(3, vec![p("(1,2)", 3)]).unwrap();
        let core = core_of_subgroup(&s3, &c2, 100).unwrap();
        assert_eq!(core.order(), BigUint::one());
    }

    #[test]
    fn rejects_non_subgroup() {
        let a5 = PermGroup::new(5, vec![p("(1,2,3,4,5)", 5), p("(3,4,5)", 5)]).unwrap();
        let s2 = PermGroup::new(5, vec![p("(1,2)", 5)]).unwrap();
        assert!(matches!(
            core_of_subgroup(&a5, &s2, 100),
            Err(GroupError::NotSubgroup)
        ));
    }
}
