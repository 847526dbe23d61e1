//! Truncated group rings against a brute-force oracle: the model ring
//! Z[T] x Z[s_1..s_a]/(deg >= k) with the image of I^k computed as an
//! explicit integer lattice by repeated multiplication, so normal-form
//! equality can be cross-checked as lattice membership.

mod common;

use common::{deep_ideal_element, random_element, random_group_ring_element, GroupRingOracle};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use torsionkit::abelian::{AbelianGroup, GroupElement};
use torsionkit::groupring::{
    build_truncation_context, element_coords, in_ideal_power, truncate, GroupRingElement,
    TruncatedElement,
};
use torsionkit::ring::RingTag;

fn small_family() -> Vec<AbelianGroup> {
    let mut out = Vec::new();
    for free in 0..=2usize {
        for tors in [vec![], vec![2], vec![3], vec![4], vec![2, 2], vec![8], vec![2, 6]] {
            if free == 0 && tors.is_empty() {
                continue;
            }
            out.push(AbelianGroup::canonical(free, &tors));
        }
    }
    out
}

#[test]
fn free_rank_one_coordinates_match_binomials() {
    let group = AbelianGroup::free(1);
    let ctx = build_truncation_context(&group, 3, RingTag::Int).unwrap();
    // t^2 = (1 + s)^2 and t^-1 = 1 - s + s^2 in the graded basis 1, s, s^2
    let two = GroupElement { free: vec![2], tor: vec![] };
    assert_eq!(
        element_coords(&ctx, &two),
        vec![BigInt::from(1), BigInt::from(2), BigInt::from(1)]
    );
    let inv = GroupElement { free: vec![-1], tor: vec![] };
    assert_eq!(
        element_coords(&ctx, &inv),
        vec![BigInt::from(1), BigInt::from(-1), BigInt::from(1)]
    );
}

#[test]
fn normal_form_equality_matches_lattice_membership() {
    let mut rng = ChaCha8Rng::seed_from_u64(61);
    for group in small_family() {
        for k in 1..=3usize {
            let ctx = build_truncation_context(&group, k, RingTag::Int).unwrap();
            let oracle = GroupRingOracle::new(group.clone(), k);
            let lat = oracle.ideal_power_lattice(k);
            for _ in 0..12 {
                let x = random_group_ring_element(&mut rng, RingTag::Int, &group);
                let y = random_group_ring_element(&mut rng, RingTag::Int, &group);
                let lib_equal = truncate(&x, &ctx).unwrap() == truncate(&y, &ctx).unwrap();
                let diff = x.sub(&y).unwrap();
                let oracle_equal = lat.contains(&oracle.embed(&diff));
                assert_eq!(
                    lib_equal, oracle_equal,
                    "group {:?}, k = {k}: library and oracle disagree",
                    group.torsion_orders
                );
            }
            // engineered equalities: perturb by an explicit I^k product
            for _ in 0..4 {
                let x = random_group_ring_element(&mut rng, RingTag::Int, &group);
                let deep = deep_ideal_element(&mut rng, &group, k);
                let y = x.add(&deep).unwrap();
                assert_eq!(
                    truncate(&x, &ctx).unwrap(),
                    truncate(&y, &ctx).unwrap(),
                    "I^k perturbation changed the class"
                );
                assert!(lat.contains(&oracle.embed(&deep)), "oracle misses an I^k product");
            }
        }
    }
}

#[test]
fn ideal_power_filtration_matches_the_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(62);
    for group in [AbelianGroup::canonical(1, &[2]), AbelianGroup::canonical(2, &[])] {
        let k = 3;
        let ctx = build_truncation_context(&group, k, RingTag::Int).unwrap();
        let oracle = GroupRingOracle::new(group.clone(), k);
        let lattices: Vec<_> = (1..=k).map(|l| oracle.ideal_power_lattice(l)).collect();
        for _ in 0..30 {
            let j = rng.gen_range(0..=k);
            let x = deep_ideal_element(&mut rng, &group, j);
            let bump = random_group_ring_element(&mut rng, RingTag::Int, &group);
            let x = x.add(&bump.scale(&BigInt::from(rng.gen_range(0..=1)))).unwrap();
            let t = truncate(&x, &ctx).unwrap();
            let v = oracle.embed(&x);
            for l in 1..=k {
                assert_eq!(
                    in_ideal_power(&t, l).unwrap(),
                    lattices[l - 1].contains(&v),
                    "membership in I^{l} disagrees"
                );
            }
        }
    }
}

#[test]
fn truncation_is_a_ring_homomorphism() {
    let mut rng = ChaCha8Rng::seed_from_u64(63);
    let family = small_family();
    for trial in 0..500 {
        let group = &family[rng.gen_range(0..family.len())];
        let k = rng.gen_range(1..=3);
        let ctx = build_truncation_context(group, k, RingTag::Int).unwrap();
        let x = random_group_ring_element(&mut rng, RingTag::Int, group);
        let y = random_group_ring_element(&mut rng, RingTag::Int, group);
        let tx = truncate(&x, &ctx).unwrap();
        let ty = truncate(&y, &ctx).unwrap();
        assert_eq!(
            truncate(&x.add(&y).unwrap(), &ctx).unwrap(),
            tx.add(&ty).unwrap(),
            "trial {trial}: additivity"
        );
        assert_eq!(
            truncate(&x.mul(&y).unwrap(), &ctx).unwrap(),
            tx.mul(&ty).unwrap(),
            "trial {trial}: multiplicativity"
        );
    }
}

#[test]
fn group_elements_are_units_after_truncation() {
    let mut rng = ChaCha8Rng::seed_from_u64(64);
    let family = small_family();
    for trial in 0..500 {
        let group = &family[rng.gen_range(0..family.len())];
        let k = rng.gen_range(1..=4);
        let ctx = build_truncation_context(group, k, RingTag::Int).unwrap();
        let g = random_element(&mut rng, group);
        let h = truncate(
            &GroupRingElement::from_element(RingTag::Int, group.clone(), g.clone()),
            &ctx,
        )
        .unwrap();
        let h_inv = truncate(
            &GroupRingElement::from_element(RingTag::Int, group.clone(), group.neg(&g)),
            &ctx,
        )
        .unwrap();
        assert_eq!(
            h.mul(&h_inv).unwrap(),
            TruncatedElement::one(&ctx),
            "trial {trial}: h * h^-1 != 1 for {g:?}"
        );
    }
}

#[test]
fn augmentation_perturbations_invert_by_geometric_series() {
    let mut rng = ChaCha8Rng::seed_from_u64(65);
    let family = small_family();
    for _ in 0..60 {
        let group = &family[rng.gen_range(0..family.len())];
        let k = rng.gen_range(2..=4);
        let ctx = build_truncation_context(group, k, RingTag::Int).unwrap();
        let x = truncate(&deep_ideal_element(&mut rng, group, 1), &ctx).unwrap();
        let u = TruncatedElement::one(&ctx).add(&x).unwrap();
        // (1 + x)^-1 = 1 - x + x^2 - ... stabilizes since x is nilpotent
        let mut inv = TruncatedElement::one(&ctx);
        let mut pow = TruncatedElement::one(&ctx);
        for j in 1..k {
            pow = pow.mul(&x).unwrap();
            let signed = if j % 2 == 1 { pow.neg() } else { pow.clone() };
            inv = inv.add(&signed).unwrap();
        }
        assert_eq!(u.mul(&inv).unwrap(), TruncatedElement::one(&ctx), "series inverse fails");
    }
}

#[test]
fn mod_r_truncation_matches_the_augmented_lattice() {
    // over Z_r the oracle lattice gains r times every basis vector
    let mut rng = ChaCha8Rng::seed_from_u64(66);
    let group = AbelianGroup::canonical(1, &[4]);
    for r in [2u64, 3, 4] {
        let k = 3;
        let ctx = build_truncation_context(&group, k, RingTag::Mod(r)).unwrap();
        let oracle = GroupRingOracle::new(group.clone(), k);
        let mut lat = oracle.ideal_power_lattice(k);
        for i in 0..oracle.dim() {
            let mut v = vec![BigInt::from(0); oracle.dim()];
            v[i] = BigInt::from(r);
            lat.insert(v);
        }
        for _ in 0..25 {
            let x = random_group_ring_element(&mut rng, RingTag::Mod(r), &group);
            let y = random_group_ring_element(&mut rng, RingTag::Mod(r), &group);
            let lib_equal = truncate(&x, &ctx).unwrap() == truncate(&y, &ctx).unwrap();
            let diff = x.sub(&y).unwrap();
            // embed sees only representatives; membership mod r is what counts
            let int_diff = GroupRingElement {
                ring: RingTag::Int,
                group: group.clone(),
                terms: diff.terms.clone(),
            };
            assert_eq!(
                lib_equal,
                lat.contains(&oracle.embed(&int_diff)),
                "r = {r}: library and oracle disagree"
            );
        }
    }
}
