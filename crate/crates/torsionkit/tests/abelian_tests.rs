//! Abelian group machinery: Smith normal form, cokernel presentations,
//! primary parts, and linking forms, checked by direct matrix identities
//! and brute enumeration.

mod common;

use num_bigint::BigInt;
use num_rational::Rational64;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use torsionkit::abelian::{
    cokernel, dot_pairing, is_nondegenerate, primary_part, smith_normal_form, AbelianGroup,
    LinkingForm, PseudoBasis,
};
use torsionkit::zmatrix::{det, from_i64, mul};

fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Vec<Vec<i64>> {
    (0..rows).map(|_| (0..cols).map(|_| rng.gen_range(-9..=9)).collect()).collect()
}

#[test]
fn smith_form_is_a_unimodular_diagonalization() {
    let mut rng = ChaCha8Rng::seed_from_u64(51);
    for trial in 0..100 {
        let (nr, nc) = (rng.gen_range(1..=5), rng.gen_range(1..=5));
        let a = from_i64(&random_matrix(&mut rng, nr, nc));
        let (u, d, v) = smith_normal_form(&a);
        assert_eq!(mul(&mul(&u, &a), &v), d, "trial {trial}: UAV != D");
        assert_eq!(det(&u).abs(), BigInt::one(), "trial {trial}: U not unimodular");
        assert_eq!(det(&v).abs(), BigInt::one(), "trial {trial}: V not unimodular");
        for (i, row) in d.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                if i != j {
                    assert!(x.is_zero(), "trial {trial}: off-diagonal entry at ({i}, {j})");
                } else {
                    assert!(!x.is_negative(), "trial {trial}: negative invariant factor");
                }
            }
        }
        let diag: Vec<BigInt> = (0..nr.min(nc)).map(|i| d[i][i].clone()).collect();
        for w in diag.windows(2) {
            if !w[0].is_zero() && !w[1].is_zero() {
                assert!((&w[1] % &w[0]).is_zero(), "trial {trial}: chain breaks at {w:?}");
            } else {
                assert!(w[1].is_zero() || !w[0].is_zero(), "trial {trial}: zero before nonzero");
            }
        }
    }
}

#[test]
fn cokernel_kills_relation_rows_and_counts_invariants() {
    let mut rng = ChaCha8Rng::seed_from_u64(52);
    for trial in 0..100 {
        let (nr, nc) = (rng.gen_range(0..=4), rng.gen_range(1..=4));
        let rows = random_matrix(&mut rng, nr, nc);
        let a = from_i64(&rows);
        let (group, gens) = cokernel(&a, nc).unwrap();
        assert_eq!(gens.len(), nc);
        for (ri, row) in rows.iter().enumerate() {
            let mut acc = group.zero();
            for (j, &c) in row.iter().enumerate() {
                acc = group.add(&acc, &group.mul_scalar(&gens[j], c));
            }
            assert!(acc.is_zero(), "trial {trial}: relation row {ri} survives in the quotient");
        }
        // invariants match the Smith diagonal of the same matrix
        let (_, d, _) = smith_normal_form(&a);
        let diag: Vec<BigInt> =
            (0..nr.min(nc)).map(|i| d[i][i].clone()).filter(|x| !x.is_zero()).collect();
        let rank = diag.len();
        assert_eq!(group.free_rank, nc - rank, "trial {trial}: free rank");
        let tor_product: BigInt = diag.iter().product();
        assert_eq!(group.torsion_order(), tor_product, "trial {trial}: torsion order");
    }
}

#[test]
fn element_orders_match_scalar_multiplication() {
    let group = AbelianGroup::canonical(1, &[2, 4, 3]);
    for e in group.torsion_elements() {
        let d = group.element_order(&e).expect("torsion element has finite order");
        assert!(group.mul_scalar(&e, d as i64).is_zero(), "d * e != 0 for {e:?}");
        for k in 1..d {
            if (d % k) == 0 {
                assert!(
                    !group.mul_scalar(&e, k as i64).is_zero(),
                    "order of {e:?} divides {k} < {d}"
                );
            }
        }
    }
    assert_eq!(group.element_order(&group.free_gen(0)), None);
}

#[test]
fn primary_part_extracts_each_prime_cleanly() {
    let h = AbelianGroup::canonical(1, &[12, 18]);
    let (h2, pb2) = primary_part(&h, 2).unwrap();
    assert_eq!(h2.torsion_orders, vec![2, 4]);
    let (h3, pb3) = primary_part(&h, 3).unwrap();
    assert_eq!(h3.torsion_orders, vec![3, 9]);
    let (h5, pb5) = primary_part(&h, 5).unwrap();
    assert!(h5.torsion_orders.is_empty());
    assert!(pb5.elements.is_empty());
    for (pb, p) in [(pb2, 2u64), (pb3, 3u64)] {
        let orders = pb.orders.clone();
        let revalidated =
            PseudoBasis::new_validated(h.clone(), pb.elements.clone(), p).unwrap();
        assert_eq!(revalidated.orders, orders, "orders change under revalidation");
        for (e, &d) in pb.elements.iter().zip(&orders) {
            assert_eq!(h.element_order(e), Some(d));
        }
    }
}

#[test]
fn linking_form_is_bilinear_mod_one() {
    let orders = vec![4u64, 6];
    let table = vec![
        vec![Rational64::new(1, 4), Rational64::new(1, 2)],
        vec![Rational64::new(1, 2), Rational64::new(1, 6)],
    ];
    let l = LinkingForm::new(orders.clone(), orders.clone(), table).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(53);
    let frac = |x: Rational64| x - x.floor();
    for _ in 0..200 {
        let z: Vec<u64> = orders.iter().map(|&d| rng.gen_range(0..d)).collect();
        let zp: Vec<u64> = orders.iter().map(|&d| rng.gen_range(0..d)).collect();
        let w: Vec<u64> = orders.iter().map(|&d| rng.gen_range(0..d)).collect();
        let sum: Vec<u64> =
            z.iter().zip(&zp).zip(&orders).map(|((a, b), &d)| (a + b) % d).collect();
        assert_eq!(l.eval(&sum, &w), frac(l.eval(&z, &w) + l.eval(&zp, &w)));
        assert_eq!(l.eval(&w, &sum), frac(l.eval(&w, &z) + l.eval(&w, &zp)));
    }
}

#[test]
fn dot_pairing_scales_the_linking_value() {
    // two Z/4 summands linked by the identity-like table
    let orders = vec![4u64, 4];
    let table = vec![
        vec![Rational64::new(1, 4), Rational64::zero()],
        vec![Rational64::zero(), Rational64::new(3, 4)],
    ];
    let l = LinkingForm::new(orders.clone(), orders.clone(), table).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(54);
    for _ in 0..200 {
        let z: Vec<u64> = orders.iter().map(|&d| rng.gen_range(0..d)).collect();
        let zp = vec![rng.gen_range(0..4u64) | 1, 0]; // odd coefficient: exact order 4
        let got = dot_pairing(&l, &z, &zp, 4).unwrap();
        let expect = l.eval(&z, &zp) * Rational64::from_integer(4);
        assert!(expect.is_integer());
        assert_eq!(got, expect.to_integer().rem_euclid(4) as u64, "z = {z:?}, zp = {zp:?}");
    }
}

#[test]
fn nondegeneracy_detection_on_small_forms() {
    let unit = LinkingForm::new(
        vec![5],
        vec![5],
        vec![vec![Rational64::new(2, 5)]],
    )
    .unwrap();
    assert!(is_nondegenerate(&unit).unwrap());
    let degenerate = LinkingForm::new(
        vec![5, 5],
        vec![5, 5],
        vec![
            vec![Rational64::new(1, 5), Rational64::zero()],
            vec![Rational64::zero(), Rational64::zero()],
        ],
    )
    .unwrap();
    assert!(!is_nondegenerate(&degenerate).unwrap());
    // a non-bilinear table is rejected outright
    assert!(LinkingForm::new(vec![2], vec![2], vec![vec![Rational64::new(1, 3)]]).is_err());
}
