//! Fox calculus against a Magnus power-series oracle. The two sides are
//! computed by unrelated algorithms: Fox derivatives by word recursion,
//! Magnus coefficients by multiplying truncated noncommutative series.

mod common;

use common::{magnus_coefficient, magnus_expansion};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use torsionkit::fox::{fox_derivative, higher_fox_derivative, FreeWord, WordSum};

fn random_word(rng: &mut ChaCha8Rng, gens: usize, len: usize) -> FreeWord {
    let letters = (0..len)
        .map(|_| (rng.gen_range(0..gens), if rng.gen_bool(0.5) { 1i8 } else { -1 }))
        .collect();
    FreeWord { letters }.freely_reduced()
}

fn all_tuples(gens: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..gens).map(move |g| {
                    let mut t2 = t.clone();
                    t2.push(g);
                    t2
                })
            })
            .collect();
    }
    out
}

#[test]
fn magnus_matches_hand_expansion_on_a_two_letter_word() {
    // (1+A)(1+B) = 1 + A + B + AB
    let w = FreeWord::gen(0).concat(&FreeWord::gen(1));
    let m = magnus_expansion(&w, 2);
    assert_eq!(m.coefficient(&[]), BigInt::one());
    assert_eq!(m.coefficient(&[0]), BigInt::one());
    assert_eq!(m.coefficient(&[1]), BigInt::one());
    assert_eq!(m.coefficient(&[0, 1]), BigInt::one());
    assert_eq!(m.coefficient(&[1, 0]), BigInt::zero());
    // the monomial X_0 X_1 pairs with the derivative taken in reverse order
    let d = higher_fox_derivative(&w, &[1, 0]).unwrap();
    assert_eq!(d.aug(), BigInt::one());
    let d = higher_fox_derivative(&w, &[0, 1]).unwrap();
    assert_eq!(d.aug(), BigInt::zero());
}

#[test]
fn magnus_inverts_letters_exactly() {
    // x x^-1 must expand to 1 despite the infinite series for x^-1
    let w = FreeWord::gen(0).concat(&FreeWord::gen(0).inverse());
    let m = magnus_expansion(&FreeWord { letters: w.letters.clone() }, 4);
    assert_eq!(m.coefficient(&[]), BigInt::one());
    for t in all_tuples(1, 1).iter().chain(&all_tuples(1, 2)).chain(&all_tuples(1, 3)) {
        assert_eq!(m.coefficient(t), BigInt::zero(), "residual term at {t:?}");
    }
}

#[test]
fn fox_derivatives_match_magnus_coefficients_on_random_words() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for trial in 0..150 {
        let gens = rng.gen_range(1..=3);
        let len = rng.gen_range(0..=8);
        let w = random_word(&mut rng, gens, len);
        for order in 1..=3usize {
            for tuple in all_tuples(gens, order) {
                let d = higher_fox_derivative(&w, &tuple).unwrap();
                let reversed: Vec<usize> = tuple.iter().rev().cloned().collect();
                assert_eq!(
                    d.aug(),
                    magnus_coefficient(&w, &reversed),
                    "trial {trial}: w = {w}, tuple {tuple:?}"
                );
            }
        }
    }
}

#[test]
fn fox_derivative_satisfies_the_product_rule() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for _ in 0..100 {
        let gens = rng.gen_range(1..=3);
        let (lu, lv) = (rng.gen_range(0..=6), rng.gen_range(0..=6));
        let u = random_word(&mut rng, gens, lu);
        let v = random_word(&mut rng, gens, lv);
        for j in 0..gens {
            let whole = fox_derivative(&u.concat(&v), j);
            let parts = fox_derivative(&u, j).add(&fox_derivative(&v, j).left_mul(&u));
            assert_eq!(whole, parts, "u = {u}, v = {v}, j = {j}");
        }
    }
}

#[test]
fn fox_derivative_of_an_inverse_flips_with_a_prefix() {
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    for _ in 0..100 {
        let gens = rng.gen_range(1..=3);
        let len = rng.gen_range(0..=6);
        let w = random_word(&mut rng, gens, len);
        for j in 0..gens {
            let lhs = fox_derivative(&w.inverse(), j);
            let rhs = fox_derivative(&w, j).left_mul(&w.inverse()).neg();
            assert_eq!(lhs, rhs, "w = {w}, j = {j}");
        }
    }
}

#[test]
fn fundamental_identity_recovers_the_word() {
    // sum_j dw/dx_j (x_j - 1) = w - 1 in the group ring
    let mut rng = ChaCha8Rng::seed_from_u64(44);
    for _ in 0..100 {
        let gens = rng.gen_range(1..=3);
        let len = rng.gen_range(0..=8);
        let w = random_word(&mut rng, gens, len);
        let mut sum = WordSum::zero();
        for j in 0..gens {
            let mut xj_minus_one = WordSum::from_word(&FreeWord::gen(j));
            xj_minus_one.add_term(FreeWord::empty(), BigInt::from(-1));
            sum = sum.add(&fox_derivative(&w, j).mul(&xj_minus_one));
        }
        let mut expect = WordSum::from_word(&w);
        expect.add_term(FreeWord::empty(), BigInt::from(-1));
        assert_eq!(sum, expect, "w = {w}");
    }
}

#[test]
fn commutator_words_have_no_linear_magnus_part() {
    let mut rng = ChaCha8Rng::seed_from_u64(45);
    for _ in 0..50 {
        let gens = 3;
        let (la, lb) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
        let a = random_word(&mut rng, gens, la);
        let b = random_word(&mut rng, gens, lb);
        let c = FreeWord::commutator(&a, &b);
        for j in 0..gens {
            assert_eq!(
                magnus_coefficient(&c, &[j]),
                BigInt::zero(),
                "commutator [{a}, {b}] has linear term in X_{j}"
            );
        }
    }
}
