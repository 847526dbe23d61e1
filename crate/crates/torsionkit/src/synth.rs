//! Seeded random inputs for the checkers: nice presentations in all three
//! modes, alternating and higher-order forms, unimodular change-of-basis
//! matrices, and standalone commutator expansions. Everything is driven by a
//! ChaCha8 stream so a failing case reproduces from its seed alone.

use num_bigint::BigInt;
use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::abelian::{cokernel, primary_part, LinkingForm};
use crate::detform::{all_tuples, tuple_index, AlternatingForm, ChangeOfBasis, MasseyForm};
use crate::error::Result;
use crate::fox::{CommutatorExpansion, FreeWord, Presentation};
use crate::pipeline::NicePresentation;
use crate::ring::{prime_power, RingTag};
use crate::zmat::{self, ZMat};

/// The deterministic stream all samplers run on.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Nonempty freely reduced word over generators 1..=gens with the given
/// letter budget.
pub fn random_word(rng: &mut ChaCha8Rng, gens: usize, len: usize) -> FreeWord {
    assert!(gens > 0 && len > 0, "need at least one generator and letter");
    loop {
        let mut w = FreeWord::empty();
        for _ in 0..len {
            let g = rng.gen_range(0..gens);
            let s = if rng.gen_bool(0.5) { 1 } else { -1 };
            w = w.concat(&FreeWord::gen(g).power(s));
        }
        let w = w.freely_reduced();
        if !w.is_empty() {
            return w;
        }
    }
}

/// Random alternating form on (n-1) relative classes and n dual classes,
/// entries in [-3, 3].
pub fn random_alternating_form(rng: &mut ChaCha8Rng, ring: RingTag, n: usize) -> AlternatingForm {
    let mut table = vec![vec![vec![BigInt::from(0); n]; n]; n - 1];
    for row in table.iter_mut() {
        for j in 0..n {
            for p in j + 1..n {
                let c = BigInt::from(rng.gen_range(-3i64..=3));
                row[j][p] = c.clone();
                row[p][j] = -c;
            }
        }
    }
    AlternatingForm::new(ring, table).expect("antisymmetric by construction")
}

/// Random order-2 form with vanishing symmetrization, built by antisymmetrizing
/// a random tensor under cyclic rotation of the full index word: every
/// f[i][j][(a,b)] is u[(a,b,j)] - u[(b,j,a)], so the symmetric function f0
/// telescopes to zero.
pub fn random_massey_form(rng: &mut ChaCha8Rng, n: usize) -> MasseyForm {
    let words = all_tuples(n, 3);
    let tuples = all_tuples(n, 2);
    let mut form_table = Vec::new();
    for _ in 0..n - 1 {
        let u: Vec<BigInt> =
            (0..words.len()).map(|_| BigInt::from(rng.gen_range(-2i64..=2))).collect();
        let mut row = vec![vec![BigInt::from(0); tuples.len()]; n];
        for (j, rj) in row.iter_mut().enumerate() {
            for t in &tuples {
                let (a, b) = (t[0], t[1]);
                let fwd = tuple_index(&[a, b, j], n);
                let rot = tuple_index(&[b, j, a], n);
                rj[tuple_index(t, n)] = &u[fwd] - &u[rot];
            }
        }
        form_table.push(row);
    }
    MasseyForm::new(RingTag::Int, 2, n, form_table).expect("rotation trick kills f0")
}

/// Random unimodular matrix: a short product of elementary operations on the
/// identity, with an optional sign flip. Entries stay small.
pub fn random_unimodular(rng: &mut ChaCha8Rng, size: usize, ring: RingTag) -> ChangeOfBasis {
    let mut m = zmat::identity(size);
    if size > 1 {
        for _ in 0..rng.gen_range(2..=5) {
            let a = rng.gen_range(0..size);
            let mut b = rng.gen_range(0..size);
            while b == a {
                b = rng.gen_range(0..size);
            }
            let c = BigInt::from(*[-2i64, -1, 1, 2].get(rng.gen_range(0..4)).unwrap());
            for r in 0..size {
                let add = &m[r][b] * &c;
                m[r][a] += add;
            }
        }
    }
    if rng.gen_bool(0.5) {
        for r in 0..size {
            let v = -m[r][0].clone();
            m[r][0] = v;
        }
    }
    ChangeOfBasis::new(ring, m).expect("elementary products are unimodular")
}

/// Random nice presentation for the integral check: free rank n in {2,3}, up
/// to two torsion generators with |T| <= 4, commutator relators carrying
/// their expansions.
pub fn random_integral_presentation(rng: &mut ChaCha8Rng) -> NicePresentation {
    let n = rng.gen_range(2..=3);
    let t = rng.gen_range(0..=2usize);
    let orders: Vec<u64> = match t {
        0 => vec![],
        1 => vec![[2u64, 3, 4][rng.gen_range(0..3)]],
        _ => vec![2, 2],
    };
    let m = n + orders.len();
    let mut relators = Vec::new();
    let mut expansions = Vec::new();
    for _ in 0..n - 1 {
        let genus = rng.gen_range(1..=3);
        let max_len = if genus >= 3 { 1 } else { 2 };
        let pairs: Vec<(FreeWord, FreeWord)> = (0..genus)
            .map(|_| {
                let la = rng.gen_range(1..=max_len);
                let lb = rng.gen_range(1..=max_len);
                (random_word(rng, m, la), random_word(rng, m, lb))
            })
            .collect();
        let e = CommutatorExpansion::commutators_only(pairs);
        relators.push(e.expand());
        expansions.push(Some(e));
    }
    for (j, &d) in orders.iter().enumerate() {
        let mut w = FreeWord::gen(n + j).power(d as i64);
        if rng.gen_bool(0.5) {
            // a commutator tail leaves the abelianized row alone
            let a = random_word(rng, m, 1);
            let b = random_word(rng, m, 1);
            w = w.concat(&FreeWord::commutator(&a, &b)).freely_reduced();
        }
        relators.push(w);
        expansions.push(None);
    }
    let p = Presentation::new(m, n, relators, None).expect("sampler keeps the count balanced");
    NicePresentation::new(p, expansions, None).expect("expansions expand to their relators")
}

/// Random nice presentation for the mod-r check at a prime power r: block
/// rank b in {2,3}, relators made of commutators and r-th powers of words in
/// the block generators, an optional prime-to-p cyclic factor, and a
/// delta-normalized linking table on the torsion of H.
pub fn random_mod_r_presentation(rng: &mut ChaCha8Rng, r: u64) -> NicePresentation {
    let (p, _) = prime_power(r).expect("sampler needs a prime power");
    let b = rng.gen_range(2..=3);
    // free rank of H; the strike column must have infinite order, so n >= 2
    let n = rng.gen_range(2..=b);
    let extra: Vec<u64> = if rng.gen_bool(0.5) {
        let choices: Vec<u64> = [2u64, 3].iter().copied().filter(|d| d % p != 0).collect();
        vec![choices[rng.gen_range(0..choices.len())]]
    } else {
        vec![]
    };
    let m = b + extra.len();
    let mut relators = Vec::new();
    let mut expansions = Vec::new();
    // rows 1..n-1: products of commutators, abelianizing to zero
    for _ in 0..n - 1 {
        let genus = rng.gen_range(1..=2);
        let pairs: Vec<(FreeWord, FreeWord)> = (0..genus)
            .map(|_| {
                let la = rng.gen_range(1..=2);
                let lb = rng.gen_range(1..=2);
                (random_word(rng, m, la), random_word(rng, m, lb))
            })
            .collect();
        let e = CommutatorExpansion { pairs, power_words: Vec::new(), power_exponent: 0 };
        relators.push(e.expand());
        expansions.push(Some(e));
    }
    // rows n..b-1: commutators times r-th powers abelianizing to r e_c, so
    // generator c presents a Z_r factor and x_c is its canonical image
    for c in n..b {
        let genus = rng.gen_range(0..=1);
        let pairs: Vec<(FreeWord, FreeWord)> = (0..genus)
            .map(|_| {
                let la = rng.gen_range(1..=2);
                let lb = rng.gen_range(1..=2);
                (random_word(rng, m, la), random_word(rng, m, lb))
            })
            .collect();
        let lu = rng.gen_range(1..=2);
        let u = random_word(rng, m, lu);
        let principal = u.concat(&FreeWord::gen(c)).concat(&u.inverse()).freely_reduced();
        let mut power_words = vec![principal];
        if rng.gen_bool(0.4) {
            // a cancelling pair of extra power blocks keeps the row sum r e_c
            let lw = rng.gen_range(1..=2);
            let w = random_word(rng, b, lw);
            let v = random_word(rng, m, 1);
            let back = v.concat(&w.inverse()).concat(&v.inverse()).freely_reduced();
            power_words.push(w);
            power_words.push(back);
        }
        let e = CommutatorExpansion { pairs, power_words, power_exponent: r };
        relators.push(e.expand());
        expansions.push(Some(e));
    }
    for (j, &d) in extra.iter().enumerate() {
        relators.push(FreeWord::gen(b + j).power(d as i64));
        expansions.push(None);
    }
    let pres = Presentation::new(m, b, relators, None).expect("sampler keeps the count balanced");
    let linking = normalized_linking(&pres, p, r).expect("sampler torsion is r-compatible");
    NicePresentation::new(pres, expansions, linking).expect("expansions expand to their relators")
}

/// The delta-normalized linking table for a presentation's H: diagonal
/// entries solved so the canonical p-primary pseudo-bases pair to the
/// identity matrix mod r. Returns None when H has no p-torsion.
pub fn normalized_linking(pres: &Presentation, p: u64, r: u64) -> Result<Option<LinkingForm>> {
    let (h, _) = cokernel(&pres.abelianized_matrix(), pres.num_generators)?;
    if !h.torsion_orders.iter().any(|&d| d % p == 0) {
        return Ok(None);
    }
    let (_, pb) = primary_part(&h, p)?;
    let t = h.torsion_orders.len();
    let mut table = vec![vec![Rational64::from_integer(0); t]; t];
    let mut pb_idx = 0;
    for (i, &d) in h.torsion_orders.iter().enumerate() {
        if d % p != 0 {
            continue;
        }
        let pk = pb.orders[pb_idx];
        pb_idx += 1;
        let u = BigInt::from(d / pk);
        let u2 = &u * &u;
        let a = RingTag::Mod(r)
            .inv(&RingTag::Mod(r).reduced(u2))
            .expect("d/p^s is prime to p, hence a unit mod r");
        // entry a / p^s: the pseudo-basis vector (d/p^s) g_i then pairs with
        // itself to a (d/p^s)^2 / p^s, and dot pairing sees a (d/p^s)^2 = 1 mod r
        let a_i64 = i64::try_from(&a).expect("residue fits");
        table[i][i] = Rational64::new(a_i64, pk as i64);
    }
    Ok(Some(LinkingForm::new(
        h.torsion_orders.clone(),
        h.torsion_orders.clone(),
        table,
    )?))
}

/// Random nice presentation satisfying the order-2 vanishing condition: the
/// free-block relators are products of doubly nested commutators, so every
/// Fox derivative of order up to 2 has zero augmentation.
pub fn random_massey_presentation(rng: &mut ChaCha8Rng) -> NicePresentation {
    let n = rng.gen_range(2..=3);
    let t = usize::from(rng.gen_bool(0.5));
    let m = n + t;
    let mut relators = Vec::new();
    let mut expansions = Vec::new();
    for _ in 0..n - 1 {
        let brackets = rng.gen_range(1..=2);
        let mut pairs = Vec::new();
        for _ in 0..brackets {
            let alpha = random_word(rng, m, 1);
            let beta = random_word(rng, n, 1);
            let gamma = random_word(rng, n, 1);
            pairs.push((alpha, FreeWord::commutator(&beta, &gamma)));
        }
        let e = CommutatorExpansion::commutators_only(pairs);
        relators.push(e.expand());
        expansions.push(Some(e));
    }
    for j in 0..t {
        relators.push(FreeWord::gen(n + j).power(2));
        expansions.push(None);
    }
    let p = Presentation::new(m, n, relators, None).expect("sampler keeps the count balanced");
    NicePresentation::new(p, expansions, None).expect("expansions expand to their relators")
}

/// Random standalone expansion for congruence fuzzing: `r = 0` gives pure
/// commutator products, `r > 0` adds a block of r-th powers.
pub fn random_expansion(rng: &mut ChaCha8Rng, gens: usize, r: u64) -> CommutatorExpansion {
    let genus = rng.gen_range(0..=2);
    let pairs: Vec<(FreeWord, FreeWord)> = (0..genus)
        .map(|_| {
            let la = rng.gen_range(1..=3);
            let lb = rng.gen_range(1..=3);
            (random_word(rng, gens, la), random_word(rng, gens, lb))
        })
        .collect();
    let mut gammas = if r > 0 { rng.gen_range(0..=2usize) } else { 0 };
    if genus == 0 && gammas == 0 && r > 0 {
        gammas = 1;
    }
    let power_words: Vec<FreeWord> = (0..gammas)
        .map(|_| {
            let l = rng.gen_range(1..=2);
            random_word(rng, gens, l)
        })
        .collect();
    let mut e = CommutatorExpansion {
        power_exponent: if power_words.is_empty() { 0 } else { r },
        pairs,
        power_words,
    };
    if e.pairs.is_empty() && e.power_words.is_empty() {
        e.pairs.push((random_word(rng, gens, 1), random_word(rng, gens, 1)));
    }
    e
}

/// Random unimodular square matrix as raw rows (for volume form evaluation).
pub fn random_unimodular_rows(rng: &mut ChaCha8Rng, size: usize) -> ZMat {
    if size == 0 {
        return zmat::zeros(0, 0);
    }
    random_unimodular(rng, size, RingTag::Int).mat
}
