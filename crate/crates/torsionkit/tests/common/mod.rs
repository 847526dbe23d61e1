//! Shared oracles for the integration suites: a Magnus power-series
//! expansion, an integer row-echelon lattice for ideal-power membership,
//! and pseudo-basis enumeration over small p-groups. Everything here is
//! written against first principles on purpose, so the library under test
//! never supplies its own expected values.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use num_rational::Rational64;
use torsionkit::abelian::{dot_pairing, AbelianGroup, GroupElement, LinkingForm, PseudoBasis};
use torsionkit::zmatrix::ZMat;
use torsionkit::fox::FreeWord;
use torsionkit::groupring::GroupRingElement;
use torsionkit::ring::RingTag;

// ---------- Magnus expansion ----------

/// Noncommutative power series truncated below a total degree: a map from
/// letter sequences to coefficients.
#[derive(Clone)]
pub struct Magnus {
    pub max_deg: usize,
    pub terms: BTreeMap<Vec<usize>, BigInt>,
}

impl Magnus {
    pub fn one(max_deg: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Vec::new(), BigInt::one());
        Magnus { max_deg, terms }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut terms: BTreeMap<Vec<usize>, BigInt> = BTreeMap::new();
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                if u.len() + v.len() > self.max_deg {
                    continue;
                }
                let mut w = u.clone();
                w.extend_from_slice(v);
                let e = terms.entry(w).or_insert_with(BigInt::zero);
                *e += a * b;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Magnus { max_deg: self.max_deg, terms }
    }

    pub fn coefficient(&self, word: &[usize]) -> BigInt {
        self.terms.get(word).cloned().unwrap_or_else(BigInt::zero)
    }
}

/// x -> 1 + X, x^-1 -> 1 - X + X^2 - ... truncated.
fn letter_series(g: usize, sign: i8, max_deg: usize) -> Magnus {
    let mut terms = BTreeMap::new();
    if sign > 0 {
        terms.insert(Vec::new(), BigInt::one());
        terms.insert(vec![g], BigInt::one());
    } else {
        let mut c = BigInt::one();
        for d in 0..=max_deg {
            terms.insert(vec![g; d], c.clone());
            c = -c;
        }
    }
    Magnus { max_deg, terms }
}

pub fn magnus_expansion(w: &FreeWord, max_deg: usize) -> Magnus {
    let mut acc = Magnus::one(max_deg);
    for &(g, s) in &w.letters {
        acc = acc.mul(&letter_series(g, s, max_deg));
    }
    acc
}

/// Coefficient of the monomial X_{i1}...X_{ik} in the expansion of w.
pub fn magnus_coefficient(w: &FreeWord, word: &[usize]) -> BigInt {
    magnus_expansion(w, word.len()).coefficient(word)
}

// ---------- integer lattices ----------

/// Row-echelon integer lattice with gcd-minimal pivots; supports exact
/// membership tests. Rows are kept sorted by pivot column.
#[derive(Clone)]
pub struct Lattice {
    pub dim: usize,
    rows: Vec<Vec<BigInt>>,
}

fn pivot(v: &[BigInt]) -> Option<usize> {
    v.iter().position(|c| !c.is_zero())
}

impl Lattice {
    pub fn new(dim: usize) -> Self {
        Lattice { dim, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    /// Inserts a vector, maintaining echelon shape by extended-gcd
    /// combination at clashing pivots.
    pub fn insert(&mut self, mut v: Vec<BigInt>) {
        assert_eq!(v.len(), self.dim, "vector length mismatch");
        let mut i = 0;
        while let Some(p) = pivot(&v) {
            // find the row slot whose pivot is >= p
            while i < self.rows.len() && pivot(&self.rows[i]).unwrap() < p {
                i += 1;
            }
            if i == self.rows.len() || pivot(&self.rows[i]).unwrap() > p {
                if v[p].is_negative() {
                    for c in v.iter_mut() {
                        *c = -std::mem::take(c);
                    }
                }
                self.rows.insert(i, v);
                return;
            }
            let rp = self.rows[i][p].clone();
            let vp = v[p].clone();
            if (&vp % &rp).is_zero() {
                let q = &vp / &rp;
                for (c, r) in v.iter_mut().zip(&self.rows[i]) {
                    *c -= &q * r;
                }
            } else {
                // replace the row pivot by the gcd, push the remainder back
                let (g, x, y) = ext_gcd(&rp, &vp);
                let combo: Vec<BigInt> = self.rows[i]
                    .iter()
                    .zip(&v)
                    .map(|(a, b)| &x * a + &y * b)
                    .collect();
                let q1 = &rp / &g;
                let q2 = &vp / &g;
                let reduced: Vec<BigInt> = self.rows[i]
                    .iter()
                    .zip(&v)
                    .map(|(a, b)| &q2 * a - &q1 * b)
                    .collect();
                self.rows[i] = combo;
                v = reduced;
            }
        }
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        assert_eq!(v.len(), self.dim, "vector length mismatch");
        let mut v = v.to_vec();
        for row in &self.rows {
            let p = pivot(row).unwrap();
            if v[..p].iter().any(|c| !c.is_zero()) {
                return false;
            }
            if v[p].is_zero() {
                continue;
            }
            if !(&v[p] % &row[p]).is_zero() {
                return false;
            }
            let q = &v[p] / &row[p];
            for (c, r) in v.iter_mut().zip(row) {
                *c -= &q * r;
            }
        }
        v.iter().all(|c| c.is_zero())
    }
}

fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    if b.is_zero() {
        if a.is_negative() {
            return (-a.clone(), -BigInt::one(), BigInt::zero());
        }
        return (a.clone(), BigInt::one(), BigInt::zero());
    }
    let (g, x, y) = ext_gcd(b, &(a % b));
    let q = a / b;
    (g, y.clone(), x - q * y)
}

// ---------- group ring truncation oracle ----------

/// Finite model of Z[H]/I^k for H = Z^a x T: the module Z[T] tensor the
/// polynomials in one nilpotent variable per free generator, truncated at
/// total degree k. Free generators map to 1 + s_i (units), so the model is
/// a surjective image of Z[H], and the ideal-power lattice is built from
/// first principles by repeated products with the augmentation generators.
pub struct GroupRingOracle {
    pub group: AbelianGroup,
    pub k: usize,
    tor_sizes: Vec<u64>,
    s_monomials: Vec<Vec<u32>>,
}

impl GroupRingOracle {
    pub fn new(group: AbelianGroup, k: usize) -> Self {
        let a = group.free_rank;
        let mut s_monomials = vec![vec![0u32; a]];
        let mut frontier = s_monomials.clone();
        for _ in 1..k {
            let mut next = Vec::new();
            for m in &frontier {
                for i in 0..a {
                    let mut m2 = m.clone();
                    m2[i] += 1;
                    if s_monomials.contains(&m2) || next.contains(&m2) {
                        continue;
                    }
                    next.push(m2);
                }
            }
            s_monomials.extend(next.iter().cloned());
            frontier = next;
        }
        s_monomials.sort();
        GroupRingOracle { tor_sizes: group.torsion_orders.clone(), group, k, s_monomials }
    }

    pub fn dim(&self) -> usize {
        let t: usize = self.tor_sizes.iter().map(|&d| d as usize).product();
        t * self.s_monomials.len()
    }

    fn tor_index(&self, tor: &[u64]) -> usize {
        let mut idx = 0usize;
        for (c, &d) in tor.iter().zip(&self.tor_sizes) {
            idx = idx * d as usize + (*c % d) as usize;
        }
        idx
    }

    fn index(&self, tor: &[u64], mono: &[u32]) -> usize {
        let m = self.s_monomials.binary_search(&mono.to_vec()).expect("monomial in range");
        self.tor_index(tor) * self.s_monomials.len() + m
    }

    /// Adds c * t * s^mono * (1+s_i)^e into the vector, expanding the
    /// binomial (negative e through the inverted series).
    fn add_free_power(
        &self,
        v: &mut [BigInt],
        tor: &[u64],
        mono: &[u32],
        i: usize,
        e: i64,
        c: &BigInt,
    ) {
        let deg: u32 = mono.iter().sum();
        if deg as usize >= self.k {
            return;
        }
        if e == 0 {
            v[self.index(tor, mono)] += c;
            return;
        }
        let mut m2 = mono.to_vec();
        if e > 0 {
            // (1+s)^e = sum C(e, j) s^j
            let mut coef = BigInt::one();
            for j in 0..=(self.k - 1 - deg as usize) {
                m2[i] = mono[i] + j as u32;
                v[self.index(tor, &m2)] += c * &coef;
                coef = coef * BigInt::from(e - j as i64) / BigInt::from(j as i64 + 1);
            }
        } else {
            // (1+s)^e = sum C(-e+j-1, j) (-s)^j
            let e = -e;
            let mut coef = BigInt::one();
            for j in 0..=(self.k - 1 - deg as usize) {
                m2[i] = mono[i] + j as u32;
                let signed = if j % 2 == 0 { coef.clone() } else { -coef.clone() };
                v[self.index(tor, &m2)] += c * signed;
                coef = coef * BigInt::from(e + j as i64) / BigInt::from(j as i64 + 1);
            }
        }
    }

    fn add_element(&self, v: &mut [BigInt], g: &GroupElement, c: &BigInt) {
        // fold in free coordinates one at a time
        let mut partial: Vec<(Vec<u32>, BigInt)> =
            vec![(vec![0; self.group.free_rank], c.clone())];
        for (i, &e) in g.free.iter().enumerate() {
            let mut next: Vec<(Vec<u32>, BigInt)> = Vec::new();
            for (mono, coef) in &partial {
                let mut tmp = vec![BigInt::zero(); self.dim()];
                self.add_free_power(&mut tmp, &g.tor, mono, i, e, coef);
                for (idx, val) in tmp.iter().enumerate() {
                    if val.is_zero() {
                        continue;
                    }
                    let m = &self.s_monomials[idx % self.s_monomials.len()];
                    next.push((m.clone(), val.clone()));
                }
            }
            partial = next;
        }
        for (mono, coef) in partial {
            v[self.index(&g.tor, &mono)] += coef;
        }
    }

    pub fn embed(&self, x: &GroupRingElement) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.dim()];
        for (g, c) in &x.terms {
            self.add_element(&mut v, g, c);
        }
        v
    }

    /// Basis vectors of the model as (torsion coords, monomial) pairs.
    fn basis_tags(&self) -> Vec<(Vec<u64>, Vec<u32>)> {
        let mut tors = vec![vec![0u64; self.tor_sizes.len()]];
        for (j, &d) in self.tor_sizes.iter().enumerate() {
            let mut next = Vec::with_capacity(tors.len() * d as usize);
            for t in &tors {
                for c in 0..d {
                    let mut t2 = t.clone();
                    t2[j] = c;
                    next.push(t2);
                }
            }
            tors = next;
        }
        let mut out = Vec::new();
        for t in tors {
            for m in &self.s_monomials {
                out.push((t.clone(), m.clone()));
            }
        }
        out
    }

    /// Multiplies a coordinate vector by one augmentation generator:
    /// either s_i (free index) or (g_j - 1) (torsion index).
    fn mul_generator(&self, v: &[BigInt], gen: &OracleGen) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); self.dim()];
        for (idx, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let t_idx = idx / self.s_monomials.len();
            let mono = &self.s_monomials[idx % self.s_monomials.len()];
            let tor = self.tor_from_index(t_idx);
            match gen {
                OracleGen::Free(i) => {
                    let deg: u32 = mono.iter().sum();
                    if (deg as usize) + 1 < self.k {
                        let mut m2 = mono.clone();
                        m2[*i] += 1;
                        out[self.index(&tor, &m2)] += c;
                    }
                }
                OracleGen::Torsion(j) => {
                    let mut t2 = tor.clone();
                    t2[*j] = (t2[*j] + 1) % self.tor_sizes[*j];
                    out[self.index(&t2, mono)] += c;
                    out[self.index(&tor, mono)] -= c;
                }
            }
        }
        out
    }

    fn tor_from_index(&self, mut idx: usize) -> Vec<u64> {
        let mut tor = vec![0u64; self.tor_sizes.len()];
        for (j, &d) in self.tor_sizes.iter().enumerate().rev() {
            tor[j] = (idx % d as usize) as u64;
            idx /= d as usize;
        }
        tor
    }

    /// The lattice of I^k inside the model, built as iterated products of
    /// the augmentation generators against a model basis.
    pub fn ideal_power_lattice(&self, k: usize) -> Lattice {
        let mut gens: Vec<OracleGen> = (0..self.group.free_rank).map(OracleGen::Free).collect();
        gens.extend((0..self.tor_sizes.len()).map(OracleGen::Torsion));
        // I^1: module basis times each generator
        let mut lat = Lattice::new(self.dim());
        for (tor, mono) in self.basis_tags() {
            let mut unit = vec![BigInt::zero(); self.dim()];
            unit[self.index(&tor, &mono)] = BigInt::one();
            for g in &gens {
                lat.insert(self.mul_generator(&unit, g));
            }
        }
        for _ in 1..k {
            let mut next = Lattice::new(self.dim());
            for row in lat.basis() {
                for g in &gens {
                    next.insert(self.mul_generator(row, g));
                }
            }
            lat = next;
        }
        lat
    }
}

enum OracleGen {
    Free(usize),
    Torsion(usize),
}

/// Product of j random augmentation generators (h - 1), as a group ring
/// element: a generic member of I^j.
pub fn deep_ideal_element(
    rng: &mut ChaCha8Rng,
    group: &AbelianGroup,
    j: usize,
) -> GroupRingElement {
    let mut acc = GroupRingElement::one(RingTag::Int, group.clone());
    for _ in 0..j {
        let g = random_element(rng, group);
        let mut f = GroupRingElement::from_element(RingTag::Int, group.clone(), g);
        f.add_term(group.zero(), BigInt::from(-1));
        acc = acc.mul(&f).unwrap();
    }
    acc
}

/// A uniformly small random element of the group.
pub fn random_element(rng: &mut ChaCha8Rng, group: &AbelianGroup) -> GroupElement {
    GroupElement {
        free: (0..group.free_rank).map(|_| rng.gen_range(-2..=2)).collect(),
        tor: group.torsion_orders.iter().map(|&d| rng.gen_range(0..d)).collect(),
    }
}

/// A random group ring element with a few small-support terms.
pub fn random_group_ring_element(
    rng: &mut ChaCha8Rng,
    ring: RingTag,
    group: &AbelianGroup,
) -> GroupRingElement {
    let mut x = GroupRingElement::zero(ring, group.clone());
    let terms = rng.gen_range(1..=4);
    for _ in 0..terms {
        let free: Vec<i64> = (0..group.free_rank).map(|_| rng.gen_range(-2..=2)).collect();
        let tor: Vec<u64> =
            group.torsion_orders.iter().map(|&d| rng.gen_range(0..d)).collect();
        let c = BigInt::from(rng.gen_range(-3i64..=3));
        x.add_term(GroupElement { free, tor }, c);
    }
    x
}

// ---------- linking forms ----------

/// Random bilinear pairing on the given cyclic orders: each entry is a
/// multiple of 1/gcd(d_i, d_j), which is exactly the bilinearity constraint.
pub fn random_linking_form(rng: &mut ChaCha8Rng, orders: &[u64]) -> LinkingForm {
    let table = orders
        .iter()
        .map(|&di| {
            orders
                .iter()
                .map(|&dj| {
                    let g = gcd(di, dj) as i64;
                    Rational64::new(rng.gen_range(0..g), g)
                })
                .collect()
        })
        .collect();
    LinkingForm::new(orders.to_vec(), orders.to_vec(), table).expect("bilinear by construction")
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

// ---------- pseudo-bases ----------

/// All pseudo-bases of the p-group with the given canonical orders, as
/// element tuples; `limit` switches to seeded random sampling when the
/// exhaustive count would pass it.
pub fn pseudo_bases(
    group: &AbelianGroup,
    p: u64,
    limit: usize,
    samples: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<PseudoBasis> {
    let elements = group.torsion_elements();
    let want = group.torsion_orders.len();
    let candidates: Vec<Vec<&GroupElement>> = {
        // elements matching each slot's order
        let mut slots = Vec::with_capacity(want);
        for &d in &group.torsion_orders {
            slots.push(
                elements
                    .iter()
                    .filter(|e| group.element_order(e) == Some(d))
                    .collect::<Vec<_>>(),
            );
        }
        slots
    };
    let mut found = Vec::new();
    let mut tuple = vec![0usize; want];
    'outer: loop {
        let els: Vec<GroupElement> =
            (0..want).map(|i| candidates[i][tuple[i]].clone()).collect();
        if let Ok(pb) = PseudoBasis::new_validated(group.clone(), els, p) {
            found.push(pb);
            if found.len() > limit {
                break;
            }
        }
        for i in (0..want).rev() {
            tuple[i] += 1;
            if tuple[i] < candidates[i].len() {
                continue 'outer;
            }
            tuple[i] = 0;
        }
        break;
    }
    if found.len() <= limit {
        return found;
    }
    // too many to enumerate: sample instead
    let mut out = Vec::new();
    let mut guard = 0;
    while out.len() < samples && guard < samples * 1000 {
        guard += 1;
        let els: Vec<GroupElement> = candidates
            .iter()
            .map(|slot| (*slot.choose(rng).expect("nonempty slot")).clone())
            .collect();
        if let Ok(pb) = PseudoBasis::new_validated(group.clone(), els, p) {
            out.push(pb);
        }
    }
    assert!(out.len() == samples, "sampling pseudo-bases stalled");
    out
}

// ---------- linking volume values ----------

/// det of the dot-pairing matrix of a pseudo-basis pair, reduced mod r.
pub fn direct_value(l: &LinkingForm, zb: &PseudoBasis, wb: &PseudoBasis, r: u64) -> BigInt {
    let b = zb.elements.len();
    let mut m = vec![vec![BigInt::from(0); b]; b];
    for (i, row) in m.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = BigInt::from(
                dot_pairing(l, &zb.elements[i].tor, &wb.elements[j].tor, r).unwrap(),
            );
        }
    }
    RingTag::Mod(r).reduced(torsionkit::zmatrix::det(&m))
}

/// Change matrix whose columns are the coordinates of the new pseudo-basis
/// in the canonical one.
pub fn change_matrix(canonical: &PseudoBasis, new: &PseudoBasis) -> ZMat {
    let b = new.elements.len();
    let mut c = vec![vec![BigInt::from(0); b]; b];
    for (i, e) in new.elements.iter().enumerate() {
        let coords = coords_in_pseudo_basis(canonical, e).expect("spans the group");
        for (beta, &x) in coords.iter().enumerate() {
            c[beta][i] = BigInt::from(x);
        }
    }
    c
}

/// Coordinates of an element in a pseudo-basis, by brute enumeration.
pub fn coords_in_pseudo_basis(pb: &PseudoBasis, e: &GroupElement) -> Option<Vec<u64>> {
    let mut coords = vec![0u64; pb.elements.len()];
    loop {
        let mut acc = pb.ambient.zero();
        for (i, &c) in coords.iter().enumerate() {
            acc = pb.ambient.add(&acc, &pb.ambient.mul_scalar(&pb.elements[i], c as i64));
        }
        if acc == *e {
            return Some(coords);
        }
        let mut i = coords.len();
        loop {
            if i == 0 {
                return None;
            }
            i -= 1;
            coords[i] += 1;
            if coords[i] < pb.orders[i] {
                break;
            }
            coords[i] = 0;
        }
    }
}
