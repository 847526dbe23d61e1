//! Finitely generated abelian groups in invariant-factor form, Smith normal
//! form, primary parts with pseudo-bases, and finite linking forms valued in
//! Q/Z. These are the coefficient-side objects every other module builds on.

use crate::error::{Error, Result};
use crate::ring::is_prime;
use crate::zmat::{self, ZMat};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Rational64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

/// Z^free_rank ⊕ Z_{d_1} ⊕ ... ⊕ Z_{d_t} with d_1 | d_2 | ... and every d_i ≥ 2.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbelianGroup {
    pub free_rank: usize,
    pub torsion_orders: Vec<u64>,
}

impl AbelianGroup {
    pub fn new(free_rank: usize, torsion_orders: Vec<u64>) -> Result<Self> {
        for w in torsion_orders.windows(2) {
            if w[1] % w[0] != 0 {
                return Err(Error::Invalid(format!(
                    "torsion orders must form a divisibility chain, got {} before {}",
                    w[0], w[1]
                )));
            }
        }
        if torsion_orders.iter().any(|&d| d < 2) {
            return Err(Error::Invalid("torsion orders must all be >= 2".into()));
        }
        Ok(AbelianGroup { free_rank, torsion_orders })
    }

    pub fn free(free_rank: usize) -> Self {
        AbelianGroup { free_rank, torsion_orders: Vec::new() }
    }

    /// Canonicalizes an arbitrary list of cyclic orders into invariant factors,
    /// e.g. (2, 4, 3) becomes (2, 12).
    pub fn canonical(free_rank: usize, orders: &[u64]) -> Self {
        let diag: ZMat = (0..orders.len())
            .map(|i| {
                (0..orders.len())
                    .map(|j| if i == j { BigInt::from(orders[i]) } else { BigInt::zero() })
                    .collect()
            })
            .collect();
        let (_, d, _) = zmat::smith_normal_form(&diag);
        let mut chain: Vec<u64> = (0..orders.len())
            .map(|i| u64::try_from(&d[i][i]).expect("invariant factor fits u64"))
            .filter(|&x| x >= 2)
            .collect();
        chain.sort_unstable();
        AbelianGroup { free_rank, torsion_orders: chain }
    }

    pub fn torsion_rank(&self) -> usize {
        self.torsion_orders.len()
    }

    pub fn torsion_order(&self) -> BigInt {
        self.torsion_orders.iter().map(|&d| BigInt::from(d)).product()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement {
            free: vec![0; self.free_rank],
            tor: vec![0; self.torsion_orders.len()],
        }
    }

    /// i-th free basis element.
    pub fn free_gen(&self, i: usize) -> GroupElement {
        let mut z = self.zero();
        z.free[i] = 1;
        z
    }

    /// j-th torsion generator (of order torsion_orders[j]).
    pub fn torsion_gen(&self, j: usize) -> GroupElement {
        let mut z = self.zero();
        z.tor[j] = 1;
        z
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        let free = a.free.iter().zip(&b.free).map(|(x, y)| x + y).collect();
        let tor = a
            .tor
            .iter()
            .zip(&b.tor)
            .zip(&self.torsion_orders)
            .map(|((x, y), &d)| (x + y) % d)
            .collect();
        GroupElement { free, tor }
    }

    pub fn neg(&self, a: &GroupElement) -> GroupElement {
        let free = a.free.iter().map(|x| -x).collect();
        let tor = a
            .tor
            .iter()
            .zip(&self.torsion_orders)
            .map(|(&x, &d)| if x == 0 { 0 } else { d - x })
            .collect();
        GroupElement { free, tor }
    }

    pub fn mul_scalar(&self, a: &GroupElement, c: i64) -> GroupElement {
        let free = a.free.iter().map(|x| x * c).collect();
        let tor = a
            .tor
            .iter()
            .zip(&self.torsion_orders)
            .map(|(&x, &d)| {
                let v = (x as i128 * c as i128).rem_euclid(d as i128);
                v as u64
            })
            .collect();
        GroupElement { free, tor }
    }

    /// None means infinite order.
    pub fn element_order(&self, a: &GroupElement) -> Option<u64> {
        if a.free.iter().any(|&x| x != 0) {
            return None;
        }
        let mut o: u64 = 1;
        for (&c, &d) in a.tor.iter().zip(&self.torsion_orders) {
            let od = d / c.gcd(&d);
            o = o.lcm(&od);
        }
        Some(o)
    }

    /// All torsion elements (free coordinates zero). Desk-scale groups only.
    pub fn torsion_elements(&self) -> Vec<GroupElement> {
        let mut out = vec![self.zero()];
        for (j, &d) in self.torsion_orders.iter().enumerate() {
            let mut next = Vec::with_capacity(out.len() * d as usize);
            for e in &out {
                for c in 0..d {
                    let mut e2 = e.clone();
                    e2.tor[j] = c;
                    next.push(e2);
                }
            }
            out = next;
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupElement {
    pub free: Vec<i64>,
    pub tor: Vec<u64>,
}

impl GroupElement {
    pub fn is_zero(&self) -> bool {
        self.free.iter().all(|&x| x == 0) && self.tor.iter().all(|&x| x == 0)
    }
}

/// Smith normal form U * A * V = D with U, V unimodular, D = diag(d_1, ..),
/// d_i > 0, d_1 | d_2 | ... .
pub fn smith_normal_form(a: &ZMat) -> (ZMat, ZMat, ZMat) {
    zmat::smith_normal_form(a)
}

/// Cokernel of the row lattice: Z^cols / rowspace(A), as a canonical group
/// plus the images of the standard generators e_1, ..., e_cols.
pub fn cokernel(a: &ZMat, cols: usize) -> Result<(AbelianGroup, Vec<GroupElement>)> {
    if a.iter().any(|r| r.len() != cols) {
        return Err(Error::Invalid("ragged relation matrix".into()));
    }
    let (d, ops) = zmat::smith_with_ops(a);
    let mut v = zmat::identity(cols);
    for op in &ops {
        match op {
            zmat::ElOp::ColSwap(..) | zmat::ElOp::ColAdd(..) => zmat::apply_op(&mut v, op),
            _ => {}
        }
    }
    let rank = (0..a.len().min(cols)).take_while(|&i| !d[i][i].is_zero()).count();
    let diag: Vec<u64> = (0..rank)
        .map(|i| u64::try_from(&d[i][i]).expect("positive invariant factor"))
        .collect();
    let kept: Vec<usize> = (0..rank).filter(|&i| diag[i] >= 2).collect();
    let group = AbelianGroup::new(
        cols - rank,
        kept.iter().map(|&i| diag[i]).collect(),
    )?;
    // e_j maps to row j of V, torsion coordinates mod d_i, free ones beyond rank
    let mut gens = Vec::with_capacity(cols);
    for j in 0..cols {
        let tor = kept
            .iter()
            .map(|&i| {
                let m = BigInt::from(diag[i]);
                u64::try_from(&v[j][i].mod_floor(&m)).expect("reduced coordinate")
            })
            .collect();
        let free = (rank..cols)
            .map(|i| i64::try_from(&v[j][i]).expect("free coordinate fits i64"))
            .collect();
        gens.push(GroupElement { free, tor });
    }
    Ok((group, gens))
}

/// Pseudo-basis of a finite abelian p-group sitting inside an ambient group:
/// independent elements of prime-power order whose spans add up directly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PseudoBasis {
    pub ambient: AbelianGroup,
    pub elements: Vec<GroupElement>,
    pub orders: Vec<u64>,
}

impl PseudoBasis {
    /// Validates: nondecreasing prime-power orders, stated orders exact, and
    /// the span is a direct sum of the stated cyclic sizes (by enumeration).
    pub fn new_validated(
        ambient: AbelianGroup,
        elements: Vec<GroupElement>,
        p: u64,
    ) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NonPrime(p));
        }
        let orders: Vec<u64> = elements
            .iter()
            .map(|e| {
                ambient
                    .element_order(e)
                    .ok_or_else(|| Error::Invalid("pseudo-basis element of infinite order".into()))
            })
            .collect::<Result<_>>()?;
        for &o in &orders {
            let mut m = o;
            while m % p == 0 {
                m /= p;
            }
            if m != 1 || o == 1 {
                return Err(Error::Invalid(format!(
                    "pseudo-basis orders must be positive powers of {p}, got {o}"
                )));
            }
        }
        if orders.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::Invalid("pseudo-basis orders must be nondecreasing".into()));
        }
        let expect: u128 = orders.iter().map(|&o| o as u128).product();
        if expect > 1_000_000 {
            return Err(Error::Invalid("pseudo-basis span too large to validate".into()));
        }
        let mut span = std::collections::BTreeSet::new();
        let mut stack = vec![(0usize, ambient.zero())];
        while let Some((i, acc)) = stack.pop() {
            if i == elements.len() {
                span.insert(acc);
                continue;
            }
            let mut cur = acc.clone();
            for c in 0..orders[i] {
                if c > 0 {
                    cur = ambient.add(&cur, &elements[i]);
                }
                stack.push((i + 1, cur.clone()));
            }
        }
        if span.len() as u128 != expect {
            return Err(Error::Invalid(
                "pseudo-basis elements are not independent of the stated orders".into(),
            ));
        }
        Ok(PseudoBasis { ambient, elements, orders })
    }
}

/// p-primary part of the torsion: the subgroup of elements of p-power order,
/// with its canonical pseudo-basis (scaled invariant-factor generators, taken
/// in generator order, which also breaks ties between equal orders).
pub fn primary_part(h: &AbelianGroup, p: u64) -> Result<(AbelianGroup, PseudoBasis)> {
    if !is_prime(p) {
        return Err(Error::NonPrime(p));
    }
    let mut orders = Vec::new();
    let mut elements = Vec::new();
    for (i, &d) in h.torsion_orders.iter().enumerate() {
        let mut s = 0u32;
        let mut m = d;
        while m % p == 0 {
            m /= p;
            s += 1;
        }
        if s > 0 {
            let pk = p.pow(s);
            orders.push(pk);
            // (d / p^s) * g_i has exact order p^s
            elements.push(h.mul_scalar(&h.torsion_gen(i), (d / pk) as i64));
        }
    }
    let sub = AbelianGroup::new(0, orders.clone())?;
    let pb = PseudoBasis { ambient: h.clone(), elements, orders };
    Ok((sub, pb))
}

/// Finite bilinear linking form H x H' -> Q/Z given by values on generators;
/// `left_orders` / `right_orders` are the cyclic orders of the two generator
/// lists. Values are reduced into [0, 1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkingForm {
    pub left_orders: Vec<u64>,
    pub right_orders: Vec<u64>,
    pub table: Vec<Vec<Rational64>>,
}

fn frac_mod1(x: Rational64) -> Rational64 {
    let f = x.floor();
    x - f
}

impl LinkingForm {
    pub fn new(
        left_orders: Vec<u64>,
        right_orders: Vec<u64>,
        table: Vec<Vec<Rational64>>,
    ) -> Result<Self> {
        if table.len() != left_orders.len()
            || table.iter().any(|r| r.len() != right_orders.len())
        {
            return Err(Error::Invalid("linking table shape mismatch".into()));
        }
        let table: Vec<Vec<Rational64>> =
            table.into_iter().map(|r| r.into_iter().map(frac_mod1).collect()).collect();
        for (i, row) in table.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                let li = Rational64::from_integer(left_orders[i] as i64) * v;
                let rj = Rational64::from_integer(right_orders[j] as i64) * v;
                if !li.is_integer() || !rj.is_integer() {
                    return Err(Error::Invalid(format!(
                        "linking value at ({}, {}) violates bilinearity: {}",
                        i + 1,
                        j + 1,
                        v
                    )));
                }
            }
        }
        Ok(LinkingForm { left_orders, right_orders, table })
    }

    /// Bilinear extension to coefficient vectors over the two generator lists.
    pub fn eval(&self, z: &[u64], w: &[u64]) -> Rational64 {
        let mut acc = Rational64::zero();
        for (i, &zi) in z.iter().enumerate() {
            for (j, &wj) in w.iter().enumerate() {
                acc += Rational64::from_integer((zi as i64) * (wj as i64)) * self.table[i][j];
            }
        }
        frac_mod1(acc)
    }

    /// Serialization per the interchange format: reduced fractions keyed by
    /// "i,j" generator index pairs (1-based), zeros omitted.
    pub fn to_json(&self) -> serde_json::Value {
        let mut map = serde_json::Map::new();
        for (i, row) in self.table.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    map.insert(format!("{},{}", i + 1, j + 1), serde_json::Value::String(v.to_string()));
                }
            }
        }
        serde_json::Value::Object(map)
    }
}

fn order_of_coeffs(orders: &[u64], coeffs: &[u64]) -> u64 {
    let mut o: u64 = 1;
    for (&c, &d) in coeffs.iter().zip(orders) {
        o = o.lcm(&(d / c.gcd(&d)));
    }
    o
}

fn p_power_of(o: u64, p: u64) -> Option<u32> {
    let mut m = o;
    let mut s = 0;
    while m % p == 0 {
        m /= p;
        s += 1;
    }
    (m == 1).then_some(s)
}

/// The mod-r dot pairing z . z' = p^k L(z, z') where p^k is the order of z'
/// (or of z when z' does not have p-power order), reduced into Z_r, r = p^s.
/// The two sides agree whenever both orders equal the same power of p; for
/// mixed p-power orders the z'-side is the one used.
pub fn dot_pairing(l: &LinkingForm, z: &[u64], zp: &[u64], r: u64) -> Result<u64> {
    let (p, _s) = crate::ring::prime_power(r).ok_or(Error::NonPrimePower(r))?;
    let o_right = order_of_coeffs(&l.right_orders, zp);
    let o_left = order_of_coeffs(&l.left_orders, z);
    let pk = if p_power_of(o_right, p).is_some() && o_right % r == 0 {
        o_right
    } else if p_power_of(o_left, p).is_some() && o_left % r == 0 {
        o_left
    } else if l.eval(z, zp).is_zero() {
        return Ok(0); // either argument kills the pairing outright
    } else {
        return Err(Error::Invalid(format!(
            "dot pairing needs one side of order a multiple of r = {r} and a power of {p}, \
             got orders {o_left} and {o_right}"
        )));
    };
    let val = l.eval(z, zp) * Rational64::from_integer(pk as i64);
    if !val.is_integer() {
        return Err(Error::Invalid(format!(
            "pairing value {} is not integral at order {pk}",
            val
        )));
    }
    Ok((val.to_integer().rem_euclid(pk as i64) as u64) % r)
}

/// Nondegeneracy of a finite linking form by kernel enumeration; errors when
/// the two sides have different orders.
pub fn is_nondegenerate(l: &LinkingForm) -> Result<bool> {
    let size_l: u128 = l.left_orders.iter().map(|&d| d as u128).product();
    let size_r: u128 = l.right_orders.iter().map(|&d| d as u128).product();
    if size_l != size_r {
        return Err(Error::Invalid(format!(
            "linking form sides have different orders: {size_l} vs {size_r}"
        )));
    }
    if size_l > 1_000_000 {
        return Err(Error::Invalid("linking form too large for kernel enumeration".into()));
    }
    // enumerate raw coefficient tuples over the stated generators
    let mut tuples = vec![vec![0u64; l.left_orders.len()]];
    for (j, &d) in l.left_orders.iter().enumerate() {
        let mut next = Vec::with_capacity(tuples.len() * d as usize);
        for t in &tuples {
            for c in 0..d {
                let mut t2 = t.clone();
                t2[j] = c;
                next.push(t2);
            }
        }
        tuples = next;
    }
    for t in &tuples {
        if t.iter().all(|&c| c == 0) {
            continue;
        }
        let mut pairs_to_zero = true;
        for j in 0..l.right_orders.len() {
            let mut e = vec![0u64; l.right_orders.len()];
            e[j] = 1;
            if !l.eval(t, &e).is_zero() {
                pairs_to_zero = false;
                break;
            }
        }
        if pairs_to_zero {
            return Ok(false);
        }
    }
    Ok(true)
}
