//! Determinants of alternating and higher-order trilinear forms over exact
//! polynomial rings.
//!
//! A form f on L x K x K (or L x K^{m+1}) with rank L = rank K - 1 induces a
//! rectangular matrix theta over the symmetric algebra on K*. Striking any
//! one column i makes theta square, and det theta(i) = (-1)^i a_i* d for one
//! polynomial d independent of i. This module computes d by exact division,
//! verifies the strike-independence for every column, and implements the
//! change-of-basis covariance d -> [a'/a][b'/b] d and orientation sign
//! refinement.

use crate::error::{Error, Result};
pub use crate::poly::MultiPoly;
use crate::ring::RingTag;
use crate::zmat::{self, ZMat};
use num_bigint::BigInt;
use num_traits::Zero;

/// Trilinear form on L x K x K, antisymmetric in the two K slots, stored as
/// the table f[i][j][k] of values on basis vectors (i over L, j and k over
/// K, all 0-based). rank L = rank K - 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlternatingForm {
    pub ring: RingTag,
    n: usize,
    table: Vec<Vec<Vec<BigInt>>>,
}

impl AlternatingForm {
    /// Validates the (n-1) x n x n shape and antisymmetry in the last two
    /// indices (after coefficient reduction, so 2-torsion entries mod even r
    /// are fine).
    pub fn new(ring: RingTag, table: Vec<Vec<Vec<BigInt>>>) -> Result<Self> {
        let n = table.len() + 1;
        if n < 2 {
            return Err(Error::Invalid("alternating form needs K of rank >= 2".into()));
        }
        let mut table = table;
        for row in &mut table {
            if row.len() != n {
                return Err(Error::Invalid("form table is not (n-1) x n x n".into()));
            }
            for col in row.iter_mut() {
                if col.len() != n {
                    return Err(Error::Invalid("form table is not (n-1) x n x n".into()));
                }
                for v in col.iter_mut() {
                    ring.reduce(v);
                }
            }
        }
        for (i, row) in table.iter().enumerate() {
            for j in 0..n {
                for k in 0..n {
                    let mut s = &row[j][k] + &row[k][j];
                    ring.reduce(&mut s);
                    if !s.is_zero() {
                        return Err(Error::Invalid(format!(
                            "form not antisymmetric at [{}][{}][{}]",
                            i + 1,
                            j + 1,
                            k + 1
                        )));
                    }
                }
            }
        }
        Ok(AlternatingForm { ring, n, table })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Rank of L, always n - 1.
    pub fn l_rank(&self) -> usize {
        self.n - 1
    }

    pub fn value(&self, i: usize, j: usize, k: usize) -> &BigInt {
        &self.table[i][j][k]
    }
}

/// Order-m form on L x K^{m+1} with the first K slot distinguished:
/// table[i][j][t] holds f(b_i; a_j, a_{t_1}, ..., a_{t_m}) where t runs over
/// ordered m-tuples (stored at mixed-radix index t_1 n^{m-1} + ... + t_m).
/// Construction requires the symmetrized contraction f_0 to vanish.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MasseyForm {
    pub ring: RingTag,
    order: usize,
    n: usize,
    table: Vec<Vec<Vec<BigInt>>>,
}

pub fn tuple_index(tuple: &[usize], n: usize) -> usize {
    tuple.iter().fold(0, |acc, &t| acc * n + t)
}

/// All ordered m-tuples over 0..n, in the mixed-radix index order.
pub fn all_tuples(n: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..m {
        let mut next = Vec::with_capacity(out.len() * n);
        for t in &out {
            for v in 0..n {
                let mut t2 = t.clone();
                t2.push(v);
                next.push(t2);
            }
        }
        out = next;
    }
    out
}

fn f0_raw(ring: RingTag, order: usize, n: usize, table: &[Vec<Vec<BigInt>>], i: usize) -> MultiPoly {
    // f_0(b_i) = sum over all (m+1)-tuples of f(b_i, a_{j}, a_{t}) a_j* prod a_t*
    let mut out = MultiPoly::zero(ring, n);
    for j in 0..n {
        for (ti, tuple) in all_tuples(n, order).iter().enumerate() {
            let c = &table[i][j][ti];
            if c.is_zero() {
                continue;
            }
            let mut exps = vec![0u32; n];
            exps[j] += 1;
            for &t in tuple {
                exps[t] += 1;
            }
            out.add_term(exps, c.clone());
        }
    }
    out
}

impl MasseyForm {
    pub fn new(ring: RingTag, order: usize, n: usize, table: Vec<Vec<Vec<BigInt>>>) -> Result<Self> {
        if order == 0 {
            return Err(Error::Invalid("form order must be >= 1".into()));
        }
        if n < 2 || table.len() + 1 != n {
            return Err(Error::Invalid("form table must have n-1 rows with n >= 2".into()));
        }
        let tuples = n.pow(order as u32);
        let mut table = table;
        for row in &mut table {
            if row.len() != n {
                return Err(Error::Invalid("form table row is not length n".into()));
            }
            for col in row.iter_mut() {
                if col.len() != tuples {
                    return Err(Error::Invalid(format!(
                        "form table needs {tuples} tuple entries per (i, j)"
                    )));
                }
                for v in col.iter_mut() {
                    ring.reduce(v);
                }
            }
        }
        for i in 0..n - 1 {
            let f0 = f0_raw(ring, order, n, &table, i);
            if !f0.is_zero() {
                return Err(Error::Degenerate(format!(
                    "f_0 does not vanish on L basis vector {}: {f0}",
                    i + 1
                )));
            }
        }
        Ok(MasseyForm { ring, order, n, table })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn value(&self, i: usize, j: usize, tuple: &[usize]) -> &BigInt {
        &self.table[i][j][tuple_index(tuple, self.n)]
    }

    /// Order-1 form from an alternating table (the two agree when m = 1).
    pub fn from_alternating(f: &AlternatingForm) -> Self {
        MasseyForm { ring: f.ring, order: 1, n: f.n, table: f.table.clone() }
    }
}

/// Basis change with unit determinant, columns holding the new basis vectors
/// in old coordinates.
#[derive(Debug, Clone)]
pub struct ChangeOfBasis {
    pub ring: RingTag,
    pub mat: ZMat,
}

impl ChangeOfBasis {
    pub fn new(ring: RingTag, mat: ZMat) -> Result<Self> {
        let n = mat.len();
        if mat.iter().any(|r| r.len() != n) {
            return Err(Error::NotSquare { rows: n, cols: mat.first().map_or(0, |r| r.len()) });
        }
        let d = zmat::det(&mat);
        if !ring.is_unit(&d) {
            return Err(Error::Invalid(format!(
                "change of basis determinant {d} is not a unit of {}",
                ring.name()
            )));
        }
        Ok(ChangeOfBasis { ring, mat })
    }

    pub fn det(&self) -> BigInt {
        zmat::det(&self.mat)
    }

    pub fn size(&self) -> usize {
        self.mat.len()
    }
}

/// theta_{ij} = sum_k f[i][j][k] a_k*, an (n-1) x n matrix of linear forms.
pub fn theta_matrix(f: &AlternatingForm) -> Vec<Vec<MultiPoly>> {
    let n = f.n();
    (0..n - 1)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut p = MultiPoly::zero(f.ring, n);
                    for k in 0..n {
                        let c = f.value(i, j, k);
                        if !c.is_zero() {
                            let mut exps = vec![0u32; n];
                            exps[k] = 1;
                            p.add_term(exps, c.clone());
                        }
                    }
                    p
                })
                .collect()
        })
        .collect()
}

/// g applied to (b_i, a_j): the degree-m polynomial
/// sum_tuples f[i][j][tuple] a_{t_1}* ... a_{t_m}*.
pub fn massey_g(f: &MasseyForm, i: usize, j: usize) -> MultiPoly {
    let n = f.n();
    let mut p = MultiPoly::zero(f.ring, n);
    for (ti, tuple) in all_tuples(n, f.order()).iter().enumerate() {
        let c = &f.table[i][j][ti];
        if c.is_zero() {
            continue;
        }
        let mut exps = vec![0u32; n];
        for &t in tuple {
            exps[t] += 1;
        }
        p.add_term(exps, c.clone());
    }
    p
}

/// The symmetrized contraction that must vanish for the strike determinant
/// to be well defined; the constructor already guarantees zero.
pub fn massey_f0(f: &MasseyForm, i: usize) -> MultiPoly {
    f0_raw(f.ring, f.order, f.n, &f.table, i)
}

/// theta matrix of a Massey form: entry (i, j) = massey_g(f, i, j).
pub fn massey_theta(f: &MasseyForm) -> Vec<Vec<MultiPoly>> {
    (0..f.n() - 1)
        .map(|i| (0..f.n()).map(|j| massey_g(f, i, j)).collect())
        .collect()
}

/// Cofactor determinant of a square polynomial matrix; the empty matrix has
/// determinant 1.
pub fn poly_det(m: &[Vec<MultiPoly>], ring: RingTag, vars: usize) -> Result<MultiPoly> {
    let n = m.len();
    if m.iter().any(|row| row.len() != n) {
        return Err(Error::NotSquare { rows: n, cols: m.first().map_or(0, |r| r.len()) });
    }
    fn go(m: &[Vec<MultiPoly>], cols: &[usize], ring: RingTag, vars: usize) -> Result<MultiPoly> {
        if cols.is_empty() {
            return Ok(MultiPoly::constant(ring, vars, BigInt::from(1)));
        }
        let row = m.len() - cols.len();
        let mut acc = MultiPoly::zero(ring, vars);
        for (pos, &j) in cols.iter().enumerate() {
            let e = &m[row][j];
            if e.is_zero() {
                continue;
            }
            let rest: Vec<usize> = cols.iter().copied().filter(|&c| c != j).collect();
            let term = e.mul(&go(m, &rest, ring, vars)?)?;
            acc = if pos % 2 == 0 { acc.add(&term)? } else { acc.sub(&term)? };
        }
        Ok(acc)
    }
    go(m, &(0..n).collect::<Vec<_>>(), ring, vars)
}

fn theta_determinant_at(
    theta: &[Vec<MultiPoly>],
    ring: RingTag,
    n: usize,
    strike: usize,
) -> Result<MultiPoly> {
    let sub: Vec<Vec<MultiPoly>> = theta
        .iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .filter(|&(j, _)| j != strike)
                .map(|(_, p)| p.clone())
                .collect()
        })
        .collect();
    let det = poly_det(&sub, ring, n)?;
    let mut cand = det.divide_by_var(strike)?;
    // det theta(i) = (-1)^i a_i* d with 1-based i
    if (strike + 1) % 2 == 1 {
        cand = cand.neg();
    }
    Ok(cand)
}

fn determinant_from_theta(theta: &[Vec<MultiPoly>], ring: RingTag, n: usize) -> Result<MultiPoly> {
    let mut d: Option<MultiPoly> = None;
    for strike in 0..n {
        let cand = theta_determinant_at(theta, ring, n, strike)?;
        match &d {
            None => d = Some(cand),
            Some(prev) => {
                if *prev != cand {
                    return Err(Error::Degenerate(format!(
                        "strike column {} yields a different determinant",
                        strike + 1
                    )));
                }
            }
        }
    }
    Ok(d.expect("n >= 2 strikes"))
}

/// The unique d with det theta(i) = (-1)^i a_i* d, homogeneous of degree
/// n - 2; every strike column is computed and compared, and the division by
/// a_i* must be exact.
pub fn form_determinant(f: &AlternatingForm) -> Result<MultiPoly> {
    determinant_from_theta(&theta_matrix(f), f.ring, f.n())
}

/// The quotient (-1)^strike det theta(strike) / a_strike* at a single
/// 1-based strike column, skipping the cross-strike consistency sweep.
/// Agrees with form_determinant whenever that succeeds; it is also defined
/// for forms over Z/2^k whose diagonal entries are nonzero, where only some
/// strike columns divide evenly.
pub fn form_determinant_at(f: &AlternatingForm, strike: usize) -> Result<MultiPoly> {
    let n = f.n();
    if strike == 0 || strike > n {
        return Err(Error::Invalid(format!("strike column {strike} outside 1..{n}")));
    }
    theta_determinant_at(&theta_matrix(f), f.ring, n, strike - 1)
}

/// The order-m analogue, homogeneous of degree m(n-1) - 1.
pub fn massey_determinant(f: &MasseyForm) -> Result<MultiPoly> {
    determinant_from_theta(&massey_theta(f), f.ring, f.n())
}

/// Transforms the table under new bases a' = a C_a of K and b' = b C_b of L
/// (columns of each matrix hold new vectors in old coordinates).
pub fn change_of_basis(
    f: &AlternatingForm,
    c_a: &ChangeOfBasis,
    c_b: &ChangeOfBasis,
) -> Result<AlternatingForm> {
    let n = f.n();
    if c_a.size() != n || c_b.size() != n - 1 || c_a.ring != f.ring || c_b.ring != f.ring {
        return Err(Error::Invalid("basis-change sizes or rings do not match the form".into()));
    }
    let mut table = vec![vec![vec![BigInt::zero(); n]; n]; n - 1];
    for i in 0..n - 1 {
        for j in 0..n {
            for k in 0..n {
                let mut acc = BigInt::zero();
                for t in 0..n - 1 {
                    let cb = &c_b.mat[t][i];
                    if cb.is_zero() {
                        continue;
                    }
                    for s in 0..n {
                        let ca = &c_a.mat[s][j];
                        if ca.is_zero() {
                            continue;
                        }
                        for u in 0..n {
                            acc += cb * ca * &c_a.mat[u][k] * f.value(t, s, u);
                        }
                    }
                }
                table[i][j][k] = acc;
            }
        }
    }
    AlternatingForm::new(f.ring, table)
}

/// Change of basis for order-m forms, same conventions.
pub fn massey_change_of_basis(
    f: &MasseyForm,
    c_a: &ChangeOfBasis,
    c_b: &ChangeOfBasis,
) -> Result<MasseyForm> {
    let n = f.n();
    let m = f.order();
    if c_a.size() != n || c_b.size() != n - 1 || c_a.ring != f.ring || c_b.ring != f.ring {
        return Err(Error::Invalid("basis-change sizes or rings do not match the form".into()));
    }
    let tuples = all_tuples(n, m);
    let mut table = vec![vec![vec![BigInt::zero(); tuples.len()]; n]; n - 1];
    for i in 0..n - 1 {
        for j in 0..n {
            for (ti, tuple) in tuples.iter().enumerate() {
                let mut acc = BigInt::zero();
                for t in 0..n - 1 {
                    let cb = &c_b.mat[t][i];
                    if cb.is_zero() {
                        continue;
                    }
                    for s in 0..n {
                        let ca = &c_a.mat[s][j];
                        if ca.is_zero() {
                            continue;
                        }
                        for (si, src) in tuples.iter().enumerate() {
                            let v = &f.table[t][s][si];
                            if v.is_zero() {
                                continue;
                            }
                            let mut w = cb * ca * v;
                            for (&tl, &sl) in tuple.iter().zip(src.iter()) {
                                w *= &c_a.mat[sl][tl];
                            }
                            acc += w;
                        }
                    }
                }
                table[i][j][ti] = acc;
            }
        }
    }
    MasseyForm::new(f.ring, m, n, table)
}

/// Multiplies by an orientation sign, +1 or -1.
pub fn sign_refine(d: &MultiPoly, orientation_sign: i64) -> Result<MultiPoly> {
    match orientation_sign {
        1 => Ok(d.clone()),
        -1 => Ok(d.neg()),
        _ => Err(Error::Invalid(format!("orientation sign must be +1 or -1, got {orientation_sign}"))),
    }
}
