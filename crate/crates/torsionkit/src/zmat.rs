//! Exact integer matrices: products, cofactor determinants, Smith normal form
//! with a recorded elementary-operation log (so callers can replay the moves
//! on other objects, e.g. relator words), and Hermite-style row echelon used
//! for lattice normal forms.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type ZMat = Vec<Vec<BigInt>>;

pub fn from_i64(rows: &[Vec<i64>]) -> ZMat {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

pub fn zeros(r: usize, c: usize) -> ZMat {
    vec![vec![BigInt::zero(); c]; r]
}

pub fn identity(n: usize) -> ZMat {
    let mut m = zeros(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = BigInt::one();
    }
    m
}

pub fn mul(a: &ZMat, b: &ZMat) -> ZMat {
    let (ra, ca) = dims(a);
    let cb = if b.is_empty() { 0 } else { b[0].len() };
    assert_eq!(ca, b.len(), "inner dimensions must agree");
    let mut out = zeros(ra, cb);
    for i in 0..ra {
        for k in 0..ca {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..cb {
                let t = &a[i][k] * &b[k][j];
                out[i][j] += t;
            }
        }
    }
    out
}

pub fn dims(a: &ZMat) -> (usize, usize) {
    (a.len(), a.first().map_or(0, |r| r.len()))
}

/// Cofactor determinant; matrices here stay small (block sizes at most ~6).
pub fn det(a: &ZMat) -> BigInt {
    let (r, c) = dims(a);
    assert_eq!(r, c, "determinant needs a square matrix");
    if r == 0 {
        return BigInt::one();
    }
    if r == 1 {
        return a[0][0].clone();
    }
    let mut acc = BigInt::zero();
    for (j, top) in a[0].iter().enumerate() {
        if top.is_zero() {
            continue;
        }
        let minor: ZMat = a[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(k, _)| *k != j)
                    .map(|(_, v)| v.clone())
                    .collect()
            })
            .collect();
        let term = top * det(&minor);
        if j % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// Elementary moves over Z. `RowAdd(a, b, c)` means row_a += c * row_b,
/// `ColAdd(a, b, c)` means col_a += c * col_b.
#[derive(Debug, Clone)]
pub enum ElOp {
    RowSwap(usize, usize),
    RowNeg(usize),
    RowAdd(usize, usize, BigInt),
    ColSwap(usize, usize),
    ColAdd(usize, usize, BigInt),
}

pub fn apply_op(m: &mut ZMat, op: &ElOp) {
    match op {
        ElOp::RowSwap(a, b) => m.swap(*a, *b),
        ElOp::RowNeg(a) => {
            for v in m[*a].iter_mut() {
                *v = -v.clone();
            }
        }
        ElOp::RowAdd(a, b, c) => {
            let src = m[*b].clone();
            for (v, s) in m[*a].iter_mut().zip(src.iter()) {
                *v += c * s;
            }
        }
        ElOp::ColSwap(a, b) => {
            for row in m.iter_mut() {
                row.swap(*a, *b);
            }
        }
        ElOp::ColAdd(a, b, c) => {
            for row in m.iter_mut() {
                let t = c * &row[*b];
                row[*a] += t;
            }
        }
    }
}

/// Smith normal form with recorded moves: returns (D, ops) where replaying
/// `ops` on the input gives D = diag(d_1, ..., d_rank, 0, ...), d_i > 0 and
/// d_1 | d_2 | ... . Replay row ops on an identity to get U, column ops for V,
/// with U * A * V = D.
pub fn smith_with_ops(a: &ZMat) -> (ZMat, Vec<ElOp>) {
    let mut m = a.clone();
    let (nr, nc) = dims(&m);
    let mut ops: Vec<ElOp> = Vec::new();
    let mut rec = |m: &mut ZMat, op: ElOp| {
        apply_op(m, &op);
        ops.push(op);
    };
    let mut k = 0;
    while k < nr && k < nc {
        // smallest nonzero entry of the trailing submatrix becomes the pivot
        let pick = |m: &ZMat| -> Option<(usize, usize)> {
            let mut best: Option<(usize, usize)> = None;
            for i in k..nr {
                for j in k..nc {
                    if !m[i][j].is_zero()
                        && best.map_or(true, |(bi, bj)| m[i][j].abs() < m[bi][bj].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            best
        };
        if pick(&m).is_none() {
            break;
        }
        loop {
            let (pi, pj) = pick(&m).expect("pivot vanished");
            if pi != k {
                rec(&mut m, ElOp::RowSwap(pi, k));
            }
            if pj != k {
                rec(&mut m, ElOp::ColSwap(pj, k));
            }
            for i in k + 1..nr {
                if !m[i][k].is_zero() {
                    let q = &m[i][k] / &m[k][k];
                    if !q.is_zero() {
                        rec(&mut m, ElOp::RowAdd(i, k, -q));
                    }
                }
            }
            for j in k + 1..nc {
                if !m[k][j].is_zero() {
                    let q = &m[k][j] / &m[k][k];
                    if !q.is_zero() {
                        rec(&mut m, ElOp::ColAdd(j, k, -q));
                    }
                }
            }
            let col_clean = (k + 1..nr).all(|i| m[i][k].is_zero());
            let row_clean = (k + 1..nc).all(|j| m[k][j].is_zero());
            if !(col_clean && row_clean) {
                continue; // remainders shrank; re-pick the pivot
            }
            // divisibility: every remaining entry must be a multiple of the pivot
            let bad = (k + 1..nr)
                .flat_map(|i| (k + 1..nc).map(move |j| (i, j)))
                .find(|&(i, j)| !(&m[i][j] % &m[k][k]).is_zero());
            match bad {
                Some((i, _)) => rec(&mut m, ElOp::RowAdd(k, i, BigInt::one())),
                None => break,
            }
        }
        if m[k][k].is_negative() {
            rec(&mut m, ElOp::RowNeg(k));
        }
        k += 1;
    }
    (m, ops)
}

/// Public SNF: U * A * V = D with U, V unimodular.
pub fn smith_normal_form(a: &ZMat) -> (ZMat, ZMat, ZMat) {
    let (nr, nc) = dims(a);
    let (d, ops) = smith_with_ops(a);
    let mut u = identity(nr);
    let mut v = identity(nc);
    for op in &ops {
        match op {
            ElOp::RowSwap(..) | ElOp::RowNeg(..) | ElOp::RowAdd(..) => apply_op(&mut u, op),
            _ => apply_op(&mut v, op),
        }
    }
    (u, d, v)
}

/// Row echelon over Z with positive pivots, processing columns left to right.
/// Returns the echelon rows (zero rows dropped) and their (pivot column, row)
/// list in column order. Deterministic, so downstream normal forms are too.
pub fn row_echelon(rows: Vec<Vec<BigInt>>) -> (ZMat, Vec<(usize, usize)>) {
    let mut m: ZMat = rows;
    let nc = m.first().map_or(0, |r| r.len());
    let nr = m.len();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut top = 0;
    for col in 0..nc {
        loop {
            let mut best: Option<usize> = None;
            for i in top..nr {
                if !m[i][col].is_zero()
                    && best.map_or(true, |b| m[i][col].abs() < m[b][col].abs())
                {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            m.swap(top, b);
            let mut again = false;
            for i in top + 1..nr {
                if !m[i][col].is_zero() {
                    let q = &m[i][col] / &m[top][col];
                    if !q.is_zero() {
                        let src = m[top].clone();
                        for (v, s) in m[i].iter_mut().zip(src.iter()) {
                            *v -= &q * s;
                        }
                    }
                    if !m[i][col].is_zero() {
                        again = true;
                    }
                }
            }
            if again {
                continue;
            }
            if m[top][col].is_negative() {
                for v in m[top].iter_mut() {
                    *v = -v.clone();
                }
            }
            pivots.push((col, top));
            top += 1;
            break;
        }
        if top == nr {
            break;
        }
    }
    m.truncate(top);
    (m, pivots)
}

/// Canonical coset representative of `v` modulo the lattice spanned by
/// echelon `rows`: after reduction each pivot coordinate lies in [0, pivot).
pub fn reduce_by_echelon(v: &mut [BigInt], rows: &ZMat, pivots: &[(usize, usize)]) {
    for &(col, ri) in pivots {
        let p = &rows[ri][col];
        let q = v[col].div_floor(p);
        if !q.is_zero() {
            for (x, s) in v.iter_mut().zip(rows[ri].iter()) {
                *x -= &q * s;
            }
        }
    }
}
