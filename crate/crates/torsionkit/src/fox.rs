//! Free-group words, Fox derivatives of all orders, Alexander matrices,
//! commutator expansions, and Nielsen normalization of presentations.
//!
//! Generator indices are 0-based everywhere in this API; the serialized token
//! syntax `x3` / `X3` (capital = inverse) is 1-based. Words are plain letter
//! sequences; free reduction is available but never forced, and Fox
//! derivatives do not depend on it.

use crate::abelian::{AbelianGroup, GroupElement};
use crate::error::{Error, Result};
use crate::groupring::GroupRingElement;
use crate::ring::RingTag;
use crate::zmat::{self, ZMat};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

/// Word in a free group: a sequence of (generator index, sign) letters.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FreeWord {
    pub letters: Vec<(usize, i8)>,
}

impl FreeWord {
    pub fn empty() -> Self {
        FreeWord { letters: Vec::new() }
    }

    /// Single positive letter.
    pub fn gen(i: usize) -> Self {
        FreeWord { letters: vec![(i, 1)] }
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    /// Largest generator index used, if any letter is present.
    pub fn max_generator(&self) -> Option<usize> {
        self.letters.iter().map(|&(g, _)| g).max()
    }

    /// Cancels adjacent inverse pairs until none remain.
    pub fn freely_reduced(&self) -> Self {
        let mut out: Vec<(usize, i8)> = Vec::with_capacity(self.letters.len());
        for &(g, s) in &self.letters {
            match out.last() {
                Some(&(g2, s2)) if g2 == g && s2 == -s => {
                    out.pop();
                }
                _ => out.push((g, s)),
            }
        }
        FreeWord { letters: out }
    }

    pub fn inverse(&self) -> Self {
        FreeWord { letters: self.letters.iter().rev().map(|&(g, s)| (g, -s)).collect() }
    }

    pub fn concat(&self, other: &Self) -> Self {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        FreeWord { letters }
    }

    pub fn power(&self, e: i64) -> Self {
        let base = if e >= 0 { self.clone() } else { self.inverse() };
        let mut out = FreeWord::empty();
        for _ in 0..e.unsigned_abs() {
            out = out.concat(&base);
        }
        out
    }

    /// [a, b] = a b a^-1 b^-1.
    pub fn commutator(a: &Self, b: &Self) -> Self {
        a.concat(b).concat(&a.inverse()).concat(&b.inverse())
    }

    /// Exponent-sum vector over the first m generators; letters beyond them
    /// are ignored.
    pub fn exponent_vector(&self, m: usize) -> Vec<i64> {
        let mut v = vec![0i64; m];
        for &(g, s) in &self.letters {
            if g < m {
                v[g] += s as i64;
            }
        }
        v
    }

    /// Replaces every letter of generator `g` by `w` (respecting inversion),
    /// leaving other letters alone.
    pub fn substitute(&self, g: usize, w: &FreeWord) -> Self {
        let winv = w.inverse();
        let mut letters = Vec::new();
        for &(g2, s) in &self.letters {
            if g2 == g {
                let rep = if s > 0 { w } else { &winv };
                letters.extend_from_slice(&rep.letters);
            } else {
                letters.push((g2, s));
            }
        }
        FreeWord { letters }
    }

    /// Swaps the names of two generators in place.
    pub fn swap_generators(&self, a: usize, b: usize) -> Self {
        let letters = self
            .letters
            .iter()
            .map(|&(g, s)| {
                let g = if g == a { b } else if g == b { a } else { g };
                (g, s)
            })
            .collect();
        FreeWord { letters }
    }

    /// Image in an abelian group under a generator assignment.
    pub fn image(&self, group: &AbelianGroup, assignment: &[GroupElement]) -> Result<GroupElement> {
        let mut acc = group.zero();
        for &(g, s) in &self.letters {
            let Some(target) = assignment.get(g) else {
                return Err(Error::Invalid(format!(
                    "word uses generator x{} but the assignment covers only {}",
                    g + 1,
                    assignment.len()
                )));
            };
            acc = group.add(&acc, &group.mul_scalar(target, s as i64));
        }
        Ok(acc)
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        let toks: Vec<String> = self
            .letters
            .iter()
            .map(|&(g, s)| {
                if s > 0 {
                    format!("x{}", g + 1)
                } else {
                    format!("X{}", g + 1)
                }
            })
            .collect();
        write!(f, "{}", toks.join(" "))
    }
}

impl FromStr for FreeWord {
    type Err = Error;

    /// Whitespace-separated tokens `x3` / `X3`; "1" or an empty string is the
    /// empty word.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "1" {
            return Ok(FreeWord::empty());
        }
        let mut letters = Vec::new();
        for tok in s.split_whitespace() {
            let (sign, digits) = match tok.chars().next() {
                Some('x') => (1i8, &tok[1..]),
                Some('X') => (-1i8, &tok[1..]),
                _ => return Err(Error::Invalid(format!("bad word token '{tok}'"))),
            };
            let idx: usize = digits
                .parse()
                .map_err(|_| Error::Invalid(format!("bad word token '{tok}'")))?;
            if idx == 0 {
                return Err(Error::Invalid(format!("bad word token '{tok}': indices start at 1")));
            }
            letters.push((idx - 1, sign));
        }
        Ok(FreeWord { letters })
    }
}

/// Formal integer combination of free-group words (an element of Z[F]).
/// Keys are stored freely reduced so equality is equality in Z[F].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct WordSum {
    pub terms: BTreeMap<FreeWord, BigInt>,
}

impl WordSum {
    pub fn zero() -> Self {
        WordSum::default()
    }

    pub fn from_word(w: &FreeWord) -> Self {
        let mut s = WordSum::zero();
        s.add_term(w.clone(), BigInt::one());
        s
    }

    pub fn add_term(&mut self, w: FreeWord, c: BigInt) {
        let w = w.freely_reduced();
        let mut v = self.terms.remove(&w).unwrap_or_else(BigInt::zero);
        v += c;
        if !v.is_zero() {
            self.terms.insert(w, v);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        WordSum::zero().sub(self)
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        let mut out = WordSum::zero();
        for (w, v) in &self.terms {
            out.add_term(w.clone(), c * v);
        }
        out
    }

    /// Left multiplication by a single word.
    pub fn left_mul(&self, w: &FreeWord) -> Self {
        let mut out = WordSum::zero();
        for (v, c) in &self.terms {
            out.add_term(w.concat(v), c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = WordSum::zero();
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                out.add_term(u.concat(v), a * b);
            }
        }
        out
    }

    /// Augmentation: sum of coefficients.
    pub fn aug(&self) -> BigInt {
        self.terms.values().sum()
    }
}

impl fmt::Display for WordSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> =
            self.terms.iter().map(|(w, c)| format!("{c}*[{w}]")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Fox derivative with respect to generator j: the unique derivation with
/// d(x_i)/d(x_j) = delta_ij, d(x_j^-1)/d(x_j) = -x_j^-1, and the product rule
/// d(uv) = d(u) + u d(v). Letters of other generators contribute nothing, so
/// an out-of-alphabet j simply yields 0.
pub fn fox_derivative(w: &FreeWord, j: usize) -> WordSum {
    let mut out = WordSum::zero();
    let mut prefix: Vec<(usize, i8)> = Vec::with_capacity(w.letters.len());
    for &(g, s) in &w.letters {
        if g == j {
            if s > 0 {
                out.add_term(FreeWord { letters: prefix.clone() }, BigInt::one());
            } else {
                let mut p = prefix.clone();
                p.push((g, -1));
                out.add_term(FreeWord { letters: p }, -BigInt::one());
            }
        }
        prefix.push((g, s));
    }
    out
}

/// Linear extension of the Fox derivative to Z[F].
pub fn fox_derivative_sum(s: &WordSum, j: usize) -> WordSum {
    let mut out = WordSum::zero();
    for (w, c) in &s.terms {
        out = out.add(&fox_derivative(w, j).scale(c));
    }
    out
}

/// Iterated Fox derivative; the first listed index is applied first, so
/// `higher_fox_derivative(w, &[a, b])` is d/dx_b of d(w)/dx_a.
pub fn higher_fox_derivative(w: &FreeWord, indices: &[usize]) -> Result<WordSum> {
    if indices.is_empty() {
        return Err(Error::Invalid("higher Fox derivative needs a nonempty index list".into()));
    }
    let mut acc = WordSum::from_word(w);
    for &j in indices {
        acc = fox_derivative_sum(&acc, j);
    }
    Ok(acc)
}

/// Ring map Z[F] -> Z[H] (or Z_r[H]) induced by a generator assignment.
pub fn abelianize(
    s: &WordSum,
    ring: RingTag,
    group: &AbelianGroup,
    assignment: &[GroupElement],
) -> Result<GroupRingElement> {
    let mut out = GroupRingElement::zero(ring, group.clone());
    for (w, c) in &s.terms {
        out.add_term(w.image(group, assignment)?, c.clone());
    }
    Ok(out)
}

/// Group presentation with m generators and exactly m-1 relators, plus a
/// declared free rank n of the abelianization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    pub num_generators: usize,
    pub rank: usize,
    pub relators: Vec<FreeWord>,
    pub torsion_orders: Option<Vec<u64>>,
}

impl Presentation {
    pub fn new(
        num_generators: usize,
        rank: usize,
        relators: Vec<FreeWord>,
        torsion_orders: Option<Vec<u64>>,
    ) -> Result<Self> {
        if num_generators == 0 {
            return Err(Error::Invalid("a presentation needs at least one generator".into()));
        }
        if relators.len() + 1 != num_generators {
            return Err(Error::Invalid(format!(
                "{} generators require exactly {} relators, got {}",
                num_generators,
                num_generators - 1,
                relators.len()
            )));
        }
        if rank > num_generators {
            return Err(Error::Invalid(format!(
                "declared rank {rank} exceeds generator count {num_generators}"
            )));
        }
        for (i, r) in relators.iter().enumerate() {
            if let Some(g) = r.max_generator() {
                if g >= num_generators {
                    return Err(Error::Invalid(format!(
                        "relator {} uses generator x{} beyond the declared {}",
                        i + 1,
                        g + 1,
                        num_generators
                    )));
                }
            }
        }
        Ok(Presentation { num_generators, rank, relators, torsion_orders })
    }

    /// Exponent-sum matrix, one row per relator, one column per generator.
    pub fn abelianized_matrix(&self) -> ZMat {
        self.relators
            .iter()
            .map(|r| {
                r.exponent_vector(self.num_generators)
                    .into_iter()
                    .map(BigInt::from)
                    .collect()
            })
            .collect()
    }

    /// Alexander matrix: entry (i, j) is the abelianized Fox derivative of
    /// relator i with respect to generator j.
    pub fn alexander_matrix(
        &self,
        ring: RingTag,
        group: &AbelianGroup,
        assignment: &[GroupElement],
    ) -> Result<Vec<Vec<GroupRingElement>>> {
        if assignment.len() != self.num_generators {
            return Err(Error::Invalid(format!(
                "assignment covers {} generators, presentation has {}",
                assignment.len(),
                self.num_generators
            )));
        }
        let mut rows = Vec::with_capacity(self.relators.len());
        for r in &self.relators {
            let mut row = Vec::with_capacity(self.num_generators);
            for j in 0..self.num_generators {
                row.push(abelianize(&fox_derivative(r, j), ring, group, assignment)?);
            }
            rows.push(row);
        }
        Ok(rows)
    }
}

/// Expression of a relator as a product of commutators and r-th powers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommutatorExpansion {
    pub pairs: Vec<(FreeWord, FreeWord)>,
    pub power_words: Vec<FreeWord>,
    /// Common exponent of the power block; 0 means no power block.
    pub power_exponent: u64,
}

impl CommutatorExpansion {
    pub fn commutators_only(pairs: Vec<(FreeWord, FreeWord)>) -> Self {
        CommutatorExpansion { pairs, power_words: Vec::new(), power_exponent: 0 }
    }

    /// Concatenation of all commutators and powers, freely reduced.
    pub fn expand(&self) -> FreeWord {
        let mut out = FreeWord::empty();
        for (a, b) in &self.pairs {
            out = out.concat(&FreeWord::commutator(a, b));
        }
        for g in &self.power_words {
            out = out.concat(&g.power(self.power_exponent as i64));
        }
        out.freely_reduced()
    }
}

/// True when the exponent matrix already has the nice block shape for the
/// declared rank: the first rank-1 rows vanish, the remaining rows are zero
/// on the first `rank` columns, and the lower-right square block is
/// nonsingular.
pub fn nice_block_shape(a: &ZMat, rank: usize) -> bool {
    let m1 = a.len(); // m - 1 relators
    let m = m1 + 1;
    if rank == 0 || rank > m {
        return false;
    }
    for row in a.iter().take(rank - 1) {
        if row.iter().any(|c| !c.is_zero()) {
            return false;
        }
    }
    for row in a.iter().skip(rank - 1) {
        if row.len() != m || row[..rank].iter().any(|c| !c.is_zero()) {
            return false;
        }
    }
    let v: ZMat = a
        .iter()
        .skip(rank - 1)
        .map(|row| row[rank..].to_vec())
        .collect();
    !zmat::det(&v).is_zero()
}

/// Brings a presentation to nice form by elementary Nielsen moves: integer
/// row reduction of the exponent matrix, with row operations replayed as
/// relator concatenation/inversion and column operations as generator
/// substitutions. Returns the rewritten presentation together with each new
/// generator expressed as a word in the old ones. Errors when the declared
/// rank disagrees with the matrix rank over Q.
pub fn nielsen_normalize(p: &Presentation) -> Result<(Presentation, Vec<FreeWord>)> {
    let m = p.num_generators;
    let n = p.rank;
    let identity_subst: Vec<FreeWord> = (0..m).map(FreeWord::gen).collect();
    let a = p.abelianized_matrix();

    if nice_block_shape(&a, n) {
        return Ok((p.clone(), identity_subst));
    }

    let (d, ops) = zmat::smith_with_ops(&a);
    let snf_rank = (0..(m - 1).min(m)).take_while(|&i| !d[i][i].is_zero()).count();
    if snf_rank != m - n {
        return Err(Error::RankDeficient(format!(
            "declared rank {n} needs exponent-matrix rank {}, found {snf_rank}",
            m - n
        )));
    }

    let mut relators = p.relators.clone();
    let mut subst = identity_subst;
    for op in &ops {
        match op {
            zmat::ElOp::RowSwap(a, b) => relators.swap(*a, *b),
            zmat::ElOp::RowNeg(a) => relators[*a] = relators[*a].inverse(),
            zmat::ElOp::RowAdd(a, b, c) => {
                let e = i64::try_from(c)
                    .map_err(|_| Error::Invalid("relator multiplicity overflow".into()))?;
                let extra = relators[*b].power(e);
                relators[*a] = relators[*a].concat(&extra).freely_reduced();
            }
            zmat::ElOp::ColSwap(a, b) => {
                for r in relators.iter_mut() {
                    *r = r.swap_generators(*a, *b);
                }
                subst.swap(*a, *b);
            }
            zmat::ElOp::ColAdd(a, b, c) => {
                // col_a += c*col_b realizes old x_b = new x_b * new x_a^c;
                // rewrite relators and track new x_b = old x_b * old x_a^-c
                let e = i64::try_from(c)
                    .map_err(|_| Error::Invalid("substitution exponent overflow".into()))?;
                let rep = FreeWord::gen(*b).concat(&FreeWord::gen(*a).power(e));
                for r in relators.iter_mut() {
                    *r = r.substitute(*b, &rep).freely_reduced();
                }
                subst[*b] = subst[*b].concat(&subst[*a].power(-e)).freely_reduced();
            }
        }
    }

    // the SNF pivots sit in the top-left corner; nice form wants zero rows
    // first and the torsion block in the lower right, so rotate rows and
    // columns while preserving relative order
    let rot_rows: Vec<usize> =
        (snf_rank..m - 1).chain(0..snf_rank).collect();
    relators = rot_rows.iter().map(|&i| relators[i].clone()).collect();
    let rot_cols: Vec<usize> = (snf_rank..m).chain(0..snf_rank).collect();
    // rot_cols[new] = old; rename letters old -> new
    let mut rename = vec![0usize; m];
    for (new, &old) in rot_cols.iter().enumerate() {
        rename[old] = new;
    }
    for r in relators.iter_mut() {
        r.letters = r.letters.iter().map(|&(g, s)| (rename[g], s)).collect();
    }
    subst = rot_cols.iter().map(|&old| subst[old].clone()).collect();

    let torsion: Vec<u64> = (0..snf_rank)
        .map(|i| u64::try_from(&d[i][i]).expect("positive invariant factor"))
        .filter(|&x| x >= 2)
        .collect();
    let out = Presentation::new(m, n, relators, Some(torsion))?;
    debug_assert!(nice_block_shape(&out.abelianized_matrix(), n));
    Ok((out, subst))
}
