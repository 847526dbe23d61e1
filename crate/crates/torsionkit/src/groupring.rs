//! Group rings Z[H] and Z_r[H] for finitely generated abelian H, and their
//! truncations by powers of the augmentation ideal I.
//!
//! Truncation works in exponential coordinates: each free generator h_i
//! contributes a variable x_i with h_i = 1 + x_i, each torsion generator g_j
//! (of order d_j) a variable y_j with g_j = 1 + y_j. The quotient by I^k is
//! then spanned by monomials of total degree < k modulo the lattice generated
//! by all monomial multiples of the truncated relator polynomials
//! (1+y_j)^{d_j} - 1 (plus r times every monomial over Z_r). Normal forms are
//! canonical coset representatives for a fixed row-echelon basis of that
//! lattice over a degree-graded monomial order, so x lies in I^l exactly when
//! its normal form has no nonzero coordinates in degrees below l.

use crate::abelian::{AbelianGroup, GroupElement};
use crate::error::{Error, Result};
use crate::poly::{monomial_name, MultiPoly};
use crate::ring::RingTag;
use crate::zmat::{self, ZMat};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

/// Sparse element of Z[H] or Z_r[H]; zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupRingElement {
    pub ring: RingTag,
    pub group: AbelianGroup,
    pub terms: BTreeMap<GroupElement, BigInt>,
}

impl GroupRingElement {
    pub fn zero(ring: RingTag, group: AbelianGroup) -> Self {
        GroupRingElement { ring, group, terms: BTreeMap::new() }
    }

    pub fn from_scalar(ring: RingTag, group: AbelianGroup, c: BigInt) -> Self {
        let mut e = Self::zero(ring, group);
        let g = e.group.zero();
        e.add_term(g, c);
        e
    }

    pub fn one(ring: RingTag, group: AbelianGroup) -> Self {
        Self::from_scalar(ring, group, BigInt::one())
    }

    pub fn from_element(ring: RingTag, group: AbelianGroup, g: GroupElement) -> Self {
        let mut e = Self::zero(ring, group);
        e.add_term(g, BigInt::one());
        e
    }

    pub fn add_term(&mut self, g: GroupElement, c: BigInt) {
        let mut v = self.terms.remove(&g).unwrap_or_else(BigInt::zero);
        v += c;
        self.ring.reduce(&mut v);
        if !v.is_zero() {
            self.terms.insert(g, v);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch(format!(
                "{} vs {}",
                self.ring.name(),
                other.ring.name()
            )));
        }
        if self.group != other.group {
            return Err(Error::GroupMismatch("elements live over different groups".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (g, c) in &other.terms {
            out.add_term(g.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let mut out = Self::zero(self.ring, self.group.clone());
        for (g, c) in &self.terms {
            out.add_term(g.clone(), -c.clone());
        }
        out
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        let mut out = Self::zero(self.ring, self.group.clone());
        for (g, v) in &self.terms {
            out.add_term(g.clone(), c * v);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = Self::zero(self.ring, self.group.clone());
        for (ga, ca) in &self.terms {
            for (gb, cb) in &other.terms {
                out.add_term(self.group.add(ga, gb), ca * cb);
            }
        }
        Ok(out)
    }

    /// Augmentation: sum of coefficients.
    pub fn aug(&self) -> BigInt {
        let mut s: BigInt = self.terms.values().sum();
        self.ring.reduce(&mut s);
        s
    }
}

impl fmt::Display for GroupRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (g, c) in &self.terms {
            let mut gname = String::new();
            for (i, &e) in g.free.iter().enumerate() {
                if e != 0 {
                    gname.push_str(&format!("h{}^{} ", i + 1, e));
                }
            }
            for (j, &e) in g.tor.iter().enumerate() {
                if e != 0 {
                    gname.push_str(&format!("t{}^{} ", j + 1, e));
                }
            }
            let gname = if gname.is_empty() { "1".to_string() } else { gname.trim_end().to_string() };
            if first {
                write!(f, "{c}*[{gname}]")?;
                first = false;
            } else {
                write!(f, " + {c}*[{gname}]")?;
            }
        }
        Ok(())
    }
}

/// Cofactor determinant of a square matrix over a group ring.
pub fn matrix_determinant(m: &[Vec<GroupRingElement>]) -> Result<GroupRingElement> {
    let n = m.len();
    if m.iter().any(|row| row.len() != n) {
        return Err(Error::NotSquare { rows: n, cols: m.first().map_or(0, |r| r.len()) });
    }
    let Some(first) = m.first().and_then(|r| r.first()) else {
        return Err(Error::Invalid("empty matrix has no determinant here; supply 1x1 or larger".into()));
    };
    let ring = first.ring;
    let group = first.group.clone();
    fn go(m: &[Vec<GroupRingElement>], cols: &[usize]) -> Result<GroupRingElement> {
        let row = m.len() - cols.len();
        let some = &m[0][0];
        if cols.is_empty() {
            return Ok(GroupRingElement::one(some.ring, some.group.clone()));
        }
        let mut acc = GroupRingElement::zero(some.ring, some.group.clone());
        for (pos, &j) in cols.iter().enumerate() {
            let e = &m[row][j];
            if e.is_zero() {
                continue;
            }
            let rest: Vec<usize> = cols.iter().copied().filter(|&c| c != j).collect();
            let minor = go(m, &rest)?;
            let term = e.mul(&minor)?;
            if pos % 2 == 0 {
                acc = acc.add(&term)?;
            } else {
                acc = acc.sub(&term)?;
            }
        }
        Ok(acc)
    }
    for row in m {
        for e in row {
            if e.ring != ring || e.group != group {
                return Err(Error::RingMismatch("mixed rings or groups in matrix".into()));
            }
        }
    }
    go(m, &(0..n).collect::<Vec<_>>())
}

type CtxKey = (AbelianGroup, usize, RingTag);

struct CtxInner {
    group: AbelianGroup,
    k: usize,
    ring: RingTag,
    nvars: usize,
    monomials: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
    /// first coordinate index of each total degree 0..k
    degree_start: Vec<usize>,
    lattice: ZMat,
    pivots: Vec<(usize, usize)>,
}

/// Handle to a memoized truncation quotient Z[H]/I^k (or Z_r[H]/I^k).
#[derive(Clone)]
pub struct TruncationContext(Arc<CtxInner>);

impl fmt::Debug for TruncationContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "TruncationContext(group={:?}, k={}, ring={})",
            self.0.group, self.0.k, self.0.ring.name()
        )
    }
}

impl PartialEq for TruncationContext {
    fn eq(&self, other: &Self) -> bool {
        self.0.group == other.0.group && self.0.k == other.0.k && self.0.ring == other.0.ring
    }
}
impl Eq for TruncationContext {}

impl TruncationContext {
    pub fn group(&self) -> &AbelianGroup {
        &self.0.group
    }
    pub fn degree_bound(&self) -> usize {
        self.0.k
    }
    pub fn ring(&self) -> RingTag {
        self.0.ring
    }
    pub fn coordinates(&self) -> &[Vec<u32>] {
        &self.0.monomials
    }

    /// Name of the i-th coordinate monomial, free variables x*, torsion y*.
    pub fn coordinate_name(&self, i: usize) -> String {
        let e = &self.0.monomials[i];
        let nf = self.0.group.free_rank;
        let fx = monomial_name(&e[..nf], "x");
        let fy = monomial_name(&e[nf..], "y");
        match (fx.as_str(), fy.as_str()) {
            ("1", "1") => "1".into(),
            (_, "1") => fx,
            ("1", _) => fy,
            _ => format!("{fx}*{fy}"),
        }
    }
}

fn enumerate_monomials(nvars: usize, max_deg: usize) -> Vec<Vec<u32>> {
    // degree-graded, lex within a degree: the order the echelon relies on
    let mut out = Vec::new();
    let mut cur = vec![0u32; nvars];
    fn rec(out: &mut Vec<Vec<u32>>, cur: &mut Vec<u32>, var: usize, left: usize) {
        if var + 1 == cur.len() {
            cur[var] = left as u32;
            out.push(cur.clone());
            return;
        }
        for e in (0..=left).rev() {
            cur[var] = e as u32;
            rec(out, cur, var + 1, left - e);
        }
    }
    for d in 0..=max_deg {
        if nvars == 0 {
            if d == 0 {
                out.push(vec![]);
            }
            continue;
        }
        let before = out.len();
        rec(&mut out, &mut cur, 0, d);
        // rec pushes lex-descending on the first variable; normalize to a
        // deterministic order (it already is deterministic, keep as built)
        let _ = before;
    }
    out
}

/// Dense coefficient vector over the context's monomial list.
fn poly_mul_coords(
    ctx: &CtxInner,
    a: &[BigInt],
    b: &[BigInt],
) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); ctx.monomials.len()];
    for (i, ca) in a.iter().enumerate() {
        if ca.is_zero() {
            continue;
        }
        let da: usize = ctx.monomials[i].iter().map(|&x| x as usize).sum();
        for (j, cb) in b.iter().enumerate() {
            if cb.is_zero() {
                continue;
            }
            let db: usize = ctx.monomials[j].iter().map(|&x| x as usize).sum();
            if da + db >= ctx.k {
                continue;
            }
            let e: Vec<u32> = ctx.monomials[i]
                .iter()
                .zip(&ctx.monomials[j])
                .map(|(x, y)| x + y)
                .collect();
            let idx = ctx.index[&e];
            out[idx] += ca * cb;
        }
    }
    out
}

/// binom(a, e) for any integer a: a(a-1)...(a-e+1)/e!.
fn generalized_binomial(a: i64, e: u32) -> BigInt {
    let mut num = BigInt::one();
    for i in 0..e as i64 {
        num *= BigInt::from(a - i);
    }
    let mut den = BigInt::one();
    for i in 1..=e as i64 {
        den *= BigInt::from(i);
    }
    num / den
}

fn reduce_coords(ctx: &CtxInner, coords: &mut [BigInt]) {
    zmat::reduce_by_echelon(coords, &ctx.lattice, &ctx.pivots);
    if let RingTag::Mod(_) = ctx.ring {
        // the lattice contains r*e_c for every coordinate, so residues are
        // already canonical; nothing extra to do
    }
}

static CACHE: OnceLock<Mutex<HashMap<CtxKey, TruncationContext>>> = OnceLock::new();

/// Builds (or fetches, contexts are memoized) the truncation context for
/// Z[H]/I^k or Z_r[H]/I^k. k must be at least 1; k = 1 is the augmentation
/// quotient where every group element collapses to 1.
pub fn build_truncation_context(
    group: &AbelianGroup,
    k: usize,
    ring: RingTag,
) -> Result<TruncationContext> {
    if k == 0 {
        return Err(Error::DegreeOutOfRange("truncation degree k must be >= 1".into()));
    }
    let key = (group.clone(), k, ring);
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(ctx) = cache.lock().unwrap().get(&key) {
        return Ok(ctx.clone());
    }

    let nf = group.free_rank;
    let nt = group.torsion_orders.len();
    let nvars = nf + nt;
    let monomials = enumerate_monomials(nvars, k - 1);
    let mut index = HashMap::with_capacity(monomials.len());
    for (i, m) in monomials.iter().enumerate() {
        index.insert(m.clone(), i);
    }
    let mut degree_start = vec![usize::MAX; k + 1];
    for (i, m) in monomials.iter().enumerate() {
        let d: usize = m.iter().map(|&x| x as usize).sum();
        if degree_start[d] == usize::MAX {
            degree_start[d] = i;
        }
    }
    degree_start[k] = monomials.len();
    // monomials come out degree-graded; make sure of it for the normal-form
    // argument, then build the relation lattice
    debug_assert!(monomials.windows(2).all(|w| {
        let da: usize = w[0].iter().map(|&x| x as usize).sum();
        let db: usize = w[1].iter().map(|&x| x as usize).sum();
        da <= db
    }));

    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    for (j, &d) in group.torsion_orders.iter().enumerate() {
        // relator polynomial (1+y_j)^d - 1, truncated below degree k
        let mut rel = vec![BigInt::zero(); monomials.len()];
        for e in 1..k.min(d as usize + 1) {
            let mut exps = vec![0u32; nvars];
            exps[nf + j] = e as u32;
            rel[index[&exps]] = generalized_binomial(d as i64, e as u32);
        }
        for (mi, m) in monomials.iter().enumerate() {
            let dm: usize = m.iter().map(|&x| x as usize).sum();
            if dm + 1 >= k {
                continue; // every multiple would land in degree >= k
            }
            let mut row = vec![BigInt::zero(); monomials.len()];
            for (ri, c) in rel.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let dr: usize = monomials[ri].iter().map(|&x| x as usize).sum();
                if dm + dr >= k {
                    continue;
                }
                let e: Vec<u32> = m.iter().zip(&monomials[ri]).map(|(x, y)| x + y).collect();
                row[index[&e]] += c;
            }
            if row.iter().any(|c| !c.is_zero()) {
                rows.push(row);
            }
            let _ = mi;
        }
    }
    if let RingTag::Mod(r) = ring {
        for c in 0..monomials.len() {
            let mut row = vec![BigInt::zero(); monomials.len()];
            row[c] = BigInt::from(r);
            rows.push(row);
        }
    }
    let (lattice, pivots) = zmat::row_echelon(rows);

    let inner = CtxInner {
        group: group.clone(),
        k,
        ring,
        nvars,
        monomials,
        index,
        degree_start,
        lattice,
        pivots,
    };
    let ctx = TruncationContext(Arc::new(inner));
    cache.lock().unwrap().insert(key, ctx.clone());
    Ok(ctx)
}

/// Image of a group-ring element in the truncation quotient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedElement {
    pub ctx: TruncationContext,
    coords: Vec<BigInt>,
}

impl TruncatedElement {
    pub fn zero(ctx: &TruncationContext) -> Self {
        TruncatedElement { ctx: ctx.clone(), coords: vec![BigInt::zero(); ctx.coordinates().len()] }
    }

    pub fn one(ctx: &TruncationContext) -> Self {
        let mut e = Self::zero(ctx);
        e.coords[0] = BigInt::one();
        e.normalize();
        e
    }

    fn from_coords(ctx: &TruncationContext, coords: Vec<BigInt>) -> Self {
        let mut e = TruncatedElement { ctx: ctx.clone(), coords };
        e.normalize();
        e
    }

    fn normalize(&mut self) {
        reduce_coords(&self.ctx.0, &mut self.coords);
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.ctx != other.ctx {
            return Err(Error::GroupMismatch("truncated elements from different contexts".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect();
        Ok(Self::from_coords(&self.ctx, coords))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect();
        Ok(Self::from_coords(&self.ctx, coords))
    }

    pub fn neg(&self) -> Self {
        Self::from_coords(&self.ctx, self.coords.iter().map(|c| -c.clone()).collect())
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::from_coords(&self.ctx, self.coords.iter().map(|v| c * v).collect())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let coords = poly_mul_coords(&self.ctx.0, &self.coords, &other.coords);
        Ok(Self::from_coords(&self.ctx, coords))
    }

    /// Nonzero coordinates as a map monomial-name -> coefficient string.
    pub fn to_table(&self) -> BTreeMap<String, String> {
        let mut out = BTreeMap::new();
        for (i, c) in self.coords.iter().enumerate() {
            if !c.is_zero() {
                out.insert(self.ctx.coordinate_name(i), c.to_string());
            }
        }
        out
    }

    /// Lowest total degree with a nonzero coordinate, if any.
    pub fn leading_degree(&self) -> Option<usize> {
        for (i, c) in self.coords.iter().enumerate() {
            if !c.is_zero() {
                return Some(self.ctx.0.monomials[i].iter().map(|&x| x as usize).sum());
            }
        }
        None
    }

    /// Coordinates of one total degree, as (name, coefficient) pairs.
    pub fn degree_slice(&self, d: usize) -> Vec<(String, BigInt)> {
        let lo = self.ctx.0.degree_start[d];
        let hi = self.ctx.0.degree_start[d + 1];
        (lo..hi)
            .filter(|&i| !self.coords[i].is_zero())
            .map(|i| (self.ctx.coordinate_name(i), self.coords[i].clone()))
            .collect()
    }
}

impl fmt::Display for TruncatedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let table = self.to_table();
        if table.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = table.iter().map(|(m, c)| format!("{c}*{m}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Ring homomorphism Z[H] -> Z[H]/I^k (or the Z_r versions): substitutes the
/// exponential coordinates for every group element and reduces to the normal
/// form. Errors on group or coefficient-ring mismatch.
pub fn truncate(x: &GroupRingElement, ctx: &TruncationContext) -> Result<TruncatedElement> {
    if x.ring != ctx.ring() {
        return Err(Error::RingMismatch(format!(
            "element over {}, context over {}",
            x.ring.name(),
            ctx.ring().name()
        )));
    }
    if x.group != *ctx.group() {
        return Err(Error::GroupMismatch("element and context groups differ".into()));
    }
    let inner = &ctx.0;
    let mut acc = vec![BigInt::zero(); inner.monomials.len()];
    for (g, c) in &x.terms {
        let coords = element_coords(ctx, g);
        for (i, v) in coords.iter().enumerate() {
            if !v.is_zero() {
                acc[i] += c * v;
            }
        }
    }
    Ok(TruncatedElement::from_coords(ctx, acc))
}

/// Truncated image of a single group element (coefficient 1).
pub fn element_coords(ctx: &TruncationContext, g: &GroupElement) -> Vec<BigInt> {
    let inner = &ctx.0;
    let nf = inner.group.free_rank;
    let mut acc = vec![BigInt::zero(); inner.monomials.len()];
    acc[0] = BigInt::one();
    let factor = |acc: &mut Vec<BigInt>, var: usize, exp: i64| {
        if exp == 0 {
            return;
        }
        let mut fac = vec![BigInt::zero(); inner.monomials.len()];
        for e in 0..inner.k {
            let b = generalized_binomial(exp, e as u32);
            if b.is_zero() {
                continue;
            }
            let mut exps = vec![0u32; inner.nvars];
            exps[var] = e as u32;
            if let Some(&i) = inner.index.get(&exps) {
                fac[i] = b;
            }
        }
        *acc = poly_mul_coords(inner, acc, &fac);
    };
    for (i, &a) in g.free.iter().enumerate() {
        factor(&mut acc, i, a);
    }
    for (j, &b) in g.tor.iter().enumerate() {
        factor(&mut acc, nf + j, b as i64);
    }
    acc
}

/// Truncated image of (h - 1) for a group element h.
pub fn element_minus_one(ctx: &TruncationContext, g: &GroupElement) -> TruncatedElement {
    let mut coords = element_coords(ctx, g);
    coords[0] -= BigInt::one();
    TruncatedElement::from_coords(ctx, coords)
}

/// Membership of the class of x in I^l / I^k, for l < k: true exactly when
/// the normal form has no nonzero coordinate of degree < l.
pub fn in_ideal_power(x: &TruncatedElement, l: usize) -> Result<bool> {
    let k = x.ctx.degree_bound();
    if l >= k + 1 {
        return Err(Error::DegreeOutOfRange(format!(
            "ideal power {l} not visible at truncation degree {k}"
        )));
    }
    if l == 0 {
        return Ok(true);
    }
    let cutoff = x.ctx.0.degree_start[l.min(k)];
    Ok(x.coords()[..cutoff].iter().all(|c| c.is_zero()))
}

/// The q-substitution: for homogeneous P of degree l in variables indexed by
/// the free generators of H, q(P) = |Tors H| * P[h~_i -> (h_i - 1)], well
/// defined modulo I^{l+1}; requires k >= l + 1.
pub fn q_map(p: &MultiPoly, ctx: &TruncationContext) -> Result<TruncatedElement> {
    if p.ring != ctx.ring() {
        return Err(Error::RingMismatch("polynomial and context rings differ".into()));
    }
    let Some(l) = p.homogeneous_degree() else {
        if p.is_zero() {
            return Ok(TruncatedElement::zero(ctx));
        }
        return Err(Error::Inhomogeneous(format!("{p}")));
    };
    if p.vars != ctx.group().free_rank {
        return Err(Error::Invalid(format!(
            "q expects one variable per free generator ({}), got {}",
            ctx.group().free_rank,
            p.vars
        )));
    }
    if ctx.degree_bound() < l + 1 {
        return Err(Error::DegreeOutOfRange(format!(
            "q of a degree-{l} polynomial needs truncation degree >= {}",
            l + 1
        )));
    }
    let inner = &ctx.0;
    let t = inner.group.torsion_order();
    let mut coords = vec![BigInt::zero(); inner.monomials.len()];
    for (e, c) in &p.terms {
        let mut exps = e.clone();
        exps.extend(std::iter::repeat(0).take(inner.nvars - e.len()));
        coords[inner.index[&exps]] = c * &t;
    }
    Ok(TruncatedElement::from_coords(ctx, coords))
}

/// The mod-r q-substitution: substitutes lift(g_i) - 1 for the i-th variable
/// (no torsion-order scaling). `lifts` supplies one lift per variable; the
/// class modulo I^{l+1} does not depend on the choice. Requires Z_r
/// coefficients and H/r free (every torsion order shares a gcd of 1 or r
/// with r).
pub fn q_r_map(
    p: &MultiPoly,
    lifts: &[GroupElement],
    ctx: &TruncationContext,
) -> Result<TruncatedElement> {
    let RingTag::Mod(r) = ctx.ring() else {
        return Err(Error::RingMismatch("q_r needs Z_r coefficients".into()));
    };
    if p.ring != ctx.ring() {
        return Err(Error::RingMismatch("polynomial and context rings differ".into()));
    }
    for &d in &ctx.group().torsion_orders {
        let g = d.gcd(&r);
        if g != 1 && g != r {
            return Err(Error::Invalid(format!(
                "H/{r} is not free: torsion order {d} meets r in {g}"
            )));
        }
    }
    let Some(l) = p.homogeneous_degree() else {
        if p.is_zero() {
            return Ok(TruncatedElement::zero(ctx));
        }
        return Err(Error::Inhomogeneous(format!("{p}")));
    };
    if p.vars != lifts.len() {
        return Err(Error::Invalid("one lift per variable required".into()));
    }
    if ctx.degree_bound() < l + 1 {
        return Err(Error::DegreeOutOfRange(format!(
            "q_r of a degree-{l} polynomial needs truncation degree >= {}",
            l + 1
        )));
    }
    let gens: Vec<TruncatedElement> =
        lifts.iter().map(|g| element_minus_one(ctx, g)).collect();
    let mut acc = TruncatedElement::zero(ctx);
    for (e, c) in &p.terms {
        let mut term = TruncatedElement::one(ctx).scale(c);
        for (v, &pow) in e.iter().enumerate() {
            for _ in 0..pow {
                term = term.mul(&gens[v])?;
            }
        }
        acc = acc.add(&term)?;
    }
    Ok(acc)
}
