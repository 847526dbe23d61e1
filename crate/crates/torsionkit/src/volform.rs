//! Paired volume forms: scalar assignments to pairs of bases of two free
//! modules that transform by the product of the two change-of-basis
//! determinants. A form is stored by its value on one distinguished
//! (standard-coordinate) basis pair; every other value follows from the law
//! mu(a', b') = [a'/a][b'/b] mu(a, b). Includes the volume form carried by a
//! linking form on p-primary torsion, the canonical mod-r cohomology form
//! assembled from orientation and linking data, and the mu-refined
//! determinant of an alternating form.

use crate::abelian::{self, AbelianGroup, LinkingForm, PseudoBasis};
use crate::error::{Error, Result};
use crate::poly::MultiPoly;
use crate::ring::{prime_power, RingTag};
use crate::zmat::{self, ZMat};
use num_bigint::BigInt;
use num_traits::One;

/// Volume form on a pair of free modules K (rank_k) and L (rank_l), stored
/// as its value on the standard bases.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairedVolumeForm {
    pub rank_k: usize,
    pub rank_l: usize,
    pub ring: RingTag,
    base_value: BigInt,
}

impl PairedVolumeForm {
    fn with_value(ring: RingTag, rank_k: usize, rank_l: usize, mut v: BigInt) -> Self {
        ring.reduce(&mut v);
        PairedVolumeForm { rank_k, rank_l, ring, base_value: v }
    }

    /// Value on the distinguished (standard) basis pair.
    pub fn value(&self) -> &BigInt {
        &self.base_value
    }

    /// A paired volume form is nondegenerate exactly when its value is a
    /// unit.
    pub fn is_nondegenerate(&self) -> bool {
        self.ring.is_unit(&self.base_value)
    }

    /// Value on the basis pair whose vectors are the columns of `a` and `b`
    /// (standard coordinates): det(a) det(b) times the stored value.
    pub fn evaluate(&self, a: &ZMat, b: &ZMat) -> Result<BigInt> {
        if a.len() != self.rank_k || a.iter().any(|r| r.len() != self.rank_k) {
            return Err(Error::NotSquare { rows: a.len(), cols: self.rank_k });
        }
        if b.len() != self.rank_l || b.iter().any(|r| r.len() != self.rank_l) {
            return Err(Error::NotSquare { rows: b.len(), cols: self.rank_l });
        }
        let mut v = zmat::det(a) * zmat::det(b) * &self.base_value;
        self.ring.reduce(&mut v);
        Ok(v)
    }
}

/// The form assigning value 1 to the basis pair (a, b); both matrices must
/// be genuine bases, i.e. have unit determinant.
pub fn from_distinguished(ring: RingTag, a: &ZMat, b: &ZMat) -> Result<PairedVolumeForm> {
    let (da, db) = (zmat::det(a), zmat::det(b));
    let ia = ring
        .inv(&da)
        .ok_or_else(|| Error::Degenerate(format!("first matrix (det {da}) is not a basis")))?;
    let ib = ring
        .inv(&db)
        .ok_or_else(|| Error::Degenerate(format!("second matrix (det {db}) is not a basis")))?;
    Ok(PairedVolumeForm::with_value(ring, a.len(), b.len(), ia * ib))
}

/// The orientation form over Z: value +1 on positively oriented standard
/// bases (or -1 when the declared orientation is reversed).
pub fn from_orientation(rank_k: usize, rank_l: usize, sign: i64) -> Result<PairedVolumeForm> {
    if sign != 1 && sign != -1 {
        return Err(Error::Invalid(format!("orientation sign must be +1 or -1, got {sign}")));
    }
    Ok(PairedVolumeForm::with_value(RingTag::Int, rank_k, rank_l, BigInt::from(sign)))
}

/// Form on a direct sum built from forms on the two summands; the value on
/// the concatenated bases is the product of the two values, independent of
/// the chosen lifts of the second summand (lift changes are unitriangular).
/// Optional lift matrices (rank_k1 x rank_k2 and rank_l1 x rank_l2 offsets)
/// are accepted as the extension data and checked for shape.
pub fn combine_exact(
    m1: &PairedVolumeForm,
    m2: &PairedVolumeForm,
    lifts: Option<(&ZMat, &ZMat)>,
) -> Result<PairedVolumeForm> {
    if m1.ring != m2.ring {
        return Err(Error::RingMismatch(format!("{} vs {}", m1.ring.name(), m2.ring.name())));
    }
    if let Some((la, lb)) = lifts {
        if la.len() != m1.rank_k || la.iter().any(|r| r.len() != m2.rank_k) {
            return Err(Error::Invalid("K lift offsets have the wrong shape".into()));
        }
        if lb.len() != m1.rank_l || lb.iter().any(|r| r.len() != m2.rank_l) {
            return Err(Error::Invalid("L lift offsets have the wrong shape".into()));
        }
        // any choice of offsets changes the concatenated basis by a
        // unitriangular matrix, so the value below is already correct
    }
    Ok(PairedVolumeForm::with_value(
        m1.ring,
        m1.rank_k + m2.rank_k,
        m1.rank_l + m2.rank_l,
        &m1.base_value * &m2.base_value,
    ))
}

/// Dual form on (K*, L*): value is the inverse of the original value on the
/// dual bases. Requires nondegeneracy; an involution.
pub fn dual_form(m: &PairedVolumeForm) -> Result<PairedVolumeForm> {
    let inv = m
        .ring
        .inv(&m.base_value)
        .ok_or_else(|| Error::Degenerate(format!("value {} is not a unit", m.base_value)))?;
    Ok(PairedVolumeForm::with_value(m.ring, m.rank_k, m.rank_l, inv))
}

/// Coefficient reduction Z -> Z_r on a nondegenerate integral form.
pub fn reduce_mod_r(m: &PairedVolumeForm, r: u64) -> Result<PairedVolumeForm> {
    if m.ring != RingTag::Int {
        return Err(Error::RingMismatch("reduce_mod_r expects an integral form".into()));
    }
    if !m.is_nondegenerate() {
        return Err(Error::Degenerate(format!("value {} is not a unit over Z", m.base_value)));
    }
    Ok(PairedVolumeForm::with_value(RingTag::Mod(r), m.rank_k, m.rank_l, m.base_value.clone()))
}

/// Canonical pseudo-bases of the p-primary parts of the two sides of a
/// linking form, for reuse by callers that need the same bases.
pub fn linking_pseudo_bases(
    l: &LinkingForm,
    p: u64,
) -> Result<(PseudoBasis, PseudoBasis)> {
    let hl = AbelianGroup::new(0, l.left_orders.clone())?;
    let hr = AbelianGroup::new(0, l.right_orders.clone())?;
    let (_, pl) = abelian::primary_part(&hl, p)?;
    let (_, pr) = abelian::primary_part(&hr, p)?;
    Ok((pl, pr))
}

/// The volume form det(h_i . k_j) in Z_r carried by a linking form on the
/// p-primary torsion of the two sides, r = p^s. The distinguished bases are
/// the canonical pseudo-bases (generator order, orders scaled to p-power
/// parts); the determinant over any other pseudo-basis pair reproduces this
/// form's value there, which is the well-definedness statement tested in the
/// integration suite. Every pseudo-basis order must be divisible by r so the
/// mod-r reductions are free.
pub fn linking_volume_form(l: &LinkingForm, p: u64, r: u64) -> Result<PairedVolumeForm> {
    let Some((base, _)) = prime_power(r) else {
        return Err(Error::NonPrimePower(r));
    };
    if base != p {
        return Err(Error::Invalid(format!("r = {r} is not a power of p = {p}")));
    }
    let (pl, pr) = linking_pseudo_bases(l, p)?;
    if pl.elements.len() != pr.elements.len() {
        return Err(Error::Degenerate(format!(
            "p-primary ranks differ: {} vs {}",
            pl.elements.len(),
            pr.elements.len()
        )));
    }
    for &o in pl.orders.iter().chain(pr.orders.iter()) {
        if o % r != 0 {
            return Err(Error::Invalid(format!(
                "pseudo-basis order {o} is not divisible by r = {r}: the mod-{r} reduction is not free"
            )));
        }
    }
    let b = pl.elements.len();
    let mut m = zmat::zeros(b, b);
    for i in 0..b {
        for j in 0..b {
            let v = abelian::dot_pairing(l, &pl.elements[i].tor, &pr.elements[j].tor, r)?;
            m[i][j] = BigInt::from(v);
        }
    }
    Ok(PairedVolumeForm::with_value(RingTag::Mod(r), b, b, zmat::det(&m)))
}

/// The canonical mod-r cohomology form: the orientation form on the free
/// parts reduced mod r, combined with the linking volume form on the
/// p-primary torsion, then dualized. `linking` is None when the torsion is
/// prime to p (the torsion factor is then the trivial rank-0 form).
pub fn canonical_cohomology_form(
    free_rank_k: usize,
    free_rank_l: usize,
    orientation_sign: i64,
    linking: Option<(&LinkingForm, u64)>,
    r: u64,
) -> Result<PairedVolumeForm> {
    let free_part = reduce_mod_r(&from_orientation(free_rank_k, free_rank_l, orientation_sign)?, r)?;
    let torsion_part = match linking {
        Some((l, p)) => linking_volume_form(l, p, r)?,
        None => PairedVolumeForm::with_value(RingTag::Mod(r), 0, 0, BigInt::one()),
    };
    dual_form(&combine_exact(&free_part, &torsion_part, None)?)
}

/// The mu-refined determinant: the dual value mu*(a*, b*) times d, with the
/// working bases taken as mu's distinguished pair. Degenerate mu is an
/// error.
pub fn refined_determinant(d: &MultiPoly, mu: &PairedVolumeForm) -> Result<MultiPoly> {
    if d.ring != mu.ring {
        return Err(Error::RingMismatch(format!("{} vs {}", d.ring.name(), mu.ring.name())));
    }
    let factor = mu
        .ring
        .inv(&mu.base_value)
        .ok_or_else(|| Error::Degenerate(format!("mu value {} is not a unit", mu.base_value)))?;
    Ok(d.scale(&factor))
}
