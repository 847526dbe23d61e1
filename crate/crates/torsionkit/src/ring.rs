//! Coefficient rings. Everything in this crate computes over Z or Z_r; all
//! coefficients are stored as `BigInt` and a `RingTag` on the container says
//! which ring they live in, normalizing Z_r values to canonical residues in
//! [0, r).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RingTag {
    Int,
    Mod(u64),
}

impl RingTag {
    /// Canonical representative: identity over Z, residue in [0, r) over Z_r.
    pub fn reduce(&self, c: &mut BigInt) {
        if let RingTag::Mod(r) = self {
            let m = BigInt::from(*r);
            *c = c.mod_floor(&m);
        }
    }

    pub fn reduced(&self, mut c: BigInt) -> BigInt {
        self.reduce(&mut c);
        c
    }

    pub fn is_zero(&self, c: &BigInt) -> bool {
        match self {
            RingTag::Int => c.is_zero(),
            RingTag::Mod(r) => c.mod_floor(&BigInt::from(*r)).is_zero(),
        }
    }

    /// Multiplicative inverse if `c` is a unit (±1 over Z, gcd(c, r) = 1 over Z_r).
    pub fn inv(&self, c: &BigInt) -> Option<BigInt> {
        match self {
            RingTag::Int => {
                if c.abs().is_one() {
                    Some(c.clone())
                } else {
                    None
                }
            }
            RingTag::Mod(r) => {
                let m = BigInt::from(*r);
                let c = c.mod_floor(&m);
                let e = c.extended_gcd(&m);
                if e.gcd.is_one() {
                    Some(e.x.mod_floor(&m))
                } else {
                    None
                }
            }
        }
    }

    pub fn is_unit(&self, c: &BigInt) -> bool {
        self.inv(c).is_some()
    }

    pub fn name(&self) -> String {
        match self {
            RingTag::Int => "Z".into(),
            RingTag::Mod(r) => format!("Z_{r}"),
        }
    }
}

/// Trial-division primality, fine at desk scale.
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits a prime power r = p^s into (p, s); None if r is not a prime power.
pub fn prime_power(r: u64) -> Option<(u64, u32)> {
    if r < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= r {
        if r % p == 0 {
            let mut m = r;
            let mut s = 0;
            while m % p == 0 {
                m /= p;
                s += 1;
            }
            return if m == 1 { Some((p, s)) } else { None };
        }
        p += 1;
    }
    Some((r, 1))
}
