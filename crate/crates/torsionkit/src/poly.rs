//! Multivariate polynomials with exact coefficients over Z or Z_r, stored as
//! sparse exponent-vector maps. These carry the symbolic determinants d and
//! the inputs to the q-substitution maps.

use crate::error::{Error, Result};
use crate::ring::RingTag;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiPoly {
    pub ring: RingTag,
    pub vars: usize,
    /// exponent vector (length `vars`) -> nonzero coefficient
    pub terms: BTreeMap<Vec<u32>, BigInt>,
}

impl MultiPoly {
    pub fn zero(ring: RingTag, vars: usize) -> Self {
        MultiPoly { ring, vars, terms: BTreeMap::new() }
    }

    pub fn constant(ring: RingTag, vars: usize, c: BigInt) -> Self {
        let mut p = Self::zero(ring, vars);
        p.add_term(vec![0; vars], c);
        p
    }

    pub fn var(ring: RingTag, vars: usize, i: usize) -> Self {
        let mut e = vec![0; vars];
        e[i] = 1;
        let mut p = Self::zero(ring, vars);
        p.add_term(e, BigInt::one());
        p
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: BigInt) {
        assert_eq!(exps.len(), self.vars, "exponent vector length");
        let mut v = self.terms.remove(&exps).unwrap_or_else(BigInt::zero);
        v += c;
        self.ring.reduce(&mut v);
        if !v.is_zero() {
            self.terms.insert(exps, v);
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
        if self.vars != other.vars {
            return Err(Error::Invalid(format!(
                "polynomials in {} and {} variables",
                self.vars, other.vars
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let mut out = Self::zero(self.ring, self.vars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        let mut out = Self::zero(self.ring, self.vars);
        for (e, v) in &self.terms {
            out.add_term(e.clone(), c * v);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = Self::zero(self.ring, self.vars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        Ok(out)
    }

    pub fn total_degree(&self) -> Option<usize> {
        self.terms.keys().map(|e| e.iter().map(|&x| x as usize).sum()).max()
    }

    /// Some(degree) when all terms share one total degree (zero counts as
    /// homogeneous of any degree and reports None).
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let mut degs = self.terms.keys().map(|e| e.iter().map(|&x| x as usize).sum::<usize>());
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    /// Exact division by the variable `i`; errors when any term misses it.
    pub fn divide_by_var(&self, i: usize) -> Result<Self> {
        let mut out = Self::zero(self.ring, self.vars);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                return Err(Error::DivisionFailed(format!(
                    "term {} has no factor of variable {}",
                    monomial_name(e, "a"),
                    i + 1
                )));
            }
            let mut e2 = e.clone();
            e2[i] -= 1;
            out.add_term(e2, c.clone());
        }
        Ok(out)
    }

    /// Linear substitution var_s -> sum_j mat[s][j] * var'_j (new variable
    /// count = mat[s].len(), same for every s).
    pub fn substitute_linear(&self, mat: &[Vec<BigInt>]) -> Result<Self> {
        if mat.len() != self.vars {
            return Err(Error::Invalid("substitution matrix has wrong height".into()));
        }
        let new_vars = mat.first().map_or(0, |r| r.len());
        if mat.iter().any(|r| r.len() != new_vars) {
            return Err(Error::Invalid("ragged substitution matrix".into()));
        }
        let images: Vec<MultiPoly> = mat
            .iter()
            .map(|row| {
                let mut p = Self::zero(self.ring, new_vars);
                for (j, c) in row.iter().enumerate() {
                    if !c.is_zero() {
                        let mut e = vec![0; new_vars];
                        e[j] = 1;
                        p.add_term(e, c.clone());
                    }
                }
                p
            })
            .collect();
        let mut out = Self::zero(self.ring, new_vars);
        for (e, c) in &self.terms {
            let mut term = Self::constant(self.ring, new_vars, c.clone());
            for (s, &pow) in e.iter().enumerate() {
                for _ in 0..pow {
                    term = term.mul(&images[s])?;
                }
            }
            out = out.add(&term)?;
        }
        Ok(out)
    }

    /// JSON map from comma-separated exponent vectors to coefficient strings.
    pub fn to_json(&self) -> serde_json::Value {
        let mut map = serde_json::Map::new();
        for (e, c) in &self.terms {
            let key = e.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
            map.insert(key, serde_json::Value::String(c.to_string()));
        }
        serde_json::Value::Object(map)
    }
}

/// Renders an exponent vector with the given variable stem, e.g. "a1^2*a3".
pub fn monomial_name(exps: &[u32], stem: &str) -> String {
    let parts: Vec<String> = exps
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| {
            if e == 1 {
                format!("{stem}{}", i + 1)
            } else {
                format!("{stem}{}^{e}", i + 1)
            }
        })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            let name = monomial_name(e, "a");
            if first {
                write!(f, "{c}*{name}")?;
                first = false;
            } else {
                write!(f, " + {c}*{name}")?;
            }
        }
        Ok(())
    }
}
