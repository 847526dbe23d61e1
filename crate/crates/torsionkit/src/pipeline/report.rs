//! Verdict reports. A report freezes both sides of a comparison as
//! monomial-keyed coefficient tables so the verdict can be recomputed from
//! the report alone, serializes to JSON, and renders as a short text block
//! for the command line.

use std::collections::BTreeMap;
use std::time::Duration;

use serde::Serialize;

use crate::groupring::TruncatedElement;

/// Outcome of comparing the two sides of a check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    /// The sides agree coefficient for coefficient.
    Equal,
    /// The sides agree after negating one of them; reported separately so a
    /// global orientation dispute never masquerades as a real mismatch.
    EqualUpToSign,
    /// The sides differ beyond a global sign.
    Unequal,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Equal => "equal",
            Verdict::EqualUpToSign => "equal-up-to-sign",
            Verdict::Unequal => "unequal",
        }
    }
}

/// Frozen result of one theorem check.
#[derive(Debug, Clone, Serialize)]
pub struct TheoremReport {
    /// Which check ran: "integral", "mod-r" or "massey".
    pub mode: String,
    /// Degree bound of the ambient truncated ring (comparison degree + 1).
    pub truncation_degree: usize,
    /// 1-based struck column.
    pub strike: usize,
    /// Torsion side, monomial name -> coefficient.
    pub lhs: BTreeMap<String, String>,
    /// Determinant side, monomial name -> coefficient.
    pub rhs: BTreeMap<String, String>,
    pub verdict: Verdict,
    /// Lowest degree with a nonzero coefficient on either side, if any.
    pub leading_degree: Option<usize>,
    /// Coefficients of the leading degree slice on both sides:
    /// monomial -> (torsion side, determinant side).
    pub leading_terms: BTreeMap<String, (String, String)>,
    pub elapsed_ms: u128,
}

/// Compares two truncated elements: equal, equal after a global sign flip,
/// or genuinely different. Zero sides compare as equal.
pub fn compare(lhs: &TruncatedElement, rhs: &TruncatedElement) -> Verdict {
    if lhs == rhs {
        Verdict::Equal
    } else if *lhs == rhs.neg() {
        Verdict::EqualUpToSign
    } else {
        Verdict::Unequal
    }
}

impl TheoremReport {
    pub(crate) fn new(
        mode: &str,
        truncation_degree: usize,
        strike: usize,
        lhs: &TruncatedElement,
        rhs: &TruncatedElement,
        elapsed: Duration,
    ) -> Self {
        let verdict = compare(lhs, rhs);
        let leading_degree = match (lhs.leading_degree(), rhs.leading_degree()) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        let mut leading_terms = BTreeMap::new();
        if let Some(d) = leading_degree {
            for (name, c) in lhs.degree_slice(d) {
                leading_terms
                    .entry(name)
                    .or_insert_with(|| (String::from("0"), String::from("0")))
                    .0 = c.to_string();
            }
            for (name, c) in rhs.degree_slice(d) {
                leading_terms
                    .entry(name)
                    .or_insert_with(|| (String::from("0"), String::from("0")))
                    .1 = c.to_string();
            }
        }
        TheoremReport {
            mode: mode.to_string(),
            truncation_degree,
            strike,
            lhs: lhs.to_table(),
            rhs: rhs.to_table(),
            verdict,
            leading_degree,
            leading_terms,
            elapsed_ms: elapsed.as_millis(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Short text rendering: verdict line, truncation degree, both tables.
    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "{} check, strike column {}, truncation degree {}\n",
            self.mode, self.strike, self.truncation_degree
        ));
        out.push_str(&format!("verdict: {}\n", self.verdict.as_str()));
        if let Some(d) = self.leading_degree {
            out.push_str(&format!("leading terms (degree {d}):\n"));
            for (name, (l, r)) in &self.leading_terms {
                out.push_str(&format!("  {name}: torsion side {l}, determinant side {r}\n"));
            }
        } else {
            out.push_str("both sides vanish\n");
        }
        out.push_str("torsion side:\n");
        render_table(&mut out, &self.lhs);
        out.push_str("determinant side:\n");
        render_table(&mut out, &self.rhs);
        out.push_str(&format!("elapsed: {} ms\n", self.elapsed_ms));
        out
    }
}

fn render_table(out: &mut String, table: &BTreeMap<String, String>) {
    if table.is_empty() {
        out.push_str("  0\n");
        return;
    }
    for (name, c) in table {
        out.push_str(&format!("  {name}: {c}\n"));
    }
}
