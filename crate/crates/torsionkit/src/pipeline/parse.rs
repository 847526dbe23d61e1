//! Presentation file format. One directive per line, `#` starts a comment:
//!
//! ```text
//! generators 2
//! rank 2
//! torsion 4                       # optional: declared torsion orders of H
//! relator x1 x2 X1 X2
//! expansion 1: pairs=[(x1,x2)] powers=[] exponent=0
//! linking 1 1 1/4                 # optional: torsion linking table entries
//! ```
//!
//! Generator tokens are 1-based: `x3` is the third generator, `X3` its
//! inverse, and the bare word `1` is the empty word. Words inside an
//! expansion may contain spaces; pairs are separated by `;`. Every parse
//! error carries the line it came from.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use num_rational::Rational64;

use crate::abelian::{cokernel, LinkingForm};
use crate::error::{Error, Result};
use crate::fox::{nielsen_normalize, CommutatorExpansion, FreeWord, Presentation};
use crate::pipeline::NicePresentation;

/// A parsed presentation file, plus the generator substitution when the
/// input needed normalization.
#[derive(Debug, Clone)]
pub struct ImportedPresentation {
    pub np: NicePresentation,
    /// `Some(words)` after normalization: entry i is the word in the new
    /// generators equal to the old generator x_(i+1).
    pub substitution: Option<Vec<FreeWord>>,
}

fn perr<T>(line: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse { line, msg: msg.into() })
}

fn parse_word(line: usize, s: &str) -> Result<FreeWord> {
    FreeWord::from_str(s.trim())
        .map_err(|e| Error::Parse { line, msg: format!("bad word '{}': {e}", s.trim()) })
}

/// Extracts the `key=[...]` bracket group from an expansion line, if present.
fn bracket_group<'a>(line: usize, s: &'a str, key: &str) -> Result<Option<&'a str>> {
    let pat = format!("{key}=[");
    let Some(start) = s.find(&pat) else {
        return Ok(None);
    };
    let rest = &s[start + pat.len()..];
    let Some(end) = rest.find(']') else {
        return perr(line, format!("unterminated {key}=[...] group"));
    };
    Ok(Some(&rest[..end]))
}

fn parse_expansion_spec(line: usize, spec: &str) -> Result<CommutatorExpansion> {
    let mut pairs = Vec::new();
    if let Some(inner) = bracket_group(line, spec, "pairs")? {
        for chunk in inner.split(';') {
            let chunk = chunk.trim();
            if chunk.is_empty() {
                continue;
            }
            let chunk = chunk
                .strip_prefix('(')
                .and_then(|c| c.strip_suffix(')'))
                .ok_or_else(|| Error::Parse {
                    line,
                    msg: format!("pair '{chunk}' is not parenthesized"),
                })?;
            let mut words = chunk.split(',');
            let (Some(a), Some(b), None) = (words.next(), words.next(), words.next()) else {
                return perr(line, format!("pair '({chunk})' needs exactly two words"));
            };
            pairs.push((parse_word(line, a)?, parse_word(line, b)?));
        }
    }
    let mut power_words = Vec::new();
    if let Some(inner) = bracket_group(line, spec, "powers")? {
        for chunk in inner.split(';') {
            let chunk = chunk.trim();
            if chunk.is_empty() {
                continue;
            }
            power_words.push(parse_word(line, chunk)?);
        }
    }
    let mut power_exponent = 0;
    if let Some(start) = spec.find("exponent=") {
        let rest = &spec[start + "exponent=".len()..];
        let tok = rest.split_whitespace().next().unwrap_or("");
        power_exponent = match tok.parse::<u64>() {
            Ok(e) => e,
            Err(_) => return perr(line, format!("bad exponent '{tok}'")),
        };
    }
    if !power_words.is_empty() && power_exponent == 0 {
        return perr(line, "power words need a nonzero exponent");
    }
    Ok(CommutatorExpansion { pairs, power_words, power_exponent })
}

fn parse_rational(line: usize, s: &str) -> Result<Rational64> {
    let parse_int = |t: &str| {
        t.trim().parse::<i64>().map_err(|_| Error::Parse {
            line,
            msg: format!("bad integer '{}'", t.trim()),
        })
    };
    match s.split_once('/') {
        Some((n, d)) => {
            let den = parse_int(d)?;
            if den == 0 {
                return perr(line, "zero denominator");
            }
            Ok(Rational64::new(parse_int(n)?, den))
        }
        None => Ok(Rational64::from_integer(parse_int(s)?)),
    }
}

/// Parses the presentation file format from a string. `import_presentation`
/// is the file-reading wrapper.
pub fn parse_presentation(text: &str) -> Result<ImportedPresentation> {
    let mut generators: Option<(usize, usize)> = None; // (count, line)
    let mut rank: Option<(usize, usize)> = None;
    let mut torsion: Option<Vec<u64>> = None;
    let mut relators: Vec<FreeWord> = Vec::new();
    let mut expansions: Vec<(usize, usize, CommutatorExpansion)> = Vec::new();
    let mut linkings: Vec<(usize, usize, usize, Rational64)> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (head, rest) = content.split_once(char::is_whitespace).unwrap_or((content, ""));
        let rest = rest.trim();
        match head {
            "generators" => {
                if generators.is_some() {
                    return perr(line, "duplicate generators line");
                }
                let m: usize = rest
                    .parse()
                    .map_err(|_| Error::Parse { line, msg: format!("bad count '{rest}'") })?;
                generators = Some((m, line));
            }
            "rank" => {
                if rank.is_some() {
                    return perr(line, "duplicate rank line");
                }
                let n: usize = rest
                    .parse()
                    .map_err(|_| Error::Parse { line, msg: format!("bad rank '{rest}'") })?;
                rank = Some((n, line));
            }
            "torsion" => {
                if torsion.is_some() {
                    return perr(line, "duplicate torsion line");
                }
                let mut orders = Vec::new();
                for tok in rest.split_whitespace() {
                    let d: u64 = tok.parse().map_err(|_| Error::Parse {
                        line,
                        msg: format!("bad torsion order '{tok}'"),
                    })?;
                    orders.push(d);
                }
                torsion = Some(orders);
            }
            "relator" => {
                relators.push(parse_word(line, rest)?);
            }
            "expansion" => {
                let Some((idx, spec)) = rest.split_once(':') else {
                    return perr(line, "expected 'expansion <i>: pairs=[...] ...'");
                };
                let idx: usize = idx.trim().parse().map_err(|_| Error::Parse {
                    line,
                    msg: format!("bad relator index '{}'", idx.trim()),
                })?;
                if idx == 0 {
                    return perr(line, "relator indices are 1-based");
                }
                expansions.push((line, idx, parse_expansion_spec(line, spec)?));
            }
            "linking" => {
                let toks: Vec<&str> = rest.split_whitespace().collect();
                if toks.len() != 3 {
                    return perr(line, "expected 'linking <i> <j> <num>/<den>'");
                }
                let parse_idx = |t: &str| {
                    t.parse::<usize>().ok().filter(|&v| v > 0).ok_or(Error::Parse {
                        line,
                        msg: format!("bad torsion index '{t}'"),
                    })
                };
                linkings.push((line, parse_idx(toks[0])?, parse_idx(toks[1])?, parse_rational(line, toks[2])?));
            }
            other => {
                return perr(line, format!("unknown directive '{other}'"));
            }
        }
    }

    let Some((m, _)) = generators else {
        return perr(text.lines().count() + 1, "missing generators line");
    };
    let Some((n, _)) = rank else {
        return perr(text.lines().count() + 1, "missing rank line");
    };
    let presentation = Presentation::new(m, n, relators, torsion)?;

    let mut slots: Vec<Option<CommutatorExpansion>> = vec![None; presentation.relators.len()];
    for (line, idx, e) in expansions {
        if idx > slots.len() {
            return perr(line, format!("expansion references relator {idx}, file has {}", slots.len()));
        }
        if slots[idx - 1].is_some() {
            return perr(line, format!("duplicate expansion for relator {idx}"));
        }
        if e.expand() != presentation.relators[idx - 1].freely_reduced() {
            return perr(line, format!("expansion does not expand to relator {idx}"));
        }
        slots[idx - 1] = Some(e);
    }

    let linking = if linkings.is_empty() {
        None
    } else {
        let (h, _) = cokernel(&presentation.abelianized_matrix(), m)?;
        let orders = h.torsion_orders.clone();
        let mut table =
            vec![vec![Rational64::from_integer(0); orders.len()]; orders.len()];
        for (line, i, j, v) in linkings {
            if i > orders.len() || j > orders.len() {
                return perr(
                    line,
                    format!("linking index ({i},{j}) outside torsion rank {}", orders.len()),
                );
            }
            table[i - 1][j - 1] = v;
        }
        Some(LinkingForm::new(orders.clone(), orders, table)?)
    };

    Ok(ImportedPresentation {
        np: NicePresentation::new(presentation, slots, linking)?,
        substitution: None,
    })
}

/// Reads and parses a presentation file.
pub fn import_presentation(path: &Path) -> Result<ImportedPresentation> {
    parse_presentation(&std::fs::read_to_string(path)?)
}

impl ImportedPresentation {
    /// Brings the presentation into nice block shape with a recorded
    /// generator substitution if it is not already there. Normalization
    /// rewrites the relators, so any expansions are dropped.
    pub fn ensure_nice(self) -> Result<Self> {
        let p = &self.np.presentation;
        if crate::fox::nice_block_shape(&p.abelianized_matrix(), p.rank) {
            return Ok(self);
        }
        let (nice, substitution) = nielsen_normalize(p)?;
        let slots = vec![None; nice.relators.len()];
        Ok(ImportedPresentation {
            np: NicePresentation::new(nice, slots, self.np.linking)?,
            substitution: Some(substitution),
        })
    }
}

/// Serializes a presentation back into the file format; `parse_presentation`
/// of the output reproduces the input.
pub fn render_presentation(np: &NicePresentation) -> String {
    let p = &np.presentation;
    let mut out = String::new();
    let _ = writeln!(out, "generators {}", p.num_generators);
    let _ = writeln!(out, "rank {}", p.rank);
    if let Some(orders) = &p.torsion_orders {
        let toks: Vec<String> = orders.iter().map(|d| d.to_string()).collect();
        let _ = writeln!(out, "torsion {}", toks.join(" "));
    }
    for r in &p.relators {
        let _ = writeln!(out, "relator {r}");
    }
    for (i, e) in np.expansions.iter().enumerate() {
        let Some(e) = e else { continue };
        let pairs: Vec<String> =
            e.pairs.iter().map(|(a, b)| format!("({a},{b})")).collect();
        let powers: Vec<String> = e.power_words.iter().map(|w| w.to_string()).collect();
        let _ = writeln!(
            out,
            "expansion {}: pairs=[{}] powers=[{}] exponent={}",
            i + 1,
            pairs.join(";"),
            powers.join(";"),
            e.power_exponent
        );
    }
    if let Some(l) = &np.linking {
        for (i, row) in l.table.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if *v != Rational64::from_integer(0) {
                    let _ = writeln!(out, "linking {} {} {}/{}", i + 1, j + 1, v.numer(), v.denom());
                }
            }
        }
    }
    out
}
