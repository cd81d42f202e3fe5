//! Canonical text form of ring elements.
//!
//! Terms are grouped by symbol monomial. A group whose `L`-polynomial is
//! `c·L^e·(L-1)^k` is printed in that factored shape, any other group term by
//! term. Chunks are ordered by virtual degree (descending), then `L`-exponent
//! (descending), then symbol names.

use std::cmp::Reverse;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed};

use super::element::{divide_laurent_by_l_pow_minus_one, Monomial, MotivicElement};
use super::localized::LocalizedMotivicElement;

struct Chunk {
    degree: i64,
    l_exp: i64,
    names: Vec<(String, u32)>,
    coeff: BigInt,
    body: String,
}

fn monomial_body(mono: &Monomial) -> Vec<String> {
    mono.factors()
        .iter()
        .map(|(s, e)| {
            if *e == 1 {
                format!("[{}]", s.name())
            } else {
                format!("[{}]^{}", s.name(), e)
            }
        })
        .collect()
}

fn l_power(e: i64) -> Option<String> {
    match e {
        0 => None,
        1 => Some("L".to_string()),
        _ => Some(format!("L^{e}")),
    }
}

fn chunks(x: &MotivicElement) -> Vec<Chunk> {
    let mut out = Vec::new();
    for (mono, poly) in x.l_groups() {
        let names: Vec<(String, u32)> = mono
            .names()
            .into_iter()
            .map(|(n, e)| (n.to_string(), e))
            .collect();
        let dim = mono.dim();
        let mut k = 0u32;
        let mut p = poly.clone();
        while p.len() > 1 {
            match divide_laurent_by_l_pow_minus_one(&p, 1) {
                Some(q) => {
                    p = q;
                    k += 1;
                }
                None => break,
            }
        }
        if p.len() == 1 {
            let (&e, c) = p.iter().next().expect("one term");
            let mut body = monomial_body(&mono);
            match k {
                0 => {}
                1 => body.push("(L - 1)".to_string()),
                _ => body.push(format!("(L - 1)^{k}")),
            }
            body.extend(l_power(e));
            out.push(Chunk {
                degree: dim + e + i64::from(k),
                l_exp: e + i64::from(k),
                names: names.clone(),
                coeff: c.clone(),
                body: body.join("*"),
            });
        } else {
            for (&e, c) in &poly {
                let mut body = monomial_body(&mono);
                body.extend(l_power(e));
                out.push(Chunk {
                    degree: dim + e,
                    l_exp: e,
                    names: names.clone(),
                    coeff: c.clone(),
                    body: body.join("*"),
                });
            }
        }
    }
    out.sort_by(|a, b| {
        (Reverse(a.degree), Reverse(a.l_exp), &a.names).cmp(&(
            Reverse(b.degree),
            Reverse(b.l_exp),
            &b.names,
        ))
    });
    out
}

fn write_chunks(f: &mut fmt::Formatter<'_>, chunks: &[Chunk]) -> fmt::Result {
    if chunks.is_empty() {
        return write!(f, "0");
    }
    for (idx, ch) in chunks.iter().enumerate() {
        let neg = ch.coeff.is_negative();
        match (idx, neg) {
            (0, true) => write!(f, "-")?,
            (0, false) => {}
            (_, true) => write!(f, " - ")?,
            (_, false) => write!(f, " + ")?,
        }
        let abs = ch.coeff.abs();
        if ch.body.is_empty() {
            write!(f, "{abs}")?;
        } else if abs.is_one() {
            write!(f, "{}", ch.body)?;
        } else {
            write!(f, "{abs}*{}", ch.body)?;
        }
    }
    Ok(())
}

impl fmt::Display for MotivicElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_chunks(f, &chunks(self))
    }
}

/// Renders a denominator multiset `i → k` as `(L - 1)^2*(L^3 - 1)`.
pub fn render_l_atoms(den: &BTreeMap<u32, u32>) -> String {
    den.iter()
        .map(|(&i, &k)| {
            let base = if i == 1 {
                "(L - 1)".to_string()
            } else {
                format!("(L^{i} - 1)")
            };
            if k == 1 {
                base
            } else {
                format!("{base}^{k}")
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}

impl LocalizedMotivicElement {
    /// True when the canonical text is a single product (no top-level sum).
    pub(crate) fn is_single_chunk(&self) -> bool {
        self.den().is_empty() && chunks(self.num()).len() <= 1
    }
}

impl fmt::Display for LocalizedMotivicElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den().is_empty() {
            return write!(f, "{}", self.num());
        }
        let num = chunks(self.num());
        if num.len() > 1 {
            write!(f, "(")?;
            write_chunks(f, &num)?;
            write!(f, ")")?;
        } else {
            write_chunks(f, &num)?;
        }
        write!(f, "/({})", render_l_atoms(self.den()))
    }
}
