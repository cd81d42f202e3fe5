use std::collections::BTreeMap;
use std::fmt;

use crate::grothendieck_ring::LocalizedMotivicElement;

use super::SeriesError;

/// A power series in `T_1..T_r` known up to total degree `bound`.
///
/// Only nonzero coefficients are stored and every key satisfies
/// `|n| ≤ bound`.
#[derive(Clone, Debug)]
pub struct TruncatedSeries {
    nvars: usize,
    bound: u32,
    coeffs: BTreeMap<Vec<u32>, LocalizedMotivicElement>,
}

pub(crate) fn total_degree(n: &[u32]) -> u32 {
    n.iter().sum()
}

impl TruncatedSeries {
    pub fn zero(nvars: usize, bound: u32) -> Self {
        TruncatedSeries {
            nvars,
            bound,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }

    pub fn coeffs(&self) -> &BTreeMap<Vec<u32>, LocalizedMotivicElement> {
        &self.coeffs
    }

    /// Coefficient of `T^n` (zero when absent or beyond the bound).
    pub fn coeff(&self, n: &[u32]) -> LocalizedMotivicElement {
        self.coeffs.get(n).cloned().unwrap_or_default()
    }

    /// Adds `c·T^n`; terms beyond the bound are dropped.
    pub fn add_term(&mut self, n: Vec<u32>, c: &LocalizedMotivicElement) {
        assert_eq!(n.len(), self.nvars, "exponent length");
        if c.is_zero() || total_degree(&n) > self.bound {
            return;
        }
        match self.coeffs.entry(n) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    fn check(&self, other: &Self) -> Result<(), SeriesError> {
        if self.nvars != other.nvars {
            return Err(SeriesError::VariableCountMismatch(self.nvars, other.nvars));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check(other)?;
        let mut out = TruncatedSeries::zero(self.nvars, self.bound.min(other.bound));
        for (n, c) in self.coeffs.iter().chain(other.coeffs.iter()) {
            out.add_term(n.clone(), c);
        }
        Ok(out)
    }

    /// Truncated Cauchy product.
    pub fn mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check(other)?;
        let mut out = TruncatedSeries::zero(self.nvars, self.bound.min(other.bound));
        for (a, ca) in &self.coeffs {
            for (b, cb) in &other.coeffs {
                let n: Vec<u32> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                if total_degree(&n) <= out.bound {
                    out.add_term(n, &(ca * cb));
                }
            }
        }
        Ok(out)
    }

    /// Drops every term of total degree above `bound`.
    pub fn truncate(&self, bound: u32) -> Self {
        TruncatedSeries {
            nvars: self.nvars,
            bound: bound.min(self.bound),
            coeffs: self
                .coeffs
                .iter()
                .filter(|(n, _)| total_degree(n) <= bound)
                .map(|(n, c)| (n.clone(), c.clone()))
                .collect(),
        }
    }

    /// First exponent (in graded order) where the two series differ, with
    /// both coefficients.
    pub fn first_difference(
        &self,
        other: &Self,
    ) -> Option<(Vec<u32>, LocalizedMotivicElement, LocalizedMotivicElement)> {
        let mut keys: Vec<&Vec<u32>> = self.coeffs.keys().chain(other.coeffs.keys()).collect();
        keys.sort_by(|a, b| graded_cmp(a, b));
        keys.dedup();
        for n in keys {
            let a = self.coeff(n);
            let b = other.coeff(n);
            if a != b {
                return Some((n.clone(), a, b));
            }
        }
        None
    }
}

/// Graded order: total degree ascending, then lexicographically descending
/// so that `T1` comes before `T2`.
pub(crate) fn graded_cmp(a: &[u32], b: &[u32]) -> std::cmp::Ordering {
    total_degree(a).cmp(&total_degree(b)).then_with(|| b.cmp(a))
}

impl PartialEq for TruncatedSeries {
    fn eq(&self, other: &Self) -> bool {
        self.nvars == other.nvars && self.first_difference(other).is_none()
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut keys: Vec<&Vec<u32>> = self.coeffs.keys().collect();
        keys.sort_by(|a, b| graded_cmp(a, b));
        if keys.is_empty() {
            write!(f, "0")?;
        }
        for (i, n) in keys.into_iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            super::function::write_term(f, &self.coeffs[n], n)?;
        }
        write!(f, " + O(|T|^{})", self.bound + 1)
    }
}
