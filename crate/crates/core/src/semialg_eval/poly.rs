use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::value::PowerSeriesValue;

/// Polynomial over `Q`. Exponent vectors have trailing zeros trimmed;
/// variable names are supplied by the caller when printing.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Polynomial {
    terms: BTreeMap<Vec<u32>, BigRational>,
}

fn trim(mut e: Vec<u32>) -> Vec<u32> {
    while e.last() == Some(&0) {
        e.pop();
    }
    e
}

impl Polynomial {
    pub fn new(terms: impl IntoIterator<Item = (Vec<u32>, BigRational)>) -> Self {
        let mut p = Polynomial::default();
        for (e, c) in terms {
            p.add_term(trim(e), c);
        }
        p
    }

    pub fn constant(c: BigRational) -> Self {
        Polynomial::new([(Vec::new(), c)])
    }

    pub fn var(j: usize) -> Self {
        let mut e = vec![0; j + 1];
        e[j] = 1;
        Polynomial::new([(e, BigRational::one())])
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, BigRational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of variable slots used (one past the highest index).
    pub fn var_bound(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    fn add_term(&mut self, e: Vec<u32>, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let slot = self
            .terms
            .entry(e.clone())
            .or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        Polynomial {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Polynomial::default();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let n = e1.len().max(e2.len());
                let e = (0..n)
                    .map(|i| e1.get(i).copied().unwrap_or(0) + e2.get(i).copied().unwrap_or(0))
                    .collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Polynomial::constant(BigRational::one());
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Value at rational arguments; `args` must cover [`Self::var_bound`].
    pub fn eval_rational(&self, args: &[BigRational]) -> BigRational {
        let mut total = BigRational::zero();
        for (e, c) in &self.terms {
            let mut m = c.clone();
            for (x, &k) in args.iter().zip(e) {
                for _ in 0..k {
                    m *= x;
                }
            }
            total += m;
        }
        total
    }

    /// Value at series arguments in truncated arithmetic; `args` must cover
    /// [`Self::var_bound`].
    pub fn eval_series(&self, args: &[PowerSeriesValue]) -> PowerSeriesValue {
        let mut total = PowerSeriesValue::zero();
        for (e, c) in &self.terms {
            let mut m = PowerSeriesValue::constant(c.clone());
            for (x, &k) in args.iter().zip(e) {
                if k > 0 {
                    m = m.mul(&x.pow(k));
                }
            }
            total = total.add(&m);
        }
        total
    }

    /// Printable form with `name(i)` naming slot `i`.
    pub fn display<'a>(&'a self, name: &'a dyn Fn(usize) -> String) -> impl fmt::Display + 'a {
        Shown { p: self, name }
    }
}

struct Shown<'a> {
    p: &'a Polynomial,
    name: &'a dyn Fn(usize) -> String,
}

impl fmt::Display for Shown<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<(&Vec<u32>, &BigRational)> = self.p.terms.iter().collect();
        // total degree descending, then lexicographically descending
        terms.sort_by(|a, b| {
            let da: u32 = a.0.iter().sum();
            let db: u32 = b.0.iter().sum();
            db.cmp(&da).then_with(|| b.0.cmp(a.0))
        });
        if terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (e, c)) in terms.iter().enumerate() {
            let mag = c.abs();
            match (i, c.is_negative()) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mut factors: Vec<String> = Vec::new();
            for (j, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => factors.push((self.name)(j)),
                    _ => factors.push(format!("{}^{k}", (self.name)(j))),
                }
            }
            if factors.is_empty() {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}*")?;
                }
                f.write_str(&factors.join("*"))?;
            }
        }
        Ok(())
    }
}
