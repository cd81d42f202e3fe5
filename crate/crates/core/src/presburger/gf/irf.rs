use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::poly::{lp_div_atom, LPoly};
use crate::presburger::PresburgerError;

/// Element `num / ∏ (1 - X^c)^k` of the subring of `Z[[X_1..X_s]]`
/// generated by `Z[X]` and the series `(1 - X^c)^{-1}`, `c ∈ N^s ∖ {0}`.
///
/// Atoms dividing the numerator are cancelled on construction. The
/// presentation is not unique; [`IntegerRationalFunction::equals`]
/// compares by cross-multiplication.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerRationalFunction {
    nvars: usize,
    num: BTreeMap<Vec<u32>, BigInt>,
    den: BTreeMap<Vec<u32>, u32>,
}

fn graded_cmp(a: &[u32], b: &[u32]) -> std::cmp::Ordering {
    let da: u64 = a.iter().map(|&x| u64::from(x)).sum();
    let db: u64 = b.iter().map(|&x| u64::from(x)).sum();
    da.cmp(&db).then_with(|| b.cmp(a))
}

impl IntegerRationalFunction {
    pub fn new(
        nvars: usize,
        num: impl IntoIterator<Item = (Vec<u32>, BigInt)>,
        den: impl IntoIterator<Item = (Vec<u32>, u32)>,
    ) -> Result<Self, PresburgerError> {
        let mut n = BTreeMap::new();
        for (e, c) in num {
            if e.len() != nvars {
                return Err(PresburgerError::Arity {
                    expected: nvars,
                    got: e.len(),
                });
            }
            add_int(&mut n, e, c);
        }
        let mut d = BTreeMap::new();
        for (c, k) in den {
            if c.len() != nvars {
                return Err(PresburgerError::Arity {
                    expected: nvars,
                    got: c.len(),
                });
            }
            if c.iter().all(|&x| x == 0) {
                return Err(PresburgerError::ConstantAtom);
            }
            if k > 0 {
                *d.entry(c).or_insert(0) += k;
            }
        }
        let mut out = IntegerRationalFunction {
            nvars,
            num: n,
            den: d,
        };
        out.cancel();
        Ok(out)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn num(&self) -> &BTreeMap<Vec<u32>, BigInt> {
        &self.num
    }

    pub fn den(&self) -> &BTreeMap<Vec<u32>, u32> {
        &self.den
    }

    fn cancel(&mut self) {
        if self.num.is_empty() {
            self.den.clear();
            return;
        }
        let atoms: Vec<Vec<u32>> = self.den.keys().cloned().collect();
        for c in atoms {
            let ci: Vec<i64> = c.iter().map(|&x| i64::from(x)).collect();
            while self.den.contains_key(&c) {
                let Some(quot) = lp_div_atom(&to_lpoly(&self.num), &ci) else {
                    break;
                };
                self.num = quot
                    .into_iter()
                    .map(|(e, v)| (e.iter().map(|&x| x as u32).collect(), v.to_integer()))
                    .collect();
                let k = self.den.get_mut(&c).unwrap();
                *k -= 1;
                if *k == 0 {
                    self.den.remove(&c);
                }
            }
        }
    }

    fn cross_numerator(&self, other: &Self) -> BTreeMap<Vec<u32>, BigInt> {
        let mut num = self.num.clone();
        for (c, &k) in &other.den {
            for _ in 0..k {
                num = mul_atom(&num, c);
            }
        }
        num
    }

    /// Equality as elements of `Z[[X]]`.
    pub fn equals(&self, other: &Self) -> bool {
        self.nvars == other.nvars && self.cross_numerator(other) == other.cross_numerator(self)
    }

    /// Coefficients of all monomials of total degree `≤ bound`.
    pub fn expand(&self, bound: u32) -> BTreeMap<Vec<u32>, BigInt> {
        let total = |e: &[u32]| e.iter().map(|&x| u64::from(x)).sum::<u64>();
        let bound64 = u64::from(bound);
        let mut series: BTreeMap<Vec<u32>, BigInt> = self
            .num
            .iter()
            .filter(|(e, _)| total(e) <= bound64)
            .map(|(e, c)| (e.clone(), c.clone()))
            .collect();
        for (c, &k) in &self.den {
            let step = total(c);
            for _ in 0..k {
                // multiply by 1 + X^c + X^{2c} + …
                let mut out = BTreeMap::new();
                for (e, v) in &series {
                    let mut cur = e.clone();
                    let mut deg = total(&cur);
                    while deg <= bound64 {
                        add_int(&mut out, cur.clone(), v.clone());
                        for (x, y) in cur.iter_mut().zip(c) {
                            *x += y;
                        }
                        deg += step;
                    }
                }
                series = out;
            }
        }
        series
    }
}

fn to_lpoly(num: &BTreeMap<Vec<u32>, BigInt>) -> LPoly {
    num.iter()
        .map(|(e, c)| {
            (
                e.iter().map(|&x| i64::from(x)).collect(),
                BigRational::from_integer(c.clone()),
            )
        })
        .collect()
}

fn add_int(map: &mut BTreeMap<Vec<u32>, BigInt>, e: Vec<u32>, c: BigInt) {
    if c.is_zero() {
        return;
    }
    match map.entry(e) {
        std::collections::btree_map::Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(c);
        }
    }
}

fn mul_atom(num: &BTreeMap<Vec<u32>, BigInt>, c: &[u32]) -> BTreeMap<Vec<u32>, BigInt> {
    let mut out = num.clone();
    for (e, v) in num {
        let shifted = e.iter().zip(c).map(|(x, y)| x + y).collect();
        add_int(&mut out, shifted, -v.clone());
    }
    out
}

/// Truncation of `f` to total degree `≤ bound`.
pub fn expand_gf(f: &IntegerRationalFunction, bound: u32) -> BTreeMap<Vec<u32>, BigInt> {
    f.expand(bound)
}

fn write_monomial(f: &mut fmt::Formatter<'_>, e: &[u32]) -> fmt::Result {
    let mut first = true;
    for (i, &x) in e.iter().enumerate() {
        if x == 0 {
            continue;
        }
        if !first {
            f.write_str("*")?;
        }
        first = false;
        write!(f, "X{}", i + 1)?;
        if x > 1 {
            write!(f, "^{x}")?;
        }
    }
    Ok(())
}

impl fmt::Display for IntegerRationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<(&Vec<u32>, &BigInt)> = self.num.iter().collect();
        terms.sort_by(|a, b| graded_cmp(a.0, b.0));
        if terms.is_empty() {
            f.write_str("0")?;
        }
        let wrap = terms.len() > 1 && !self.den.is_empty();
        if wrap {
            f.write_str("(")?;
        }
        for (i, (e, c)) in terms.iter().enumerate() {
            let constant = e.iter().all(|&x| x == 0);
            let mag = c.abs();
            match (i, c.is_negative()) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if constant {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}*")?;
                }
                write_monomial(f, e)?;
            }
        }
        if wrap {
            f.write_str(")")?;
        }
        if self.den.is_empty() {
            return Ok(());
        }
        let mut atoms: Vec<(&Vec<u32>, &u32)> = self.den.iter().collect();
        atoms.sort_by(|a, b| graded_cmp(a.0, b.0));
        let group = atoms.len() > 1 || *atoms[0].1 > 1;
        f.write_str(if group { " / (" } else { " / " })?;
        for (i, (c, &k)) in atoms.iter().enumerate() {
            if i > 0 {
                f.write_str(" * ")?;
            }
            f.write_str("(1 - ")?;
            write_monomial(f, c)?;
            f.write_str(")")?;
            if k > 1 {
                write!(f, "^{k}")?;
            }
        }
        if group {
            f.write_str(")")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn geometric() {
        let f = IntegerRationalFunction::new(1, [(vec![0], int(1))], [(vec![1], 1)]).unwrap();
        assert_eq!(f.to_string(), "1 / (1 - X1)");
        let e = expand_gf(&f, 3);
        assert_eq!(e.len(), 4);
        assert!(e.values().all(|c| *c == int(1)));
    }

    #[test]
    fn cancels_and_compares() {
        // (1 - X^2)/((1 - X)(1 - X^2)) = 1/(1 - X)
        let f = IntegerRationalFunction::new(
            1,
            [(vec![0], int(1)), (vec![2], int(-1))],
            [(vec![1], 1), (vec![2], 1)],
        )
        .unwrap();
        let g = IntegerRationalFunction::new(1, [(vec![0], int(1))], [(vec![1], 1)]).unwrap();
        assert!(f.equals(&g));
        assert_eq!(f.den().len(), 1);
        // X/(1 - X^2) vs (X + X^2)/(1 - X^2)... differ
        let h = IntegerRationalFunction::new(1, [(vec![1], int(1))], [(vec![2], 1)]).unwrap();
        assert!(!h.equals(&g));
        assert_eq!(h.to_string(), "X1 / (1 - X1^2)");
    }

    #[test]
    fn product_expansion() {
        let f = IntegerRationalFunction::new(
            2,
            [(vec![1, 1], int(1))],
            [(vec![1, 0], 1), (vec![0, 1], 1)],
        )
        .unwrap();
        let e = expand_gf(&f, 4);
        assert_eq!(e.get(&vec![2, 2]), Some(&int(1)));
        assert_eq!(e.get(&vec![3, 1]), Some(&int(1)));
        assert_eq!(e.get(&vec![0, 1]), None);
        assert_eq!(e.len(), 6);
        assert_eq!(f.to_string(), "X1*X2 / ((1 - X1) * (1 - X2))");
    }
}
