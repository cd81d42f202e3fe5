//! Rational affine forms, polynomial weights and Laurent polynomials used
//! while summing over a cell.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::presburger::LinearForm;

pub(crate) fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// `Σ coeffs[j] ℓ_j + constant` over `Q` in a fixed number of variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct AffineQ {
    pub coeffs: Vec<BigRational>,
    pub constant: BigRational,
}

impl AffineQ {
    pub fn from_linear(l: &LinearForm, nvars: usize) -> Self {
        AffineQ {
            coeffs: (0..nvars).map(|j| q(l.coeff(j))).collect(),
            constant: q(l.constant_term()),
        }
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        AffineQ {
            coeffs: vec![BigRational::zero(); nvars],
            constant: c,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        AffineQ {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
            constant: &self.constant + &other.constant,
        }
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        AffineQ {
            coeffs: self.coeffs.iter().map(|a| a * k).collect(),
            constant: &self.constant * k,
        }
    }

    pub fn add_constant(&self, c: &BigRational) -> Self {
        AffineQ {
            coeffs: self.coeffs.clone(),
            constant: &self.constant + c,
        }
    }

    /// Replaces variable `j` by `value`.
    pub fn substitute(&self, j: usize, value: &AffineQ) -> Self {
        let a = self.coeffs[j].clone();
        if a.is_zero() {
            return self.clone();
        }
        let mut base = self.clone();
        base.coeffs[j] = BigRational::zero();
        base.add(&value.scale(&a))
    }
}

/// Polynomial over `Q` in a fixed number of variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct QPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, BigRational>,
}

impl QPoly {
    pub fn constant(nvars: usize, c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(vec![0; nvars], c);
        }
        QPoly { nvars, terms }
    }

    pub fn one(nvars: usize) -> Self {
        QPoly::constant(nvars, BigRational::one())
    }

    pub fn from_affine(a: &AffineQ) -> Self {
        let n = a.coeffs.len();
        let mut out = QPoly::constant(n, a.constant.clone());
        for (j, c) in a.coeffs.iter().enumerate() {
            if !c.is_zero() {
                let mut e = vec![0; n];
                e[j] = 1;
                out.terms.insert(e, c.clone());
            }
        }
        out
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn constant_value(&self) -> Option<BigRational> {
        if self.terms.keys().any(|e| e.iter().any(|&x| x > 0)) {
            return None;
        }
        Some(
            self.terms
                .values()
                .next()
                .cloned()
                .unwrap_or_else(BigRational::zero),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            add_term(&mut out.terms, e.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        if k.is_zero() {
            return QPoly::constant(self.nvars, BigRational::zero());
        }
        QPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * k)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut terms = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                add_term(&mut terms, e, c1 * c2);
            }
        }
        QPoly {
            nvars: self.nvars,
            terms,
        }
    }

    /// Coefficients of `x_j^0, x_j^1, …` as polynomials free of `x_j`.
    pub fn coefficients_in(&self, j: usize) -> Vec<QPoly> {
        let deg = self.terms.keys().map(|e| e[j]).max().unwrap_or(0) as usize;
        let mut out = vec![QPoly::constant(self.nvars, BigRational::zero()); deg + 1];
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            let p = e2[j] as usize;
            e2[j] = 0;
            add_term(&mut out[p].terms, e2, c.clone());
        }
        out
    }

    /// Replaces `x_j` by the affine `value`.
    pub fn substitute(&self, j: usize, value: &AffineQ) -> Self {
        let coeffs = self.coefficients_in(j);
        let v = QPoly::from_affine(value);
        let mut out = QPoly::constant(self.nvars, BigRational::zero());
        let mut power = QPoly::one(self.nvars);
        for (p, c) in coeffs.iter().enumerate() {
            if p > 0 {
                power = power.mul(&v);
            }
            if !c.is_zero() {
                out = out.add(&c.mul(&power));
            }
        }
        out
    }

    /// `g(value)` for a univariate `g` given by its coefficients.
    pub fn compose_univariate(g: &[BigRational], value: &AffineQ) -> Self {
        let v = QPoly::from_affine(value);
        let n = value.coeffs.len();
        let mut out = QPoly::constant(n, BigRational::zero());
        for c in g.iter().rev() {
            out = out.mul(&v).add(&QPoly::constant(n, c.clone()));
        }
        out
    }
}

fn add_term<K: Ord>(terms: &mut BTreeMap<K, BigRational>, e: K, c: BigRational) {
    if c.is_zero() {
        return;
    }
    match terms.entry(e) {
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

/// `F_p(n) = Σ_{k=1}^{n} k^p` as a polynomial in `n`, coefficients from
/// degree 0 upward.
pub(crate) fn power_sum_polynomial(p: u32) -> Vec<BigRational> {
    // (n+1)^{p+1} - 1 = Σ_{k=0}^{p} C(p+1, k) F_k(n)
    let mut table: Vec<Vec<BigRational>> = Vec::new();
    for k in 0..=p {
        let mut poly = vec![BigRational::zero(); k as usize + 2];
        for (i, c) in binomial_row(k + 1).into_iter().enumerate() {
            poly[i] += BigRational::from_integer(c);
        }
        poly[0] -= BigRational::one();
        let row = binomial_row(k + 1);
        for (i, prev) in table.iter().enumerate() {
            let c = BigRational::from_integer(row[i].clone());
            for (d, x) in prev.iter().enumerate() {
                poly[d] -= &c * x;
            }
        }
        let div = q(i64::from(k) + 1);
        table.push(poly.into_iter().map(|x| x / &div).collect());
    }
    table.pop().unwrap()
}

pub(crate) fn binomial_row(n: u32) -> Vec<BigInt> {
    let mut row = vec![BigInt::one()];
    for k in 0..n {
        let next = &row[k as usize] * BigInt::from(n - k) / BigInt::from(k + 1);
        row.push(next);
    }
    row
}

/// Numerators `E_t(Y)` with `Σ_{u≥0} u^t Y^u = E_t(Y) / (1 - Y)^{t+1}`.
pub(crate) fn eulerian_numerator(t: u32) -> Vec<BigInt> {
    // E_{t+1} = Y (E_t' (1 - Y) + (t + 1) E_t)
    let mut e = vec![BigInt::one()];
    for s in 0..t {
        let mut next = vec![BigInt::zero(); e.len() + 1];
        for (i, c) in e.iter().enumerate() {
            // derivative term: i c Y^{i-1} (1 - Y) then times Y
            if i > 0 {
                let ic = c * BigInt::from(i);
                next[i] += &ic;
                next[i + 1] -= &ic;
            }
            next[i + 1] += c * BigInt::from(s + 1);
        }
        while next.len() > 1 && next.last().is_some_and(Zero::is_zero) {
            next.pop();
        }
        e = next;
    }
    e
}

pub(crate) type LPoly = BTreeMap<Vec<i64>, BigRational>;

pub(crate) fn lp_add_term(p: &mut LPoly, e: Vec<i64>, c: BigRational) {
    add_term(p, e, c);
}

pub(crate) fn lp_mul(a: &LPoly, b: &LPoly) -> LPoly {
    let mut out = LPoly::new();
    for (e1, c1) in a {
        for (e2, c2) in b {
            let e = e1.iter().zip(e2).map(|(x, y)| x + y).collect();
            add_term(&mut out, e, c1 * c2);
        }
    }
    out
}

pub(crate) fn lp_atom(c: &[i64]) -> LPoly {
    let mut out = LPoly::new();
    lp_add_term(&mut out, vec![0; c.len()], BigRational::one());
    lp_add_term(&mut out, c.to_vec(), -BigRational::one());
    out
}

fn dot(a: &[i64], b: &[i64]) -> i128 {
    a.iter()
        .zip(b)
        .map(|(x, y)| i128::from(*x) * i128::from(*y))
        .sum()
}

/// `p / (1 - X^c)` when the division is exact.
pub(crate) fn lp_div_atom(p: &LPoly, c: &[i64]) -> Option<LPoly> {
    if p.is_empty() {
        return Some(LPoly::new());
    }
    let step = dot(c, c);
    let max_key = p.keys().map(|e| dot(e, c)).max().unwrap();
    let mut work: BTreeMap<(i128, Vec<i64>), BigRational> = p
        .iter()
        .map(|(e, v)| ((dot(e, c), e.clone()), v.clone()))
        .collect();
    let mut quot = LPoly::new();
    while let Some(((key, e), v)) = work.pop_first() {
        if key + step > max_key {
            return None;
        }
        let shifted: Vec<i64> = e.iter().zip(c).map(|(x, y)| x + y).collect();
        add_term(&mut work, (key + step, shifted), v.clone());
        quot.insert(e, v);
    }
    Some(quot)
}

/// Rational function `num / ∏ (1 - X^c)^k` with Laurent numerator over `Q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct LaurentRational {
    pub num: LPoly,
    pub den: BTreeMap<Vec<i64>, u32>,
}

impl LaurentRational {
    pub fn one(s: usize) -> Self {
        let mut num = LPoly::new();
        num.insert(vec![0; s], BigRational::one());
        LaurentRational {
            num,
            den: BTreeMap::new(),
        }
    }

    pub fn zero() -> Self {
        LaurentRational {
            num: LPoly::new(),
            den: BTreeMap::new(),
        }
    }

    pub fn mul_poly(&self, p: &LPoly) -> Self {
        LaurentRational {
            num: lp_mul(&self.num, p),
            den: self.den.clone(),
        }
    }

    pub fn with_atom(&self, c: Vec<i64>, k: u32) -> Self {
        let mut out = self.clone();
        if k > 0 {
            *out.den.entry(c).or_insert(0) += k;
        }
        out
    }

    /// Rewrites atoms with all exponents `≤ 0` as `-X^{-c} / (1 - X^{-c})`.
    pub fn orient_atoms(&self) -> Self {
        let mut out = LaurentRational {
            num: self.num.clone(),
            den: BTreeMap::new(),
        };
        for (c, &k) in &self.den {
            if c.iter().all(|&x| x <= 0) {
                let neg: Vec<i64> = c.iter().map(|x| -x).collect();
                let mut m = LPoly::new();
                lp_add_term(&mut m, neg.clone(), -BigRational::one());
                for _ in 0..k {
                    out.num = lp_mul(&out.num, &m);
                }
                *out.den.entry(neg).or_insert(0) += k;
            } else {
                *out.den.entry(c.clone()).or_insert(0) += k;
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.num.is_empty() {
            return other.clone();
        }
        if other.num.is_empty() {
            return self.clone();
        }
        let mut lcd = self.den.clone();
        for (c, &k) in &other.den {
            let e = lcd.entry(c.clone()).or_insert(0);
            *e = (*e).max(k);
        }
        let lift = |f: &Self| -> LPoly {
            let mut num = f.num.clone();
            for (c, &k) in &lcd {
                let have = f.den.get(c).copied().unwrap_or(0);
                for _ in have..k {
                    num = lp_mul(&num, &lp_atom(c));
                }
            }
            num
        };
        let mut num = lift(self);
        for (e, c) in lift(other) {
            lp_add_term(&mut num, e, c);
        }
        LaurentRational { num, den: lcd }
    }

    /// Cancels atoms dividing the numerator exactly.
    pub fn cancel(&mut self) {
        if self.num.is_empty() {
            self.den.clear();
            return;
        }
        let atoms: Vec<Vec<i64>> = self.den.keys().cloned().collect();
        for c in atoms {
            while self.den.get(&c).copied().unwrap_or(0) > 0 {
                match lp_div_atom(&self.num, &c) {
                    Some(qt) => {
                        self.num = qt;
                        let k = self.den.get_mut(&c).unwrap();
                        *k -= 1;
                        if *k == 0 {
                            self.den.remove(&c);
                        }
                    }
                    None => break,
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_sums() {
        // 1 + 2 + … + n = n/2 + n^2/2
        assert_eq!(
            power_sum_polynomial(1),
            vec![
                q(0),
                BigRational::new(1.into(), 2.into()),
                BigRational::new(1.into(), 2.into())
            ]
        );
        let f2 = power_sum_polynomial(2);
        let at = |n: i64| {
            f2.iter()
                .enumerate()
                .fold(q(0), |acc, (d, c)| acc + c * q(n.pow(d as u32)))
        };
        assert_eq!(at(4), q(30));
        assert_eq!(at(0), q(0));
    }

    #[test]
    fn eulerian() {
        assert_eq!(eulerian_numerator(0), vec![BigInt::from(1)]);
        assert_eq!(
            eulerian_numerator(1),
            vec![BigInt::from(0), BigInt::from(1)]
        );
        // Σ u^2 Y^u = Y(1+Y)/(1-Y)^3
        assert_eq!(
            eulerian_numerator(2),
            vec![BigInt::from(0), BigInt::from(1), BigInt::from(1)]
        );
    }

    #[test]
    fn atom_division() {
        let mut p = LPoly::new();
        lp_add_term(&mut p, vec![0, 0], q(1));
        lp_add_term(&mut p, vec![2, -2], q(-1));
        // 1 - X1^2 X2^-2 = (1 - X1 X2^-1)(1 + X1 X2^-1)
        let qt = lp_div_atom(&p, &[1, -1]).unwrap();
        assert_eq!(qt.len(), 2);
        assert!(lp_div_atom(&p, &[1, 0]).is_none());
    }

    #[test]
    fn polynomial_substitution() {
        let x = QPoly::from_affine(&AffineQ::from_linear(&LinearForm::var(0), 2));
        let sq = x.mul(&x);
        let v = AffineQ::from_linear(&LinearForm::new(vec![0, 1], 1), 2);
        let s = sq.substitute(0, &v);
        // (l2 + 1)^2
        assert_eq!(s.coefficients_in(1).len(), 3);
        assert_eq!(s.coefficients_in(1)[0].constant_value(), Some(q(1)));
    }
}
