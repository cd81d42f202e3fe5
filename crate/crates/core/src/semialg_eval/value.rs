use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::SemialgError;

/// Integer or `+∞`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ExtInt {
    Finite(i64),
    Infinity,
}

impl ExtInt {
    /// `(+∞) + ℓ = +∞`.
    #[allow(clippy::should_implement_trait)]
    pub fn add(self, l: i64) -> ExtInt {
        match self {
            ExtInt::Finite(a) => ExtInt::Finite(a + l),
            ExtInt::Infinity => ExtInt::Infinity,
        }
    }

    /// `self ≡ ℓ mod d`, with `+∞ ≡ ℓ mod d` for every `ℓ`.
    pub fn congruent(self, l: i64, d: u64) -> bool {
        match self {
            ExtInt::Finite(a) => (i128::from(a) - i128::from(l)).rem_euclid(i128::from(d)) == 0,
            ExtInt::Infinity => true,
        }
    }
}

impl fmt::Display for ExtInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtInt::Finite(a) => write!(f, "{a}"),
            ExtInt::Infinity => f.write_str("+inf"),
        }
    }
}

/// Valuation of a series known to finite precision.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Order {
    Known(ExtInt),
    /// Every stored coefficient vanishes: the order is some value in
    /// `[at_least, +∞]`.
    Indeterminate {
        at_least: u32,
    },
}

/// Angular component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Angular {
    Known(BigRational),
    Indeterminate,
}

/// Power series over `Q` known modulo `t^trunc`, or exactly when `trunc` is
/// `None`. The exact zero series is the certified zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerSeriesValue {
    coeffs: BTreeMap<u32, BigRational>,
    trunc: Option<u32>,
}

impl PowerSeriesValue {
    /// The series known modulo `t^trunc`; terms of degree `≥ trunc` are
    /// dropped.
    pub fn truncated(
        terms: impl IntoIterator<Item = (u32, BigRational)>,
        trunc: u32,
    ) -> Result<Self, SemialgError> {
        if trunc == 0 {
            return Err(SemialgError::InvalidTrunc);
        }
        let mut out = PowerSeriesValue::exact(terms);
        out.trunc = Some(trunc);
        out.coeffs.retain(|&k, _| k < trunc);
        Ok(out)
    }

    /// A polynomial in `t`, known to all orders.
    pub fn exact(terms: impl IntoIterator<Item = (u32, BigRational)>) -> Self {
        let mut coeffs = BTreeMap::new();
        for (k, c) in terms {
            add_coeff(&mut coeffs, k, c);
        }
        PowerSeriesValue {
            coeffs,
            trunc: None,
        }
    }

    /// The certified zero series.
    pub fn zero() -> Self {
        PowerSeriesValue::exact([])
    }

    pub fn constant(c: BigRational) -> Self {
        PowerSeriesValue::exact([(0, c)])
    }

    /// The uniformizer `t`.
    pub fn t() -> Self {
        PowerSeriesValue::exact([(1, BigRational::one())])
    }

    pub fn coeffs(&self) -> &BTreeMap<u32, BigRational> {
        &self.coeffs
    }

    pub fn trunc(&self) -> Option<u32> {
        self.trunc
    }

    pub fn is_certified_zero(&self) -> bool {
        self.trunc.is_none() && self.coeffs.is_empty()
    }

    /// The same series known only modulo `t^trunc`.
    pub fn retruncate(&self, trunc: u32) -> Result<Self, SemialgError> {
        if self.is_certified_zero() {
            return Ok(self.clone());
        }
        let keep = self.trunc.map_or(trunc, |p| p.min(trunc));
        PowerSeriesValue::truncated(self.coeffs.clone(), keep)
    }

    pub fn ord_t(&self) -> Order {
        match (self.coeffs.keys().next(), self.trunc) {
            (Some(&k), _) => Order::Known(ExtInt::Finite(i64::from(k))),
            (None, None) => Order::Known(ExtInt::Infinity),
            (None, Some(p)) => Order::Indeterminate { at_least: p },
        }
    }

    /// Lowest nonzero coefficient, `0` for the certified zero.
    pub fn ac(&self) -> Angular {
        match (self.coeffs.values().next(), self.trunc) {
            (Some(c), _) => Angular::Known(c.clone()),
            (None, None) => Angular::Known(BigRational::zero()),
            (None, Some(_)) => Angular::Indeterminate,
        }
    }

    /// A lower bound for the order; `None` for `+∞`.
    fn order_lower_bound(&self) -> Option<u32> {
        self.coeffs.keys().next().copied().or(self.trunc)
    }

    pub fn add(&self, other: &Self) -> Self {
        let trunc = match (self.trunc, other.trunc) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        let mut coeffs = self.coeffs.clone();
        for (&k, c) in &other.coeffs {
            add_coeff(&mut coeffs, k, c.clone());
        }
        let mut out = PowerSeriesValue { coeffs, trunc };
        out.drop_unknown();
        out
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        if k.is_zero() {
            return PowerSeriesValue::zero();
        }
        PowerSeriesValue {
            coeffs: self.coeffs.iter().map(|(&d, c)| (d, c * k)).collect(),
            trunc: self.trunc,
        }
    }

    /// Product; the result is known modulo `t^{min(p + ord b, q + ord a)}`
    /// for factors known modulo `t^p` and `t^q`.
    pub fn mul(&self, other: &Self) -> Self {
        let bound = |p: Option<u32>, v: Option<u32>| match (p, v) {
            (Some(p), Some(v)) => Some(p.saturating_add(v)),
            _ => None,
        };
        let trunc = match (
            bound(self.trunc, other.order_lower_bound()),
            bound(other.trunc, self.order_lower_bound()),
        ) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        let mut coeffs = BTreeMap::new();
        for (&i, a) in &self.coeffs {
            for (&j, b) in &other.coeffs {
                let k = i + j;
                if trunc.is_none_or(|p| k < p) {
                    add_coeff(&mut coeffs, k, a * b);
                }
            }
        }
        PowerSeriesValue { coeffs, trunc }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = PowerSeriesValue::constant(BigRational::one());
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    fn drop_unknown(&mut self) {
        if let Some(p) = self.trunc {
            self.coeffs.retain(|&k, _| k < p);
        }
    }
}

fn add_coeff(map: &mut BTreeMap<u32, BigRational>, k: u32, c: BigRational) {
    if c.is_zero() {
        return;
    }
    let slot = map.entry(k).or_insert_with(BigRational::zero);
    *slot += c;
    if slot.is_zero() {
        map.remove(&k);
    }
}

#[cfg(test)]
pub(crate) fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

impl fmt::Display for PowerSeriesValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            f.write_str("0")?;
        }
        for (i, (k, c)) in self.coeffs.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*t")?,
                _ => write!(f, "{c}*t^{k}")?,
            }
        }
        if let Some(p) = self.trunc {
            write!(f, " + O(t^{p})")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(terms: &[(u32, i64)], trunc: u32) -> PowerSeriesValue {
        PowerSeriesValue::truncated(terms.iter().map(|&(k, c)| (k, rational(c, 1))), trunc).unwrap()
    }

    #[test]
    fn order_and_angular_component() {
        assert_eq!(
            series(&[(2, 1), (3, 1)], 10).ord_t(),
            Order::Known(ExtInt::Finite(2))
        );
        assert_eq!(
            series(&[], 10).ord_t(),
            Order::Indeterminate { at_least: 10 }
        );
        assert_eq!(
            series(&[(0, 3)], 10).ord_t(),
            Order::Known(ExtInt::Finite(0))
        );
        assert_eq!(
            series(&[(3, 2), (4, 1)], 10).ac(),
            Angular::Known(rational(2, 1))
        );
        assert_eq!(
            PowerSeriesValue::zero().ac(),
            Angular::Known(rational(0, 1))
        );
        assert_eq!(
            PowerSeriesValue::zero().ord_t(),
            Order::Known(ExtInt::Infinity)
        );
        assert_eq!(series(&[], 4).ac(), Angular::Indeterminate);
    }

    #[test]
    fn products_track_precision() {
        // (t + O(t^4)) (t^2 + O(t^4)) = t^3 + O(t^5)
        let a = series(&[(1, 1)], 4);
        let b = series(&[(2, 1)], 4);
        let p = a.mul(&b);
        assert_eq!(p.trunc(), Some(5));
        assert_eq!(p.ord_t(), Order::Known(ExtInt::Finite(3)));
        // an exact factor shifts precision by its order
        let q = PowerSeriesValue::t().mul(&a);
        assert_eq!(q.trunc(), Some(5));
        assert!(PowerSeriesValue::zero().mul(&a).is_certified_zero());
        // cancellation leaves an indeterminate order
        let c = a.add(&a.scale(&rational(-1, 1)));
        assert_eq!(c.ord_t(), Order::Indeterminate { at_least: 4 });
    }

    #[test]
    fn conventions() {
        assert_eq!(ExtInt::Infinity.add(-7), ExtInt::Infinity);
        for l in -5..5 {
            for d in 1..6 {
                assert!(ExtInt::Infinity.congruent(l, d));
            }
        }
        assert!(ExtInt::Finite(7).congruent(1, 3));
        assert!(!ExtInt::Finite(7).congruent(0, 3));
    }
}
