use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::element::{join_registry, rational_pow, MotivicElement};
use super::registry::RegistryId;
use super::{Norm, RingError};

/// A fraction `num / ∏ (L^i - 1)^{k_i}` with `i ≥ 1`.
///
/// The denominator is a multiset of atoms stored as `i → k_i`. After every
/// operation an atom that divides the numerator exactly is cancelled, so
/// `den` is empty whenever the value is visibly in the unlocalized ring.
/// Equality is decided by cross-multiplication, so two different
/// presentations of the same fraction compare equal.
#[derive(Clone, Debug, Default)]
pub struct LocalizedMotivicElement {
    num: MotivicElement,
    den: BTreeMap<u32, u32>,
}

impl LocalizedMotivicElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        MotivicElement::one().into()
    }

    pub fn l_pow(e: i64) -> Self {
        MotivicElement::l_pow(e).into()
    }

    /// `(L - 1)^k` for any integer `k`.
    pub fn l_minus_one_pow(k: i64) -> Self {
        if k >= 0 {
            MotivicElement::l_minus_one_pow(k as u32).into()
        } else {
            Self::from_parts(MotivicElement::one(), [(1, k.unsigned_abs() as u32)])
                .expect("positive atom")
        }
    }

    /// `1 / (L^i - 1)`.
    pub fn inverse_l_pow_minus_one(i: u32) -> Result<Self, RingError> {
        Self::from_parts(MotivicElement::one(), [(i, 1)])
    }

    /// Builds `num / ∏ (L^i - 1)^k` and reduces it.
    pub fn from_parts(
        num: MotivicElement,
        den: impl IntoIterator<Item = (u32, u32)>,
    ) -> Result<Self, RingError> {
        let mut map = BTreeMap::new();
        for (i, k) in den {
            if i == 0 {
                return Err(RingError::InvalidDenominatorAtom);
            }
            if k > 0 {
                *map.entry(i).or_insert(0) += k;
            }
        }
        let mut out = LocalizedMotivicElement { num, den: map };
        out.reduce();
        Ok(out)
    }

    pub fn num(&self) -> &MotivicElement {
        &self.num
    }

    /// Denominator atoms `i → multiplicity`, each standing for `(L^i - 1)`.
    pub fn den(&self) -> &BTreeMap<u32, u32> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_empty() && self.num.is_one()
    }

    /// The value as an unlocalized element, when the denominator is empty.
    pub fn as_motivic(&self) -> Option<&MotivicElement> {
        self.den.is_empty().then_some(&self.num)
    }

    pub fn registry(&self) -> Option<RegistryId> {
        self.num.registry()
    }

    /// Cancels every denominator atom that divides the numerator exactly.
    pub fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den.clear();
            return;
        }
        let atoms: Vec<u32> = self.den.keys().copied().collect();
        for i in atoms {
            while let Some(k) = self.den.get(&i).copied() {
                match self.num.div_exact_l_pow_minus_one(i) {
                    Some(q) => {
                        self.num = q;
                        if k == 1 {
                            self.den.remove(&i);
                        } else {
                            self.den.insert(i, k - 1);
                        }
                    }
                    None => break,
                }
            }
        }
    }

    /// Product of the denominator atoms as an element.
    pub fn den_product(&self) -> MotivicElement {
        den_product(&self.den)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, RingError> {
        join_registry(self.registry(), other.registry())?;
        if self.den == other.den {
            let mut out = LocalizedMotivicElement {
                num: self.num.checked_add(&other.num)?,
                den: self.den.clone(),
            };
            out.reduce();
            return Ok(out);
        }
        let mut lcd = self.den.clone();
        for (&i, &k) in &other.den {
            let e = lcd.entry(i).or_insert(0);
            *e = (*e).max(k);
        }
        let a = self
            .num
            .checked_mul(&den_product(&missing(&lcd, &self.den)))?;
        let b = other
            .num
            .checked_mul(&den_product(&missing(&lcd, &other.den)))?;
        let mut out = LocalizedMotivicElement {
            num: a.checked_add(&b)?,
            den: lcd,
        };
        out.reduce();
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, RingError> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, RingError> {
        let num = self.num.checked_mul(&other.num)?;
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let mut den = self.den.clone();
        for (&i, &k) in &other.den {
            *den.entry(i).or_insert(0) += k;
        }
        let mut out = LocalizedMotivicElement { num, den };
        if !out.den.is_empty() {
            out.reduce();
        }
        Ok(out)
    }

    /// Multiplies by `L^e`; the denominator is unchanged.
    pub fn shift_l(&self, e: i64) -> Self {
        LocalizedMotivicElement {
            num: self.num.shift_l(e),
            den: self.den.clone(),
        }
    }

    pub fn scale(&self, n: &BigInt) -> Self {
        if n.is_zero() {
            return Self::zero();
        }
        LocalizedMotivicElement {
            num: self.num.scale(n),
            den: self.den.clone(),
        }
    }

    /// Cross-multiplication equality.
    pub fn equals(&self, other: &Self) -> bool {
        if self.den == other.den {
            return self.num == other.num;
        }
        let lhs = self.num.mul_unchecked(&other.den_product());
        let rhs = other.num.mul_unchecked(&self.den_product());
        lhs == rhs
    }

    /// Upper bound for the norm in the completion: `‖num‖ · 2^{-Σ i·k_i}`.
    ///
    /// Each `(L^i - 1)^{-1}` expands as `L^{-i}(1 + L^{-i} + …)` and has norm
    /// exactly `2^{-i}`.
    pub fn norm_bound(&self) -> Norm {
        let shift: i64 = self
            .den
            .iter()
            .map(|(&i, &k)| i64::from(i) * i64::from(k))
            .sum();
        match self.num.virtual_dim() {
            None => Norm::zero(),
            Some(v) => Norm::from_virtual_dim(Some(v - shift)),
        }
    }

    /// Evaluates with `L ↦ q` and `[S] ↦ counts[S]`.
    pub fn specialize_counts(
        &self,
        q: &BigRational,
        counts: &BTreeMap<String, BigRational>,
    ) -> Result<BigRational, RingError> {
        let num = self.num.specialize_counts(q, counts)?;
        let mut den = BigRational::from_integer(1.into());
        for (&i, &k) in &self.den {
            let atom = rational_pow(q, i64::from(i))? - BigRational::from_integer(1.into());
            if atom.is_zero() {
                return Err(RingError::DivisionByZero);
            }
            for _ in 0..k {
                den *= &atom;
            }
        }
        Ok(num / den)
    }
}

fn missing(lcd: &BTreeMap<u32, u32>, own: &BTreeMap<u32, u32>) -> BTreeMap<u32, u32> {
    lcd.iter()
        .filter_map(|(&i, &k)| {
            let have = own.get(&i).copied().unwrap_or(0);
            (k > have).then_some((i, k - have))
        })
        .collect()
}

pub(crate) fn den_product(den: &BTreeMap<u32, u32>) -> MotivicElement {
    let mut out = MotivicElement::one();
    for (&i, &k) in den {
        let atom = MotivicElement::l_pow_minus_one(i);
        for _ in 0..k {
            out = out.mul_unchecked(&atom);
        }
    }
    out
}

impl From<MotivicElement> for LocalizedMotivicElement {
    fn from(num: MotivicElement) -> Self {
        LocalizedMotivicElement {
            num,
            den: BTreeMap::new(),
        }
    }
}

impl PartialEq for LocalizedMotivicElement {
    fn eq(&self, other: &Self) -> bool {
        self.equals(other)
    }
}

impl Eq for LocalizedMotivicElement {}

impl Add for &LocalizedMotivicElement {
    type Output = LocalizedMotivicElement;
    /// # Panics
    /// On registry mismatch; see [`LocalizedMotivicElement::checked_add`].
    fn add(self, rhs: &LocalizedMotivicElement) -> LocalizedMotivicElement {
        self.checked_add(rhs).expect("registry mismatch")
    }
}

impl Sub for &LocalizedMotivicElement {
    type Output = LocalizedMotivicElement;
    fn sub(self, rhs: &LocalizedMotivicElement) -> LocalizedMotivicElement {
        self.checked_sub(rhs).expect("registry mismatch")
    }
}

impl Mul for &LocalizedMotivicElement {
    type Output = LocalizedMotivicElement;
    fn mul(self, rhs: &LocalizedMotivicElement) -> LocalizedMotivicElement {
        self.checked_mul(rhs).expect("registry mismatch")
    }
}

impl Neg for &LocalizedMotivicElement {
    type Output = LocalizedMotivicElement;
    fn neg(self) -> LocalizedMotivicElement {
        LocalizedMotivicElement {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Add for LocalizedMotivicElement {
    type Output = LocalizedMotivicElement;
    fn add(self, rhs: LocalizedMotivicElement) -> LocalizedMotivicElement {
        &self + &rhs
    }
}

impl Sub for LocalizedMotivicElement {
    type Output = LocalizedMotivicElement;
    fn sub(self, rhs: LocalizedMotivicElement) -> LocalizedMotivicElement {
        &self - &rhs
    }
}

impl Mul for LocalizedMotivicElement {
    type Output = LocalizedMotivicElement;
    fn mul(self, rhs: LocalizedMotivicElement) -> LocalizedMotivicElement {
        &self * &rhs
    }
}

impl Neg for LocalizedMotivicElement {
    type Output = LocalizedMotivicElement;
    fn neg(self) -> LocalizedMotivicElement {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn reduces_on_construction() {
        let x = LocalizedMotivicElement::from_parts(MotivicElement::l_pow_minus_one(2), [(1, 1)])
            .unwrap();
        assert!(x.den().is_empty());
        assert_eq!(
            x.num(),
            &(&MotivicElement::l_pow(1) + &MotivicElement::one())
        );
    }

    #[test]
    fn specialize_fraction() {
        let x =
            LocalizedMotivicElement::from_parts(MotivicElement::l_minus_one(), [(2, 1)]).unwrap();
        assert_eq!(x.den().get(&2), Some(&1));
        let v = x.specialize_counts(&q(2, 1), &BTreeMap::new()).unwrap();
        assert_eq!(v, q(1, 3));
    }

    #[test]
    fn cross_multiplication_equality() {
        // (L+1)/(L^2-1) == 1/(L-1), even though neither side reduces further
        let a = LocalizedMotivicElement::from_parts(
            &MotivicElement::l_pow(1) + &MotivicElement::one(),
            [(2, 1)],
        )
        .unwrap();
        let b = LocalizedMotivicElement::inverse_l_pow_minus_one(1).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, LocalizedMotivicElement::one());
    }

    #[test]
    fn sum_with_common_denominator() {
        let a = LocalizedMotivicElement::inverse_l_pow_minus_one(1).unwrap();
        let l = LocalizedMotivicElement::l_pow(1);
        // L/(L-1) - 1/(L-1) = 1
        let s = &(&l * &a) - &a;
        assert!(s.is_one());
    }

    #[test]
    fn negative_powers_of_l_minus_one() {
        let a = LocalizedMotivicElement::l_minus_one_pow(-2);
        let b = LocalizedMotivicElement::l_minus_one_pow(2);
        assert!((&a * &b).is_one());
    }

    #[test]
    fn norm_bound_of_inverse() {
        let a = LocalizedMotivicElement::inverse_l_pow_minus_one(3).unwrap();
        assert_eq!(a.norm_bound().exponent(), Some(-3));
    }

    #[test]
    fn division_by_zero_detected() {
        let a = LocalizedMotivicElement::inverse_l_pow_minus_one(2).unwrap();
        assert!(matches!(
            a.specialize_counts(&q(1, 1), &BTreeMap::new()),
            Err(RingError::DivisionByZero)
        ));
        assert!(matches!(
            a.specialize_counts(&q(-1, 1), &BTreeMap::new()),
            Err(RingError::DivisionByZero)
        ));
    }
}
