use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::registry::{ClassSymbol, RegistryId};
use super::{Norm, RingError};

/// Product of class symbols with positive exponents, sorted by symbol.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<(ClassSymbol, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn single(symbol: ClassSymbol) -> Self {
        Monomial(vec![(symbol, 1)])
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> &[(ClassSymbol, u32)] {
        &self.0
    }

    /// Sum of symbol dimensions with multiplicity.
    pub fn dim(&self) -> i64 {
        self.0
            .iter()
            .map(|(s, e)| i64::from(s.finite_dim().unwrap_or(0)) * i64::from(*e))
            .sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].0.cmp(&other.0[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(self.0[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(other.0[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((self.0[i].0.clone(), self.0[i].1 + other.0[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    pub(crate) fn names(&self) -> Vec<(&str, u32)> {
        self.0.iter().map(|(s, e)| (s.name(), *e)).collect()
    }

    fn registry(&self) -> Option<RegistryId> {
        self.0.first().map(|(s, _)| s.registry())
    }
}

/// Key of one term: symbol monomial and power of `L`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TermKey {
    pub monomial: Monomial,
    pub l_exp: i64,
}

impl TermKey {
    /// Virtual degree: symbol dimensions plus the `L`-exponent.
    pub fn degree(&self) -> i64 {
        self.monomial.dim() + self.l_exp
    }
}

/// An element of `K_0(Var)[L^-1]`: a finite integer combination of symbol
/// monomials times powers of `L`.
///
/// Invariants:
/// - no stored coefficient is zero;
/// - the empty map is `0`;
/// - `registry` is `Some` as soon as a symbol occurs (constants are
///   registry-agnostic).
#[derive(Clone, Debug, Default)]
pub struct MotivicElement {
    registry: Option<RegistryId>,
    terms: BTreeMap<TermKey, BigInt>,
}

impl PartialEq for MotivicElement {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl Eq for MotivicElement {}

pub(crate) fn join_registry(
    a: Option<RegistryId>,
    b: Option<RegistryId>,
) -> Result<Option<RegistryId>, RingError> {
    match (a, b) {
        (Some(x), Some(y)) if x != y => Err(RingError::RegistryMismatch),
        (Some(x), _) => Ok(Some(x)),
        (None, y) => Ok(y),
    }
}

impl MotivicElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Self::monomial_term(Monomial::one(), 0, n.into())
    }

    /// `L^e`.
    pub fn l_pow(e: i64) -> Self {
        Self::monomial_term(Monomial::one(), e, BigInt::one())
    }

    /// `L - 1`.
    pub fn l_minus_one() -> Self {
        let mut out = Self::l_pow(1);
        out.add_term(
            TermKey {
                monomial: Monomial::one(),
                l_exp: 0,
            },
            -BigInt::one(),
        );
        out
    }

    /// `(L - 1)^k` for `k ≥ 0`.
    pub fn l_minus_one_pow(k: u32) -> Self {
        let base = Self::l_minus_one();
        let mut out = Self::one();
        for _ in 0..k {
            out = out.mul_unchecked(&base);
        }
        out
    }

    /// `L^i - 1`.
    pub fn l_pow_minus_one(i: u32) -> Self {
        let mut out = Self::l_pow(i64::from(i));
        out.add_term(
            TermKey {
                monomial: Monomial::one(),
                l_exp: 0,
            },
            -BigInt::one(),
        );
        out
    }

    /// The class `[S]`; the empty class gives `0`.
    pub fn symbol(s: &ClassSymbol) -> Self {
        if s.is_empty_class() {
            return Self::zero();
        }
        Self::monomial_term(Monomial::single(s.clone()), 0, BigInt::one())
    }

    pub fn monomial_term(monomial: Monomial, l_exp: i64, coeff: BigInt) -> Self {
        let registry = monomial.registry();
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(TermKey { monomial, l_exp }, coeff);
        }
        MotivicElement { registry, terms }
    }

    pub fn registry(&self) -> Option<RegistryId> {
        self.registry
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .all(|(k, c)| k.monomial.is_one() && k.l_exp == 0 && c.is_one())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TermKey, &BigInt)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// True when no class symbol occurs, i.e. the element is an integer
    /// Laurent polynomial in `L`.
    pub fn is_symbol_free(&self) -> bool {
        self.terms.keys().all(|k| k.monomial.is_one())
    }

    fn add_term(&mut self, key: TermKey, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        if self.registry.is_none() {
            self.registry = key.monomial.registry();
        }
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, RingError> {
        let registry = join_registry(self.registry, other.registry)?;
        let mut out = self.clone();
        out.registry = registry;
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, RingError> {
        self.checked_add(&other.neg_ref())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, RingError> {
        let registry = join_registry(self.registry, other.registry)?;
        let mut out = MotivicElement {
            registry,
            terms: BTreeMap::new(),
        };
        for (ka, ca) in &self.terms {
            for (kb, cb) in &other.terms {
                let key = TermKey {
                    monomial: ka.monomial.mul(&kb.monomial),
                    l_exp: ka.l_exp + kb.l_exp,
                };
                out.add_term(key, ca * cb);
            }
        }
        Ok(out)
    }

    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        self.checked_mul(other).expect("registry mismatch")
    }

    fn neg_ref(&self) -> Self {
        MotivicElement {
            registry: self.registry,
            terms: self.terms.iter().map(|(k, c)| (k.clone(), -c)).collect(),
        }
    }

    /// Multiplies by `L^e`.
    pub fn shift_l(&self, e: i64) -> Self {
        MotivicElement {
            registry: self.registry,
            terms: self
                .terms
                .iter()
                .map(|(k, c)| {
                    (
                        TermKey {
                            monomial: k.monomial.clone(),
                            l_exp: k.l_exp + e,
                        },
                        c.clone(),
                    )
                })
                .collect(),
        }
    }

    pub fn scale(&self, n: &BigInt) -> Self {
        if n.is_zero() {
            return Self::zero();
        }
        MotivicElement {
            registry: self.registry,
            terms: self.terms.iter().map(|(k, c)| (k.clone(), c * n)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one();
        out.registry = self.registry;
        for _ in 0..k {
            out = out.mul_unchecked(self);
        }
        out
    }

    /// Largest term degree; `None` stands for `-∞` (the zero element).
    pub fn virtual_dim(&self) -> Option<i64> {
        self.terms.keys().map(TermKey::degree).max()
    }

    /// `2^virtual_dim`, or `0` for the zero element.
    pub fn norm(&self) -> Norm {
        Norm::from_virtual_dim(self.virtual_dim())
    }

    /// Terms grouped by symbol monomial; each group is an integer Laurent
    /// polynomial in `L` given as exponent → coefficient.
    pub fn l_groups(&self) -> BTreeMap<Monomial, BTreeMap<i64, BigInt>> {
        let mut groups: BTreeMap<Monomial, BTreeMap<i64, BigInt>> = BTreeMap::new();
        for (k, c) in &self.terms {
            groups
                .entry(k.monomial.clone())
                .or_default()
                .insert(k.l_exp, c.clone());
        }
        groups
    }

    pub(crate) fn from_l_groups(
        registry: Option<RegistryId>,
        groups: BTreeMap<Monomial, BTreeMap<i64, BigInt>>,
    ) -> Self {
        let mut out = MotivicElement {
            registry,
            terms: BTreeMap::new(),
        };
        for (mono, poly) in groups {
            for (e, c) in poly {
                out.add_term(
                    TermKey {
                        monomial: mono.clone(),
                        l_exp: e,
                    },
                    c,
                );
            }
        }
        out
    }

    /// Exact quotient by `L^i - 1`, or `None` when it does not divide.
    pub fn div_exact_l_pow_minus_one(&self, i: u32) -> Option<Self> {
        let mut groups = BTreeMap::new();
        for (mono, poly) in self.l_groups() {
            groups.insert(mono, divide_laurent_by_l_pow_minus_one(&poly, i)?);
        }
        Some(Self::from_l_groups(self.registry, groups))
    }

    /// Evaluates with `L ↦ q` and `[S] ↦ count(S)`.
    pub fn specialize_counts(
        &self,
        q: &BigRational,
        counts: &BTreeMap<String, BigRational>,
    ) -> Result<BigRational, RingError> {
        let mut total = BigRational::zero();
        for (k, c) in &self.terms {
            let mut value = BigRational::from_integer(c.clone());
            value *= rational_pow(q, k.l_exp)?;
            for (s, e) in k.monomial.factors() {
                let count = counts
                    .get(s.name())
                    .ok_or_else(|| RingError::MissingCount(s.name().to_string()))?;
                value *= rational_pow(count, i64::from(*e))?;
            }
            total += value;
        }
        Ok(total)
    }

    /// Symbols occurring in the element.
    pub fn symbols(&self) -> Vec<ClassSymbol> {
        let mut out: Vec<ClassSymbol> = self
            .terms
            .keys()
            .flat_map(|k| k.monomial.factors().iter().map(|(s, _)| s.clone()))
            .collect();
        out.sort();
        out.dedup();
        out
    }
}

pub(crate) fn rational_pow(base: &BigRational, e: i64) -> Result<BigRational, RingError> {
    if e < 0 && base.is_zero() {
        return Err(RingError::DivisionByZero);
    }
    let mut acc = BigRational::one();
    let b = if e < 0 { base.recip() } else { base.clone() };
    for _ in 0..e.unsigned_abs() {
        acc *= &b;
    }
    Ok(acc)
}

/// Divides a Laurent polynomial (exponent → coefficient) by `L^i - 1`.
pub(crate) fn divide_laurent_by_l_pow_minus_one(
    poly: &BTreeMap<i64, BigInt>,
    i: u32,
) -> Option<BTreeMap<i64, BigInt>> {
    let i = i64::from(i);
    let mut rem = poly.clone();
    let mut quot = BTreeMap::new();
    let min = *rem.keys().next()?;
    while let Some((&top, c)) = rem.iter().next_back() {
        if top - i < min {
            return None;
        }
        let c = c.clone();
        rem.remove(&top);
        // c·L^top = c·L^{top-i}·(L^i - 1) + c·L^{top-i}
        let low = rem.entry(top - i).or_insert_with(BigInt::zero);
        *low += &c;
        if low.is_zero() {
            rem.remove(&(top - i));
        }
        quot.insert(top - i, c);
    }
    Some(quot)
}

impl Add for &MotivicElement {
    type Output = MotivicElement;
    /// # Panics
    /// When the operands come from different registries; use
    /// [`MotivicElement::checked_add`] to get an error instead.
    fn add(self, rhs: &MotivicElement) -> MotivicElement {
        self.checked_add(rhs).expect("registry mismatch")
    }
}

impl Sub for &MotivicElement {
    type Output = MotivicElement;
    fn sub(self, rhs: &MotivicElement) -> MotivicElement {
        self.checked_sub(rhs).expect("registry mismatch")
    }
}

impl Mul for &MotivicElement {
    type Output = MotivicElement;
    fn mul(self, rhs: &MotivicElement) -> MotivicElement {
        self.checked_mul(rhs).expect("registry mismatch")
    }
}

impl Neg for &MotivicElement {
    type Output = MotivicElement;
    fn neg(self) -> MotivicElement {
        self.neg_ref()
    }
}

impl Add for MotivicElement {
    type Output = MotivicElement;
    fn add(self, rhs: MotivicElement) -> MotivicElement {
        &self + &rhs
    }
}

impl Sub for MotivicElement {
    type Output = MotivicElement;
    fn sub(self, rhs: MotivicElement) -> MotivicElement {
        &self - &rhs
    }
}

impl Mul for MotivicElement {
    type Output = MotivicElement;
    fn mul(self, rhs: MotivicElement) -> MotivicElement {
        &self * &rhs
    }
}

impl Neg for MotivicElement {
    type Output = MotivicElement;
    fn neg(self) -> MotivicElement {
        self.neg_ref()
    }
}

impl From<i64> for MotivicElement {
    fn from(n: i64) -> Self {
        MotivicElement::from_int(n)
    }
}
