use std::collections::BTreeMap;
use std::fmt;

use crate::grothendieck_ring::{LocalizedMotivicElement, RingError};

use super::truncated::{graded_cmp, total_degree, TruncatedSeries};
use super::SeriesError;

/// The factor `1 - L^{-a} T^b`, with `b ≠ 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TAtom {
    a: u32,
    b: Vec<u32>,
}

impl TAtom {
    pub fn new(a: u32, b: Vec<u32>) -> Result<Self, SeriesError> {
        if b.iter().all(|&x| x == 0) {
            return Err(SeriesError::ConstantAtom);
        }
        Ok(TAtom { a, b })
    }

    /// `1 - L^{-a} T_i` in `nvars` variables.
    pub fn unit(a: u32, i: usize, nvars: usize) -> Self {
        let mut b = vec![0; nvars];
        b[i] = 1;
        TAtom { a, b }
    }

    pub fn a(&self) -> u32 {
        self.a
    }

    pub fn b(&self) -> &[u32] {
        &self.b
    }

    fn as_poly(&self) -> TPoly {
        let mut p = TPoly::new();
        p.insert(vec![0; self.b.len()], LocalizedMotivicElement::one());
        p.insert(
            self.b.clone(),
            -LocalizedMotivicElement::l_pow(-i64::from(self.a)),
        );
        p
    }
}

impl fmt::Display for TAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(1 - ")?;
        if self.a > 0 {
            write!(f, "L^-{}*", self.a)?;
        }
        write!(f, "{})", t_monomial(&self.b))
    }
}

/// Polynomial in `T` with localized coefficients, keyed by exponent vector.
pub(crate) type TPoly = BTreeMap<Vec<u32>, LocalizedMotivicElement>;

fn poly_add_term(p: &mut TPoly, n: Vec<u32>, c: LocalizedMotivicElement) {
    if c.is_zero() {
        return;
    }
    match p.entry(n) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            let s = o.get() + &c;
            if s.is_zero() {
                o.remove();
            } else {
                *o.get_mut() = s;
            }
        }
    }
}

fn poly_mul(a: &TPoly, b: &TPoly) -> TPoly {
    let mut out = TPoly::new();
    for (na, ca) in a {
        for (nb, cb) in b {
            let n = na.iter().zip(nb).map(|(x, y)| x + y).collect();
            poly_add_term(&mut out, n, ca * cb);
        }
    }
    out
}

fn poly_eq(a: &TPoly, b: &TPoly) -> bool {
    a.len() == b.len() && a.iter().all(|(n, c)| b.get(n).is_some_and(|d| c == d))
}

fn atoms_product(atoms: &BTreeMap<TAtom, u32>, nvars: usize) -> TPoly {
    let mut p = TPoly::new();
    p.insert(vec![0; nvars], LocalizedMotivicElement::one());
    for (atom, &k) in atoms {
        let ap = atom.as_poly();
        for _ in 0..k {
            p = poly_mul(&p, &ap);
        }
    }
    p
}

/// Exact quotient of `p` by `1 - L^{-a} T^b`, if it exists.
///
/// Repeatedly removes the smallest term `r·T^u` (graded order) by adding
/// `r·T^u` to the quotient; the remainder gains `r·L^{-a}·T^{u+b}`.
fn poly_div_atom(p: &TPoly, atom: &TAtom) -> Option<TPoly> {
    let maxdeg = p.keys().map(|n| total_degree(n)).max()?;
    let bdeg = total_degree(&atom.b);
    let shift = -i64::from(atom.a);
    let mut rem: BTreeMap<(u32, std::cmp::Reverse<Vec<u32>>), LocalizedMotivicElement> = p
        .iter()
        .map(|(n, c)| ((total_degree(n), std::cmp::Reverse(n.clone())), c.clone()))
        .collect();
    let mut quot = TPoly::new();
    while let Some((key, r)) = rem.pop_first() {
        let u = key.1 .0;
        if key.0 + bdeg > maxdeg {
            return None;
        }
        let v: Vec<u32> = u.iter().zip(&atom.b).map(|(x, y)| x + y).collect();
        let vkey = (total_degree(&v), std::cmp::Reverse(v));
        let add = r.shift_l(shift);
        match rem.entry(vkey) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(add);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &add;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
        quot.insert(u, r);
    }
    Some(quot)
}

/// One substitution `T_j ↦ L^{-c} T^e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialSubstitution {
    pub c: u32,
    pub e: Vec<u32>,
}

impl MonomialSubstitution {
    pub fn new(c: u32, e: Vec<u32>) -> Self {
        MonomialSubstitution { c, e }
    }
}

/// An element `num / ∏ atoms` of the subring of `M[[T_1..T_r]]` generated by
/// polynomials, the inverses `(1 - L^{-a}T^b)^{-1}` and the coefficient
/// inverses `(L^i - 1)^{-1}`.
///
/// Invariants:
/// - no zero numerator coefficient;
/// - every atom that divides the numerator exactly has been cancelled.
///
/// Equality is cross-multiplication; the presentation is not unique.
#[derive(Clone, Debug)]
pub struct MotivicRationalFunction {
    nvars: usize,
    num: TPoly,
    den: BTreeMap<TAtom, u32>,
}

impl MotivicRationalFunction {
    pub fn zero(nvars: usize) -> Self {
        MotivicRationalFunction {
            nvars,
            num: TPoly::new(),
            den: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: LocalizedMotivicElement) -> Self {
        Self::monomial(nvars, vec![0; nvars], c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, LocalizedMotivicElement::one())
    }

    /// `c·T^n`.
    pub fn monomial(nvars: usize, n: Vec<u32>, c: LocalizedMotivicElement) -> Self {
        assert_eq!(n.len(), nvars, "exponent length");
        let mut num = TPoly::new();
        poly_add_term(&mut num, n, c);
        MotivicRationalFunction {
            nvars,
            num,
            den: BTreeMap::new(),
        }
    }

    /// `num / ∏ atoms`, reduced.
    pub fn from_parts(
        nvars: usize,
        num: impl IntoIterator<Item = (Vec<u32>, LocalizedMotivicElement)>,
        den: impl IntoIterator<Item = TAtom>,
    ) -> Result<Self, SeriesError> {
        let mut p = TPoly::new();
        for (n, c) in num {
            if n.len() != nvars {
                return Err(SeriesError::ExponentLength(n.len(), nvars));
            }
            poly_add_term(&mut p, n, c);
        }
        let mut atoms = BTreeMap::new();
        for atom in den {
            if atom.b.len() != nvars {
                return Err(SeriesError::ExponentLength(atom.b.len(), nvars));
            }
            *atoms.entry(atom).or_insert(0) += 1;
        }
        let mut out = MotivicRationalFunction {
            nvars,
            num: p,
            den: atoms,
        };
        out.reduce();
        Ok(out)
    }

    /// `1 / (1 - L^{-a} T^b)`.
    pub fn inverse_atom(atom: TAtom) -> Self {
        let nvars = atom.b.len();
        let mut den = BTreeMap::new();
        den.insert(atom, 1);
        MotivicRationalFunction {
            nvars,
            num: Self::one(nvars).num,
            den,
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn num(&self) -> &BTreeMap<Vec<u32>, LocalizedMotivicElement> {
        &self.num
    }

    pub fn den(&self) -> &BTreeMap<TAtom, u32> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }

    fn reduce(&mut self) {
        if self.num.is_empty() {
            self.den.clear();
            return;
        }
        let atoms: Vec<TAtom> = self.den.keys().cloned().collect();
        for atom in atoms {
            while let Some(k) = self.den.get(&atom).copied() {
                match poly_div_atom(&self.num, &atom) {
                    Some(q) => {
                        self.num = q;
                        if k == 1 {
                            self.den.remove(&atom);
                        } else {
                            self.den.insert(atom.clone(), k - 1);
                        }
                    }
                    None => break,
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

    /// Sum over the least common denominator.
    pub fn add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check(other)?;
        check_registries(self, other)?;
        let mut lcd = self.den.clone();
        for (atom, &k) in &other.den {
            let e = lcd.entry(atom.clone()).or_insert(0);
            *e = (*e).max(k);
        }
        let fa = atoms_product(&missing(&lcd, &self.den), self.nvars);
        let fb = atoms_product(&missing(&lcd, &other.den), self.nvars);
        let mut num = poly_mul(&self.num, &fa);
        for (n, c) in poly_mul(&other.num, &fb) {
            poly_add_term(&mut num, n, c);
        }
        let mut out = MotivicRationalFunction {
            nvars: self.nvars,
            num,
            den: lcd,
        };
        out.reduce();
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        MotivicRationalFunction {
            nvars: self.nvars,
            num: self.num.iter().map(|(n, c)| (n.clone(), -c)).collect(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check(other)?;
        check_registries(self, other)?;
        let mut den = self.den.clone();
        for (atom, &k) in &other.den {
            *den.entry(atom.clone()).or_insert(0) += k;
        }
        let mut out = MotivicRationalFunction {
            nvars: self.nvars,
            num: poly_mul(&self.num, &other.num),
            den,
        };
        out.reduce();
        Ok(out)
    }

    /// Multiplies every numerator coefficient by `c`.
    pub fn scale(&self, c: &LocalizedMotivicElement) -> Result<Self, SeriesError> {
        let mut num = TPoly::new();
        for (n, x) in &self.num {
            poly_add_term(&mut num, n.clone(), x.checked_mul(c)?);
        }
        let mut out = MotivicRationalFunction {
            nvars: self.nvars,
            num,
            den: self.den.clone(),
        };
        out.reduce();
        Ok(out)
    }

    /// Cross-multiplication equality.
    pub fn equals(&self, other: &Self) -> bool {
        if self.nvars != other.nvars {
            return false;
        }
        if self.den == other.den {
            return poly_eq(&self.num, &other.num);
        }
        let lhs = poly_mul(&self.num, &atoms_product(&other.den, self.nvars));
        let rhs = poly_mul(&other.num, &atoms_product(&self.den, self.nvars));
        poly_eq(&lhs, &rhs)
    }

    /// Power-series expansion up to total degree `bound`.
    pub fn expand(&self, bound: u32) -> TruncatedSeries {
        let mut series = TruncatedSeries::zero(self.nvars, bound);
        for (n, c) in &self.num {
            series.add_term(n.clone(), c);
        }
        for (atom, &k) in &self.den {
            for _ in 0..k {
                series = multiply_by_geometric(&series, atom);
            }
        }
        series
    }

    /// Substitutes `T_j ↦ L^{-c_j} T^{e_j}` (`e_j` in `target_vars` variables).
    ///
    /// Atoms whose new `T`-exponent vanishes become the coefficient
    /// `1 - L^{-a'} = L^{-a'}(L^{a'} - 1)` and are moved to the coefficient
    /// denominators; `a' = 0` would divide by zero and is reported as a
    /// divergent substitution.
    pub fn substitute_monomials(
        &self,
        target_vars: usize,
        subs: &[MonomialSubstitution],
    ) -> Result<Self, SeriesError> {
        if subs.len() != self.nvars {
            return Err(SeriesError::SubstitutionArity(subs.len(), self.nvars));
        }
        if let Some(s) = subs.iter().find(|s| s.e.len() != target_vars) {
            return Err(SeriesError::ExponentLength(s.e.len(), target_vars));
        }
        let image = |n: &[u32]| -> (u64, Vec<u32>) {
            let mut c = 0u64;
            let mut e = vec![0u32; target_vars];
            for (nj, s) in n.iter().zip(subs) {
                c += u64::from(*nj) * u64::from(s.c);
                for (x, y) in e.iter_mut().zip(&s.e) {
                    *x += nj * y;
                }
            }
            (c, e)
        };
        let mut num = TPoly::new();
        for (n, coeff) in &self.num {
            let (c, e) = image(n);
            poly_add_term(&mut num, e, coeff.shift_l(-(c as i64)));
        }
        let mut den = BTreeMap::new();
        let mut coefficient_atoms: Vec<(u32, u32)> = Vec::new();
        for (atom, &k) in &self.den {
            let (c, e) = image(&atom.b);
            let a = u64::from(atom.a) + c;
            let a = u32::try_from(a).map_err(|_| SeriesError::ExponentOverflow)?;
            if e.iter().all(|&x| x == 0) {
                if a == 0 {
                    return Err(SeriesError::DivergentSubstitution(atom.to_string()));
                }
                coefficient_atoms.push((a, k));
            } else {
                *den.entry(TAtom { a, b: e }).or_insert(0) += k;
            }
        }
        if !coefficient_atoms.is_empty() {
            // 1/(1 - L^{-a}) = L^a / (L^a - 1)
            let shift: i64 = coefficient_atoms
                .iter()
                .map(|&(a, k)| i64::from(a) * i64::from(k))
                .sum();
            let factor = LocalizedMotivicElement::from_parts(
                crate::grothendieck_ring::MotivicElement::l_pow(shift),
                coefficient_atoms,
            )?;
            let mut scaled = TPoly::new();
            for (n, c) in num {
                poly_add_term(&mut scaled, n, c.checked_mul(&factor)?);
            }
            num = scaled;
        }
        let mut out = MotivicRationalFunction {
            nvars: target_vars,
            num,
            den,
        };
        out.reduce();
        Ok(out)
    }

    /// The value of a function in zero variables, when it has no `T`-atoms.
    pub fn as_constant(&self) -> Option<LocalizedMotivicElement> {
        if !self.den.is_empty() || self.num.keys().any(|n| n.iter().any(|&x| x != 0)) {
            return None;
        }
        Some(
            self.num
                .get(&vec![0; self.nvars])
                .cloned()
                .unwrap_or_default(),
        )
    }
}

fn check_registries(
    a: &MotivicRationalFunction,
    b: &MotivicRationalFunction,
) -> Result<(), SeriesError> {
    let ra = a.num.values().find_map(|c| c.registry());
    let rb = b.num.values().find_map(|c| c.registry());
    match (ra, rb) {
        (Some(x), Some(y)) if x != y => Err(SeriesError::Ring(RingError::RegistryMismatch)),
        _ => Ok(()),
    }
}

fn missing(lcd: &BTreeMap<TAtom, u32>, own: &BTreeMap<TAtom, u32>) -> BTreeMap<TAtom, u32> {
    lcd.iter()
        .filter_map(|(atom, &k)| {
            let have = own.get(atom).copied().unwrap_or(0);
            (k > have).then(|| (atom.clone(), k - have))
        })
        .collect()
}

fn multiply_by_geometric(series: &TruncatedSeries, atom: &TAtom) -> TruncatedSeries {
    let bound = series.bound();
    let bdeg = total_degree(&atom.b);
    let mut out = TruncatedSeries::zero(series.nvars(), bound);
    for (n, c) in series.coeffs() {
        let mut j = 0u32;
        let mut exp = n.clone();
        let mut coeff = c.clone();
        while total_degree(n) + j * bdeg <= bound {
            out.add_term(exp.clone(), &coeff);
            j += 1;
            for (x, y) in exp.iter_mut().zip(&atom.b) {
                *x += y;
            }
            coeff = coeff.shift_l(-i64::from(atom.a));
        }
    }
    out
}

/// `∏_{i=1}^m L^{-a} T_i / (1 - L^{-a} T_i)`.
pub fn geometric_series_product(a: u32, m: usize) -> Result<MotivicRationalFunction, SeriesError> {
    if m == 0 {
        return Err(SeriesError::EmptyProduct);
    }
    let num = vec![(
        vec![1; m],
        LocalizedMotivicElement::l_pow(-(i64::from(a) * m as i64)),
    )];
    let den = (0..m).map(|i| TAtom::unit(a, i, m));
    MotivicRationalFunction::from_parts(m, num, den)
}

pub(crate) fn t_monomial(n: &[u32]) -> String {
    let parts: Vec<String> = n
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| {
            if e == 1 {
                format!("T{}", i + 1)
            } else {
                format!("T{}^{}", i + 1, e)
            }
        })
        .collect();
    parts.join("*")
}

pub(crate) fn write_term(
    f: &mut fmt::Formatter<'_>,
    c: &LocalizedMotivicElement,
    n: &[u32],
) -> fmt::Result {
    let mono = t_monomial(n);
    if mono.is_empty() {
        if c.is_single_chunk() {
            write!(f, "{c}")
        } else {
            write!(f, "({c})")
        }
    } else if c.is_one() {
        write!(f, "{mono}")
    } else if c.is_single_chunk() {
        write!(f, "{c}*{mono}")
    } else {
        write!(f, "({c})*{mono}")
    }
}

impl fmt::Display for MotivicRationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut keys: Vec<&Vec<u32>> = self.num.keys().collect();
        keys.sort_by(|a, b| graded_cmp(a, b));
        let wrap = !self.den.is_empty() && keys.len() > 1;
        if wrap {
            write!(f, "(")?;
        }
        if keys.is_empty() {
            write!(f, "0")?;
        }
        for (i, n) in keys.into_iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write_term(f, &self.num[n], n)?;
        }
        if wrap {
            write!(f, ")")?;
        }
        if !self.den.is_empty() {
            let mut sorted: Vec<(&TAtom, &u32)> = self.den.iter().collect();
            sorted.sort_by(|x, y| x.0.a.cmp(&y.0.a).then_with(|| graded_cmp(&x.0.b, &y.0.b)));
            let atoms: Vec<String> = sorted
                .into_iter()
                .map(|(atom, &k)| {
                    if k == 1 {
                        atom.to_string()
                    } else {
                        format!("{atom}^{k}")
                    }
                })
                .collect();
            write!(f, " / ({})", atoms.join(" * "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grothendieck_ring::{MotivicElement, SymbolRegistry};

    type Loc = LocalizedMotivicElement;

    fn inv_atom(a: u32) -> MotivicRationalFunction {
        MotivicRationalFunction::inverse_atom(TAtom::unit(a, 0, 1))
    }

    #[test]
    fn adding_zero() {
        let f = inv_atom(1);
        assert!(f.add(&MotivicRationalFunction::zero(1)).unwrap().equals(&f));
    }

    #[test]
    fn atom_cancellation() {
        let f = inv_atom(1);
        let atom_poly = MotivicRationalFunction::from_parts(
            1,
            vec![(vec![0], Loc::one()), (vec![1], -Loc::l_pow(-1))],
            vec![],
        )
        .unwrap();
        let p = f.mul(&atom_poly).unwrap();
        assert!(p.den().is_empty());
        assert!(p.equals(&MotivicRationalFunction::one(1)));
    }

    #[test]
    fn geometric_expansion() {
        let s = inv_atom(1).expand(2);
        assert_eq!(s.coeff(&[0]), Loc::one());
        assert_eq!(s.coeff(&[1]), Loc::l_pow(-1));
        assert_eq!(s.coeff(&[2]), Loc::l_pow(-2));
        assert_eq!(s.coeffs().len(), 3);
    }

    #[test]
    fn single_geometric_factor() {
        let g = geometric_series_product(1, 1).unwrap();
        let s = g.expand(5);
        for n in 1..=5u32 {
            assert_eq!(s.coeff(&[n]), Loc::l_pow(-i64::from(n)));
        }
        assert!(s.coeff(&[0]).is_zero());
    }

    #[test]
    fn substitution_to_one() {
        // T ↦ 1 in 1/(1 - L^-1 T) gives L/(L - 1)
        let f = inv_atom(1);
        let g = f
            .substitute_monomials(0, &[MonomialSubstitution::new(0, vec![])])
            .unwrap();
        let expected = Loc::from_parts(MotivicElement::l_pow(1), [(1, 1)]).unwrap();
        assert_eq!(g.as_constant().unwrap(), expected);
    }

    #[test]
    fn divergent_substitution() {
        let f = inv_atom(0);
        assert!(matches!(
            f.substitute_monomials(0, &[MonomialSubstitution::new(0, vec![])]),
            Err(SeriesError::DivergentSubstitution(_))
        ));
    }

    #[test]
    fn identity_substitution() {
        let g = geometric_series_product(2, 2).unwrap();
        let subs = vec![
            MonomialSubstitution::new(0, vec![1, 0]),
            MonomialSubstitution::new(0, vec![0, 1]),
        ];
        assert!(g.substitute_monomials(2, &subs).unwrap().equals(&g));
    }

    #[test]
    fn scalar_multiplication() {
        let mut reg = SymbolRegistry::new();
        let s = Loc::from(MotivicElement::symbol(&reg.declare_symbol("S", 1).unwrap()));
        let f = inv_atom(1).scale(&s).unwrap();
        let e = f.expand(3);
        assert_eq!(e.coeff(&[2]), &s * &Loc::l_pow(-2));
    }

    #[test]
    fn cross_multiplied_equality() {
        // 1/(1 - T) == (1 + T)/(1 - T^2)
        let f = MotivicRationalFunction::inverse_atom(TAtom::unit(0, 0, 1));
        let g = MotivicRationalFunction::from_parts(
            1,
            vec![(vec![0], Loc::one()), (vec![1], Loc::one())],
            vec![TAtom::new(0, vec![2]).unwrap()],
        )
        .unwrap();
        assert!(f.equals(&g));
        assert!(!f.equals(&MotivicRationalFunction::one(1)));
    }

    #[test]
    fn rendering() {
        let g = geometric_series_product(1, 2).unwrap();
        assert_eq!(
            g.to_string(),
            "L^-2*T1*T2 / ((1 - L^-1*T1) * (1 - L^-1*T2))"
        );
    }
}
