use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::grothendieck_ring::{LocalizedMotivicElement, MotivicElement};
use crate::rational_series::MonomialSubstitution;
use crate::snc_zeta::{
    cylinder_class, multi_indices, zeta_closed_form, ComponentSet, SncDivisorData,
};

use super::{ResolutionData, SpecializationError};

/// Divisor data of a volume integral `∫ L^{-ord ω}` over the special fiber.
///
/// The form is `ω = h^*ω_0 ⊗ …` with `ord_{D_i} ω = a_i - 1 + b_i`: `a_i`
/// is the multiplicity of `D_i` in the special fiber and `b_i` its order in
/// the relative canonical divisor.
#[derive(Clone, Debug)]
pub struct VolumeData {
    base: SncDivisorData,
    a: Vec<u32>,
    b: Vec<u32>,
}

impl VolumeData {
    pub fn new(
        base: SncDivisorData,
        a: Vec<u32>,
        b: Vec<u32>,
    ) -> Result<Self, SpecializationError> {
        for (what, v) in [("a", &a), ("b", &b)] {
            if v.len() != base.m() {
                return Err(SpecializationError::Length {
                    what,
                    expected: base.m(),
                    got: v.len(),
                });
            }
        }
        if let Some(i) = a.iter().position(|&x| x == 0) {
            return Err(SpecializationError::MultiplicityZero(i + 1));
        }
        Ok(VolumeData { base, a, b })
    }

    pub fn base(&self) -> &SncDivisorData {
        &self.base
    }

    pub fn a(&self) -> &[u32] {
        &self.a
    }

    pub fn b(&self) -> &[u32] {
        &self.b
    }

    /// `a_i + b_i - 1`.
    pub fn weight(&self, i: usize) -> u32 {
        self.a[i] + self.b[i] - 1
    }
}

/// How the weight `a_i + b_i - 1` enters the exponent of `L`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum VolumeExponent {
    /// `T_i ↦ L^{-(a_i + b_i - 1) d}`.
    #[default]
    TimesD,
    /// `T_i ↦ L^{-(a_i + b_i - 1)}`.
    Plain,
}

impl VolumeExponent {
    fn exponent(self, vol: &VolumeData, i: usize) -> u32 {
        match self {
            VolumeExponent::TimesD => vol.weight(i) * vol.base.d(),
            VolumeExponent::Plain => vol.weight(i),
        }
    }
}

impl FromStr for VolumeExponent {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "times-d" => Ok(VolumeExponent::TimesD),
            "plain" => Ok(VolumeExponent::Plain),
            other => Err(format!(
                "unknown volume exponent '{other}' (times-d, plain)"
            )),
        }
    }
}

impl fmt::Display for VolumeExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VolumeExponent::TimesD => "times-d",
            VolumeExponent::Plain => "plain",
        })
    }
}

/// `L^{-d} Z_D(L^{-k_1}, …, L^{-k_m})` with `k_i` given by `convention`.
pub fn motivic_volume_integral(
    vol: &VolumeData,
    convention: VolumeExponent,
) -> Result<LocalizedMotivicElement, SpecializationError> {
    let z = zeta_closed_form(&vol.base)?;
    let subs: Vec<MonomialSubstitution> = (0..vol.base.m())
        .map(|i| MonomialSubstitution::new(convention.exponent(vol, i), vec![]))
        .collect();
    let c = z
        .substitute_monomials(0, &subs)?
        .as_constant()
        .ok_or(SpecializationError::NotConstant)?;
    Ok(c.shift_l(-i64::from(vol.base.d())))
}

/// Volume of the special fiber for the canonical form `ω = dx/dt`, i.e.
/// `ord_{D_i} ω = ν_i - 1`. Needs `ℓ = 0`.
pub fn total_volume(
    res: &ResolutionData,
    convention: VolumeExponent,
) -> Result<LocalizedMotivicElement, SpecializationError> {
    if res.ell() != 0 {
        return Err(SpecializationError::TotalVolumeNeedsNoFunctions(res.ell()));
    }
    let m = res.base().m();
    let b = res.nu().iter().map(|&v| v - 1).collect();
    let vol = VolumeData::new(res.base().clone(), vec![1; m], b)?;
    motivic_volume_integral(&vol, convention)
}

/// `L^{-d} Σ_{|n| ≤ bound} cylinder_class(n) L^{-|n|d - Σ k_i n_i}`.
pub fn volume_partial_sum(
    vol: &VolumeData,
    convention: VolumeExponent,
    bound: u32,
) -> Result<LocalizedMotivicElement, SpecializationError> {
    let d = i64::from(vol.base.d());
    let mut total = MotivicElement::zero();
    for n in multi_indices(vol.base.m(), bound) {
        let class = cylinder_class(&n, &vol.base)?;
        if class.is_zero() {
            continue;
        }
        let size: i64 = n.iter().map(|&x| i64::from(x)).sum();
        let weight: i64 = n
            .iter()
            .enumerate()
            .map(|(i, &x)| i64::from(x) * i64::from(convention.exponent(vol, i)))
            .sum();
        total = total.checked_add(&class.shift_l(-size * d - weight - d))?;
    }
    Ok(total.into())
}

/// Exponent `K` with `‖volume - partial_sum(N)‖ ≤ 2^{K - N}`.
///
/// A term of order `|n|` has virtual dimension at most
/// `dim D_J° + |J| - |n| - d`, and `dim D_J° ≤ d`, `|J| ≤ m`.
pub fn volume_tail_exponent(vol: &VolumeData) -> i64 {
    let max_dim = vol
        .base
        .strata()
        .values()
        .chain(vol.base.fiber_classes().values())
        .filter_map(|s| s.finite_dim())
        .max()
        .unwrap_or(0);
    i64::from(max_dim) + vol.base.m() as i64 - i64::from(vol.base.d())
}

/// Point count of the volume with `L ↦ q` and `[S] ↦ counts[S]`, summed
/// stratum by stratum as geometric series.
///
/// For a stratum `J`, multi-indices with support `J` contribute
/// `[D_J°] (q-1)^{|J|} q^{-d} ∏_{i∈J} Σ_{n_i} q^{-(1+k_i) n_i}`, where
/// vertical `i` only allow `n_i = 1` and at most one vertical index may be
/// used (exactly one when every fiber component lies in `D`).
pub fn volume_numeric_limit(
    vol: &VolumeData,
    convention: VolumeExponent,
    q: &BigRational,
    counts: &BTreeMap<String, BigRational>,
) -> Result<BigRational, SpecializationError> {
    let data = &vol.base;
    let one = BigRational::one();
    let qpow = |e: i64| -> BigRational {
        let base = if e >= 0 { q.clone() } else { one.clone() / q };
        let mut out = one.clone();
        for _ in 0..e.unsigned_abs() {
            out *= &base;
        }
        out
    };
    let mut total = BigRational::zero();
    for j in ComponentSet::full(data.m()).subsets() {
        let on_vertical = j.intersection(data.vertical()).len();
        if on_vertical > 1 || (data.vertical().len() == data.r() && on_vertical == 0) {
            continue;
        }
        let Some(symbol) = data.stratum_symbol(j) else {
            continue;
        };
        if symbol.is_empty_class() {
            continue;
        }
        let count = counts
            .get(symbol.name())
            .ok_or_else(|| SpecializationError::MissingCount(symbol.name().to_string()))?;
        let mut term = count.clone() * qpow(-i64::from(data.d()));
        for i in j.iter() {
            let r = qpow(-1 - i64::from(convention.exponent(vol, i)));
            let factor = if data.vertical().contains(i) {
                r
            } else {
                r.clone() / (one.clone() - r)
            };
            term *= (q.clone() - one.clone()) * factor;
        }
        total += term;
    }
    Ok(total)
}

/// `q` as a rational.
pub fn rational(q: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grothendieck_ring::SymbolRegistry;

    fn line_with_point(reg: &mut SymbolRegistry) -> VolumeData {
        let u = reg.declare_symbol("U", 1).unwrap();
        let p = reg.declare_symbol("P", 0).unwrap();
        let base =
            SncDivisorData::new(1, 1, 1, &[], vec![(vec![], u), (vec![0], p)], vec![]).unwrap();
        VolumeData::new(base, vec![2], vec![0]).unwrap()
    }

    #[test]
    fn numeric_limit_matches_closed_form() {
        let mut reg = SymbolRegistry::new();
        let vol = line_with_point(&mut reg);
        let counts: BTreeMap<String, BigRational> = [
            ("U".to_string(), rational(4)),
            ("P".to_string(), rational(1)),
        ]
        .into();
        for conv in [VolumeExponent::TimesD, VolumeExponent::Plain] {
            let closed = motivic_volume_integral(&vol, conv).unwrap();
            for q in [2, 3, 5] {
                let q = rational(q);
                assert_eq!(
                    closed.specialize_counts(&q, &counts).unwrap(),
                    volume_numeric_limit(&vol, conv, &q, &counts).unwrap()
                );
            }
        }
    }

    #[test]
    fn partial_sums_converge() {
        let mut reg = SymbolRegistry::new();
        let vol = line_with_point(&mut reg);
        let closed = motivic_volume_integral(&vol, VolumeExponent::TimesD).unwrap();
        let k = volume_tail_exponent(&vol);
        for n in [2u32, 5, 9] {
            let partial = volume_partial_sum(&vol, VolumeExponent::TimesD, n).unwrap();
            let gap = (&closed - &partial).norm_bound();
            assert!(gap.exponent().is_none_or(|e| e <= k - i64::from(n)));
        }
    }

    #[test]
    fn rejects_zero_multiplicity() {
        let mut reg = SymbolRegistry::new();
        let vol = line_with_point(&mut reg);
        assert!(matches!(
            VolumeData::new(vol.base().clone(), vec![0], vec![0]),
            Err(SpecializationError::MultiplicityZero(1))
        ));
        assert_eq!("plain".parse::<VolumeExponent>(), Ok(VolumeExponent::Plain));
    }
}
