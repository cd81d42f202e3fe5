use crate::grothendieck_ring::LocalizedMotivicElement;
use crate::rational_series::{MonomialSubstitution, MotivicRationalFunction, TruncatedSeries};
use crate::snc_zeta::{cylinder_class, multi_indices, zeta_closed_form, SncDivisorData};

use super::SpecializationError;

/// Numerical data of an embedded resolution `h` of `f = (f_1, …, f_ℓ)`.
///
/// `base` describes the reduced total transform `C_red = Σ C_i`;
/// `nu[i] - 1` is the multiplicity of `C_i` in the jacobian divisor of `h`
/// and `a[i][j]` the multiplicity of `C_i` in `h^{-1}(E_j)`.
#[derive(Clone, Debug)]
pub struct ResolutionData {
    base: SncDivisorData,
    nu: Vec<u32>,
    a: Vec<Vec<u32>>,
    ell: usize,
    warnings: Vec<String>,
}

impl ResolutionData {
    pub fn new(
        base: SncDivisorData,
        nu: Vec<u32>,
        a: Vec<Vec<u32>>,
        ell: usize,
    ) -> Result<Self, SpecializationError> {
        let m = base.m();
        if nu.len() != m {
            return Err(SpecializationError::Length {
                what: "nu",
                expected: m,
                got: nu.len(),
            });
        }
        if a.len() != m {
            return Err(SpecializationError::Length {
                what: "A (rows)",
                expected: m,
                got: a.len(),
            });
        }
        if let Some(row) = a.iter().find(|row| row.len() != ell) {
            return Err(SpecializationError::Length {
                what: "A (columns)",
                expected: ell,
                got: row.len(),
            });
        }
        if let Some(i) = nu.iter().position(|&v| v == 0) {
            return Err(SpecializationError::NuZero(i + 1));
        }
        let warnings = (0..m)
            .filter(|&i| nu[i] == 1 && a[i].iter().all(|&x| x == 0))
            .map(|i| format!("component {} carries no multiplicity", i + 1))
            .collect();
        Ok(ResolutionData {
            base,
            nu,
            a,
            ell,
            warnings,
        })
    }

    pub fn base(&self) -> &SncDivisorData {
        &self.base
    }

    pub fn nu(&self) -> &[u32] {
        &self.nu
    }

    pub fn a(&self) -> &[Vec<u32>] {
        &self.a
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    /// Non-fatal remarks produced by validation.
    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }
}

/// `Z(T, U)`: component `i` of the base zeta function is replaced by
/// `U^{ν_i - 1} ∏_j T_j^{a_ij}`. Variables are `T_1..T_ℓ` followed by `U`.
pub fn zeta_two_variable(
    res: &ResolutionData,
) -> Result<MotivicRationalFunction, SpecializationError> {
    let base = zeta_closed_form(&res.base)?;
    let subs: Vec<MonomialSubstitution> = (0..res.base.m())
        .map(|i| {
            let mut e = res.a[i].clone();
            e.push(res.nu[i] - 1);
            MonomialSubstitution::new(0, e)
        })
        .collect();
    Ok(base.substitute_monomials(res.ell + 1, &subs)?)
}

/// `Z_f(T)`: component `i` is replaced by `L^{-(ν_i - 1)} ∏_j T_j^{a_ij}`.
pub fn zeta_f(res: &ResolutionData) -> Result<MotivicRationalFunction, SpecializationError> {
    let base = zeta_closed_form(&res.base)?;
    let subs: Vec<MonomialSubstitution> = (0..res.base.m())
        .map(|i| MonomialSubstitution::new(res.nu[i] - 1, res.a[i].clone()))
        .collect();
    Ok(base.substitute_monomials(res.ell, &subs)?)
}

/// Substitutes `U ↦ L^{-1}` in a function of `(T_1..T_ℓ, U)`.
pub fn u_to_l_inverse(
    f: &MotivicRationalFunction,
) -> Result<MotivicRationalFunction, SpecializationError> {
    let ell = f
        .nvars()
        .checked_sub(1)
        .ok_or(SpecializationError::Length {
            what: "variables",
            expected: 1,
            got: 0,
        })?;
    let mut subs: Vec<MonomialSubstitution> = (0..ell)
        .map(|j| {
            let mut e = vec![0; ell];
            e[j] = 1;
            MonomialSubstitution::new(0, e)
        })
        .collect();
    subs.push(MonomialSubstitution::new(1, vec![0; ell]));
    Ok(f.substitute_monomials(ell, &subs)?)
}

/// Weight of component `i` in the total degree of the two-variable series.
fn two_variable_weight(res: &ResolutionData, i: usize) -> u32 {
    res.a[i].iter().sum::<u32>() + res.nu[i] - 1
}

/// `Z_f` up to degree `bound`, summed over the fibers `{s : A^T s = n}` of
/// the base series. Requires every row of `A` to be nonzero so each fiber is
/// finite.
pub fn zeta_f_series_by_enumeration(
    res: &ResolutionData,
    bound: u32,
) -> Result<TruncatedSeries, SpecializationError> {
    if let Some(i) = (0..res.base.m()).find(|&i| res.a[i].iter().all(|&x| x == 0)) {
        return Err(SpecializationError::InfiniteFiber(i + 1));
    }
    let d = i64::from(res.base.d());
    let mut out = TruncatedSeries::zero(res.ell, bound);
    for s in multi_indices(res.base.m(), bound) {
        let n: Vec<u32> = (0..res.ell)
            .map(|j| (0..res.base.m()).map(|i| res.a[i][j] * s[i]).sum())
            .collect();
        if n.iter().sum::<u32>() > bound {
            continue;
        }
        let class = cylinder_class(&s, &res.base)?;
        if class.is_zero() {
            continue;
        }
        let size: i64 = s.iter().map(|&x| i64::from(x)).sum();
        let jac: i64 = (0..res.base.m())
            .map(|i| i64::from(res.nu[i] - 1) * i64::from(s[i]))
            .sum();
        out.add_term(
            n,
            &LocalizedMotivicElement::from(class.shift_l(-size * d - jac)),
        );
    }
    Ok(out)
}

/// `Z(T, U)` up to total degree `bound`, by the same fiber enumeration.
pub fn zeta_two_variable_series_by_enumeration(
    res: &ResolutionData,
    bound: u32,
) -> Result<TruncatedSeries, SpecializationError> {
    if let Some(i) = (0..res.base.m()).find(|&i| two_variable_weight(res, i) == 0) {
        return Err(SpecializationError::InfiniteFiber(i + 1));
    }
    let d = i64::from(res.base.d());
    let mut out = TruncatedSeries::zero(res.ell + 1, bound);
    for s in multi_indices(res.base.m(), bound) {
        let mut n: Vec<u32> = (0..res.ell)
            .map(|j| (0..res.base.m()).map(|i| res.a[i][j] * s[i]).sum())
            .collect();
        n.push((0..res.base.m()).map(|i| (res.nu[i] - 1) * s[i]).sum());
        if n.iter().sum::<u32>() > bound {
            continue;
        }
        let class = cylinder_class(&s, &res.base)?;
        if class.is_zero() {
            continue;
        }
        let size: i64 = s.iter().map(|&x| i64::from(x)).sum();
        out.add_term(n, &LocalizedMotivicElement::from(class.shift_l(-size * d)));
    }
    Ok(out)
}
