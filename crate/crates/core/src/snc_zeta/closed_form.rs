//! Closed forms of the zeta function of an SNC divisor.
//!
//! With `h_j = (L-1) L^{-1} T_j / (1 - L^{-1} T_j)`, `I` the vertical
//! components and `H` the horizontal ones:
//!
//! | case | condition | closed form |
//! |------|-----------|-------------|
//! | no vertical component | `I = ∅` | `Σ_{J ⊆ H} [D_J°] ∏_{j∈J} h_j` |
//! | mixed | `1 ≤ |I| < r` | `(L-1)/L Σ_{ℓ∈I} Σ_{J⊆H} [D°_{J∪ℓ}] ∏ h_j T_ℓ + Σ_{J⊆H} [D_J°] ∏ h_j` |
//! | fiber inside `D` | `|I| = r < m` | first sum of the mixed case only |
//! | `D` is the fiber | `|I| = r = m` | `(L-1)/L Σ_i [Y_i] T_i` |

use std::fmt;

use crate::grothendieck_ring::{LocalizedMotivicElement, MotivicElement};
use crate::rational_series::{MotivicRationalFunction, TAtom};

use super::components::ComponentSet;
use super::data::{PointStratumData, SncDivisorData};
use super::SncError;

/// Which closed-form display applies to a divisor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZetaCase {
    /// No component lies in the special fiber.
    NoVertical,
    /// Some but not all fiber components lie in `D`.
    Mixed,
    /// The whole special fiber lies in `D`, which has horizontal components too.
    FiberInDivisor,
    /// `D` equals the special fiber.
    DivisorIsFiber,
}

impl ZetaCase {
    pub fn select(data: &SncDivisorData) -> Self {
        let i = data.vertical().len();
        if i == 0 {
            ZetaCase::NoVertical
        } else if i == data.r() && i == data.m() {
            ZetaCase::DivisorIsFiber
        } else if i == data.r() {
            ZetaCase::FiberInDivisor
        } else {
            ZetaCase::Mixed
        }
    }
}

impl fmt::Display for ZetaCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ZetaCase::NoVertical => "no vertical component",
            ZetaCase::Mixed => "mixed vertical and horizontal",
            ZetaCase::FiberInDivisor => "special fiber contained in D",
            ZetaCase::DivisorIsFiber => "D equals the special fiber",
        };
        f.write_str(s)
    }
}

/// `(L-1)/L` as a coefficient.
fn l_minus_one_over_l() -> LocalizedMotivicElement {
    MotivicElement::l_minus_one().shift_l(-1).into()
}

/// `c · ∏_{j∈J} h_j` in `m` variables.
fn horizontal_product(
    m: usize,
    j: ComponentSet,
    c: MotivicElement,
) -> Result<MotivicRationalFunction, SncError> {
    let k = j.len() as u32;
    let coeff = (&c * &MotivicElement::l_minus_one_pow(k)).shift_l(-i64::from(k));
    Ok(MotivicRationalFunction::from_parts(
        m,
        vec![(j.indicator(m), coeff.into())],
        j.iter().map(|i| TAtom::unit(1, i, m)),
    )?)
}

/// `Σ_{J ⊆ H} [D°_{J ∪ extra}] ∏_{j∈J} h_j`.
fn stratum_sum(
    data: &SncDivisorData,
    h: ComponentSet,
    extra: ComponentSet,
) -> Result<MotivicRationalFunction, SncError> {
    let mut out = MotivicRationalFunction::zero(data.m());
    for j in h.subsets() {
        let class = data.stratum_class(j.union(extra));
        if class.is_zero() {
            continue;
        }
        out = out.add(&horizontal_product(data.m(), j, class)?)?;
    }
    Ok(out)
}

/// `(L-1)/L · T_ℓ · f`.
fn vertical_factor(
    m: usize,
    l: usize,
    f: &MotivicRationalFunction,
) -> Result<MotivicRationalFunction, SncError> {
    let t = MotivicRationalFunction::monomial(
        m,
        ComponentSet::singleton(l).indicator(m),
        l_minus_one_over_l(),
    );
    Ok(t.mul(f)?)
}

/// Closed form of `Z_D(T) = Σ_n [π_{|n|}(…)] L^{-|n|d} T^n`.
pub fn zeta_closed_form(data: &SncDivisorData) -> Result<MotivicRationalFunction, SncError> {
    let m = data.m();
    let h = data.horizontal();
    match ZetaCase::select(data) {
        ZetaCase::NoVertical => stratum_sum(data, h, ComponentSet::empty()),
        ZetaCase::Mixed | ZetaCase::FiberInDivisor => {
            let mut out = MotivicRationalFunction::zero(m);
            for l in data.vertical().iter() {
                let inner = stratum_sum(data, h, ComponentSet::singleton(l))?;
                out = out.add(&vertical_factor(m, l, &inner)?)?;
            }
            if ZetaCase::select(data) == ZetaCase::Mixed {
                out = out.add(&stratum_sum(data, h, ComponentSet::empty())?)?;
            }
            Ok(out)
        }
        ZetaCase::DivisorIsFiber => {
            let mut out = MotivicRationalFunction::zero(m);
            for i in data.vertical().iter() {
                let y = data
                    .fiber_class(i)
                    .ok_or(SncError::MissingFiberClass(i + 1))?;
                let f = MotivicRationalFunction::constant(m, y.into());
                out = out.add(&vertical_factor(m, i, &f)?)?;
            }
            Ok(out)
        }
    }
}

/// Closed form of the zeta function at a point `x`.
///
/// `∏_{i∈I_x} h_i` when no vertical component passes through `x`, and
/// `(L-1)/L · T_ℓ · ∏_{i∈I_x, i≠ℓ} h_i` when the vertical component `ℓ`
/// does (which covers `D = Y`, where `I_x = {ℓ}`).
pub fn zeta_at_point_closed_form(
    data: &SncDivisorData,
    pt: &PointStratumData,
) -> Result<MotivicRationalFunction, SncError> {
    let m = data.m();
    match pt.vertical_component() {
        None => horizontal_product(m, pt.components(), MotivicElement::one()),
        Some(l) => {
            let rest = pt.components().difference(ComponentSet::singleton(l));
            let f = horizontal_product(m, rest, MotivicElement::one())?;
            vertical_factor(m, l, &f)
        }
    }
}
