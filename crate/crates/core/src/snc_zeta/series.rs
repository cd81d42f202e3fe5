//! Coefficient formulas and the directly summed truncated series.

use crate::grothendieck_ring::{LocalizedMotivicElement, MotivicElement};
use crate::rational_series::TruncatedSeries;

use super::components::{multi_indices, ComponentSet};
use super::data::{PointStratumData, SncDivisorData};
use super::SncError;

/// The support condition a multi-index must satisfy for its cylinder to be
/// nonempty.
///
/// With `I` the vertical components, `n` fails when
/// - some `i ∈ I` has `n_i ∉ {0, 1}`,
/// - two distinct `i, j ∈ I` have `n_i = n_j = 1`, or
/// - `|I| = r` and no `i ∈ I` has `n_i = 1`.
///
/// The first two conditions need `|I| ≥ 1`; with `I = ∅` every `n` passes.
pub fn property_p(n: &[u32], data: &SncDivisorData) -> Result<bool, SncError> {
    data.check_len(n)?;
    let vertical = data.vertical();
    if vertical.is_empty() {
        return Ok(true);
    }
    let mut ones = 0;
    for i in vertical.iter() {
        match n[i] {
            0 => {}
            1 => ones += 1,
            _ => return Ok(false),
        }
    }
    if ones >= 2 {
        return Ok(false);
    }
    if vertical.len() == data.r() && ones == 0 {
        return Ok(false);
    }
    Ok(true)
}

/// Class of the truncated cylinder of arcs with contact orders `n`:
/// `[D_J°](L-1)^{|J|} L^{|n|(d-1)}` with `J = supp(n)` when `n` passes
/// [`property_p`], `0` otherwise.
pub fn cylinder_class(n: &[u32], data: &SncDivisorData) -> Result<MotivicElement, SncError> {
    if !property_p(n, data)? {
        return Ok(MotivicElement::zero());
    }
    let j = ComponentSet::support(n);
    let stratum = data.stratum_class(j);
    if stratum.is_zero() {
        return Ok(stratum);
    }
    let size: i64 = n.iter().map(|&x| i64::from(x)).sum();
    Ok(
        (&stratum * &MotivicElement::l_minus_one_pow(j.len() as u32))
            .shift_l(size * (i64::from(data.d()) - 1)),
    )
}

/// `Σ_{|n| ≤ bound} cylinder_class(n) L^{-|n|d} T^n`.
pub fn zeta_series_truncated(
    data: &SncDivisorData,
    bound: u32,
) -> Result<TruncatedSeries, SncError> {
    weighted_sum(data, bound, |n| cylinder_class(n, data))
}

/// Class for arcs through the point `x`:
/// `(L-1)^{|I_x|} L^{|n|(d-1)}` when `n` passes [`property_p`] and
/// `supp(n) = I_x`, `0` otherwise.
pub fn point_cylinder_class(
    n: &[u32],
    data: &SncDivisorData,
    pt: &PointStratumData,
) -> Result<MotivicElement, SncError> {
    if ComponentSet::support(n) != pt.components() || !property_p(n, data)? {
        return Ok(MotivicElement::zero());
    }
    let size: i64 = n.iter().map(|&x| i64::from(x)).sum();
    Ok(
        MotivicElement::l_minus_one_pow(pt.components().len() as u32)
            .shift_l(size * (i64::from(data.d()) - 1)),
    )
}

/// `Σ_{|n| ≤ bound} point_cylinder_class(n) L^{-|n|d} T^n`.
pub fn zeta_at_point_series_truncated(
    data: &SncDivisorData,
    pt: &PointStratumData,
    bound: u32,
) -> Result<TruncatedSeries, SncError> {
    weighted_sum(data, bound, |n| point_cylinder_class(n, data, pt))
}

fn weighted_sum(
    data: &SncDivisorData,
    bound: u32,
    class: impl Fn(&[u32]) -> Result<MotivicElement, SncError>,
) -> Result<TruncatedSeries, SncError> {
    let mut out = TruncatedSeries::zero(data.m(), bound);
    let d = i64::from(data.d());
    for n in multi_indices(data.m(), bound) {
        let c = class(&n)?;
        if c.is_zero() {
            continue;
        }
        let size: i64 = n.iter().map(|&x| i64::from(x)).sum();
        out.add_term(n, &LocalizedMotivicElement::from(c.shift_l(-size * d)));
    }
    Ok(out)
}
