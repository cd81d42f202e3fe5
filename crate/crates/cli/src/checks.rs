//! Self-contained oracle comparisons: each check rebuilds the closed form
//! and an independent direct computation from the same input.

use std::collections::BTreeMap;

use motivic_core::input::DivisorDocument;
use motivic_core::rational_series::shape::{check_localized, check_rational_function};
use motivic_core::rational_series::{MotivicRationalFunction, TruncatedSeries};
use motivic_core::snc_zeta::{
    zeta_at_point_closed_form, zeta_at_point_series_truncated, zeta_closed_form,
    zeta_series_truncated,
};
use motivic_core::specialization::{
    motivic_volume_integral, u_to_l_inverse, volume_numeric_limit, volume_partial_sum,
    volume_tail_exponent, zeta_f, zeta_f_series_by_enumeration, zeta_two_variable,
    zeta_two_variable_series_by_enumeration, VolumeData, VolumeExponent,
};
use num_rational::BigRational;

use crate::error::CliError;

pub struct Outcome {
    pub name: String,
    pub detail: Option<String>,
}

impl Outcome {
    fn pass(name: &str) -> Self {
        Outcome {
            name: name.to_string(),
            detail: None,
        }
    }

    fn fail(name: &str, detail: String) -> Self {
        Outcome {
            name: name.to_string(),
            detail: Some(detail),
        }
    }

    pub fn passed(&self) -> bool {
        self.detail.is_none()
    }
}

fn monomial(n: &[u32]) -> String {
    let parts: Vec<String> = n
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| {
            if e == 1 {
                format!("T{}", i + 1)
            } else {
                format!("T{}^{e}", i + 1)
            }
        })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

fn compare_series(name: &str, closed: &TruncatedSeries, oracle: &TruncatedSeries) -> Outcome {
    match closed.first_difference(oracle) {
        None => Outcome::pass(name),
        Some((n, a, b)) => Outcome::fail(
            name,
            format!(
                "coefficient of {}: closed form {a}, oracle {b}",
                monomial(&n)
            ),
        ),
    }
}

fn shape(name: &str, f: &MotivicRationalFunction) -> Outcome {
    match check_rational_function(f) {
        Ok(()) => Outcome::pass(name),
        Err(e) => Outcome::fail(name, e.to_string()),
    }
}

pub fn zeta_snc(doc: &DivisorDocument, degree: u32) -> Result<Vec<Outcome>, CliError> {
    let f = zeta_closed_form(&doc.data)?;
    let oracle = zeta_series_truncated(&doc.data, degree)?;
    Ok(vec![
        compare_series(
            "expansion matches direct summation",
            &f.expand(degree),
            &oracle,
        ),
        shape("closed form lies in the rational subring", &f),
    ])
}

pub fn zeta_point(doc: &DivisorDocument, degree: u32) -> Result<Vec<Outcome>, CliError> {
    let pt = doc.point()?;
    let f = zeta_at_point_closed_form(&doc.data, &pt)?;
    let oracle = zeta_at_point_series_truncated(&doc.data, &pt, degree)?;
    Ok(vec![
        compare_series(
            "expansion matches direct summation",
            &f.expand(degree),
            &oracle,
        ),
        shape("closed form lies in the rational subring", &f),
    ])
}

pub fn zeta_resolve(doc: &DivisorDocument, degree: u32) -> Result<Vec<Outcome>, CliError> {
    let res = doc.resolution()?;
    let zf = zeta_f(&res)?;
    let two = zeta_two_variable(&res)?;
    let folded = u_to_l_inverse(&two)?;
    let mut out = vec![if zf.equals(&folded) {
        Outcome::pass("Z_f equals Z(T, U) at U = L^-1")
    } else {
        Outcome::fail(
            "Z_f equals Z(T, U) at U = L^-1",
            format!("{zf} vs {folded}"),
        )
    }];
    out.push(compare_series(
        "Z_f expansion matches fiber enumeration",
        &zf.expand(degree),
        &zeta_f_series_by_enumeration(&res, degree)?,
    ));
    out.push(compare_series(
        "Z(T, U) expansion matches fiber enumeration",
        &two.expand(degree),
        &zeta_two_variable_series_by_enumeration(&res, degree)?,
    ));
    out.push(shape("Z_f lies in the rational subring", &zf));
    Ok(out)
}

fn volume_checks(
    vol: &VolumeData,
    conv: VolumeExponent,
    degree: u32,
    qs: &[i64],
    counts: Option<&BTreeMap<String, BigRational>>,
) -> Result<Vec<Outcome>, CliError> {
    let closed = motivic_volume_integral(vol, conv)?;
    let partial = volume_partial_sum(vol, conv, degree)?;
    let diff = closed.checked_sub(&partial)?;
    let k = volume_tail_exponent(vol);
    let limit = k - i64::from(degree);
    let name = "partial sums converge to the closed form";
    let mut out = vec![match diff.norm_bound().exponent() {
        Some(e) if e > limit => Outcome::fail(name, format!("norm 2^{e} exceeds bound 2^{limit}")),
        _ => Outcome::pass(name),
    }];
    out.push(match check_localized(&closed) {
        Ok(()) => Outcome::pass("volume lies in the localized subring"),
        Err(e) => Outcome::fail("volume lies in the localized subring", e.to_string()),
    });
    if let Some(counts) = counts {
        for &q in qs {
            let qr = motivic_core::specialization::rational(q);
            let name = format!("point count at q = {q} matches the geometric-series limit");
            let lhs = closed.specialize_counts(&qr, counts)?;
            let rhs = volume_numeric_limit(vol, conv, &qr, counts)?;
            out.push(if lhs == rhs {
                Outcome::pass(&name)
            } else {
                Outcome::fail(&name, format!("closed form {lhs}, limit {rhs}"))
            });
        }
    }
    Ok(out)
}

pub fn volume(
    doc: &DivisorDocument,
    conv: VolumeExponent,
    degree: u32,
    qs: &[i64],
) -> Result<Vec<Outcome>, CliError> {
    let vol = doc.volume()?;
    let counts = doc.counts().ok();
    volume_checks(&vol, conv, degree, qs, counts.as_ref())
}

pub fn total_volume(
    doc: &DivisorDocument,
    conv: VolumeExponent,
    degree: u32,
    qs: &[i64],
) -> Result<Vec<Outcome>, CliError> {
    let res = doc.resolution()?;
    let m = res.base().m();
    let b = res.nu().iter().map(|&v| v - 1).collect();
    let vol = VolumeData::new(res.base().clone(), vec![1; m], b)?;
    let counts = doc.counts().ok();
    let mut out = volume_checks(&vol, conv, degree, qs, counts.as_ref())?;
    let total = motivic_core::specialization::total_volume(&res, conv)?;
    let direct = motivic_volume_integral(&vol, conv)?;
    out.push(if total.equals(&direct) {
        Outcome::pass("total volume equals the volume with a = 1, b = nu - 1")
    } else {
        Outcome::fail(
            "total volume equals the volume with a = 1, b = nu - 1",
            format!("{total} vs {direct}"),
        )
    });
    Ok(out)
}
