//! JSON documents describing divisor data, resolution data, points for the
//! semi-algebraic evaluator, and point counts.
//!
//! Component indices in documents are 1-based.
//!
//! ```json
//! {"d": 1, "m": 2, "r": 1, "I": [1],
//!  "strata": [{"J": [], "class": "U", "dim": 1},
//!             {"J": [2], "class": "E2", "dim": 0},
//!             {"J": [1, 2], "class": "P", "empty": true}],
//!  "fiber_classes": [{"i": 1, "class": "Y1", "dim": 0}],
//!  "point": {"I_x": [1, 2], "vertical": 1},
//!  "nu": [1, 2], "A": [[1], [0]], "ell": 1,
//!  "a": [1, 1], "b": [0, 1],
//!  "counts": {"U": 4, "E2": 1, "Y1": "1/2"}}
//! ```

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Deserialize;
use serde_json::Value;
use thiserror::Error;

use crate::grothendieck_ring::{ClassSymbol, RingError, SymbolDim, SymbolRegistry};
use crate::semialg_eval::{PowerSeriesValue, SemialgError};
use crate::snc_zeta::{PointStratumData, SncDivisorData, SncError};
use crate::specialization::{ResolutionData, SpecializationError, VolumeData};

#[derive(Debug, Error)]
pub enum InputError {
    #[error("invalid JSON: {0}")]
    Json(String),
    #[error("field `{field}`: {message}")]
    Field { field: String, message: String },
    #[error(transparent)]
    Snc(#[from] SncError),
    #[error(transparent)]
    Specialization(#[from] SpecializationError),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Semialg(#[from] SemialgError),
}

fn field(field: impl Into<String>, message: impl Into<String>) -> InputError {
    InputError::Field {
        field: field.into(),
        message: message.into(),
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct StratumEntry {
    #[serde(rename = "J")]
    j: Vec<usize>,
    class: String,
    dim: Option<i64>,
    #[serde(default)]
    empty: bool,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FiberEntry {
    i: usize,
    class: String,
    dim: Option<i64>,
    #[serde(default)]
    empty: bool,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PointEntry {
    #[serde(rename = "I_x")]
    components: Vec<usize>,
    vertical: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    d: u32,
    m: usize,
    r: usize,
    #[serde(rename = "I", default)]
    vertical: Vec<usize>,
    #[serde(default)]
    strata: Vec<StratumEntry>,
    #[serde(default)]
    fiber_classes: Vec<FiberEntry>,
    point: Option<PointEntry>,
    nu: Option<Vec<u32>>,
    #[serde(rename = "A")]
    a_matrix: Option<Vec<Vec<u32>>>,
    ell: Option<usize>,
    a: Option<Vec<u32>>,
    b: Option<Vec<u32>>,
    counts: Option<BTreeMap<String, Value>>,
}

/// A parsed divisor document with its symbol registry.
#[derive(Debug)]
pub struct DivisorDocument {
    pub registry: SymbolRegistry,
    pub data: SncDivisorData,
    doc: Document,
}

fn zero_based(what: &str, i: usize) -> Result<usize, InputError> {
    i.checked_sub(1)
        .ok_or_else(|| field(what, "component indices start at 1"))
}

fn declare(
    registry: &mut SymbolRegistry,
    what: &str,
    class: &str,
    dim: Option<i64>,
    empty: bool,
) -> Result<ClassSymbol, InputError> {
    let dim = match (empty, dim) {
        (true, _) => SymbolDim::Empty,
        (false, Some(d)) if d < 0 => {
            return Err(field(
                format!("{what}.dim"),
                "dimension must be nonnegative",
            ))
        }
        (false, Some(d)) => SymbolDim::Finite(
            u32::try_from(d).map_err(|_| field(format!("{what}.dim"), "dimension too large"))?,
        ),
        (false, None) => {
            return Err(field(
                format!("{what}.dim"),
                "missing dimension (give \"dim\" or \"empty\": true)",
            ))
        }
    };
    registry
        .get_or_declare(class, dim)
        .map_err(|e| field(format!("{what}.class"), e.to_string()))
}

/// Parses and validates an SNC divisor document.
pub fn parse_divisor_document(text: &str) -> Result<DivisorDocument, InputError> {
    let doc: Document = serde_json::from_str(text).map_err(|e| InputError::Json(e.to_string()))?;
    let mut registry = SymbolRegistry::new();
    let vertical = doc
        .vertical
        .iter()
        .enumerate()
        .map(|(k, &i)| zero_based(&format!("I[{k}]"), i))
        .collect::<Result<Vec<_>, _>>()?;
    let mut strata = Vec::new();
    for (k, s) in doc.strata.iter().enumerate() {
        let what = format!("strata[{k}]");
        let j =
            s.j.iter()
                .map(|&i| zero_based(&format!("{what}.J"), i))
                .collect::<Result<Vec<_>, _>>()?;
        strata.push((j, declare(&mut registry, &what, &s.class, s.dim, s.empty)?));
    }
    let mut fibers = Vec::new();
    for (k, f) in doc.fiber_classes.iter().enumerate() {
        let what = format!("fiber_classes[{k}]");
        let i = zero_based(&format!("{what}.i"), f.i)?;
        fibers.push((i, declare(&mut registry, &what, &f.class, f.dim, f.empty)?));
    }
    let data = SncDivisorData::new(doc.d, doc.m, doc.r, &vertical, strata, fibers)?;
    Ok(DivisorDocument {
        registry,
        data,
        doc,
    })
}

impl DivisorDocument {
    /// The `point` entry, validated against the divisor data.
    pub fn point(&self) -> Result<PointStratumData, InputError> {
        let p = self.doc.point.as_ref().ok_or_else(|| {
            field(
                "point",
                "missing; expected {\"I_x\": [...], \"vertical\": i}",
            )
        })?;
        let components = p
            .components
            .iter()
            .map(|&i| zero_based("point.I_x", i))
            .collect::<Result<Vec<_>, _>>()?;
        let vertical = p
            .vertical
            .map(|i| zero_based("point.vertical", i))
            .transpose()?;
        Ok(PointStratumData::new(&self.data, &components, vertical)?)
    }

    /// Resolution data from `nu`, `A` and `ell`.
    pub fn resolution(&self) -> Result<ResolutionData, InputError> {
        let nu = self.doc.nu.clone().ok_or_else(|| field("nu", "missing"))?;
        let a = self
            .doc
            .a_matrix
            .clone()
            .unwrap_or_else(|| vec![Vec::new(); self.data.m()]);
        let ell = match self.doc.ell {
            Some(ell) => ell,
            None => a.first().map_or(0, Vec::len),
        };
        Ok(ResolutionData::new(self.data.clone(), nu, a, ell)?)
    }

    /// Volume data from `a` and `b`; `b` defaults to zeros.
    pub fn volume(&self) -> Result<VolumeData, InputError> {
        let a = self.doc.a.clone().ok_or_else(|| field("a", "missing"))?;
        let b = self.doc.b.clone().unwrap_or_else(|| vec![0; a.len()]);
        Ok(VolumeData::new(self.data.clone(), a, b)?)
    }

    /// Point counts `[S] ↦ #S(F_q)` from the `counts` object.
    pub fn counts(&self) -> Result<BTreeMap<String, BigRational>, InputError> {
        let raw = self
            .doc
            .counts
            .as_ref()
            .ok_or_else(|| field("counts", "missing"))?;
        raw.iter()
            .map(|(k, v)| Ok((k.clone(), json_rational(&format!("counts.{k}"), v)?)))
            .collect()
    }
}

fn parse_rational_text(what: &str, s: &str) -> Result<BigRational, InputError> {
    let bad = || field(what, format!("expected an integer or p/q, found \"{s}\""));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d == BigInt::from(0) {
        return Err(field(what, "zero denominator"));
    }
    Ok(BigRational::new(n, d))
}

fn json_rational(what: &str, v: &Value) -> Result<BigRational, InputError> {
    match v {
        Value::Number(n) => match n.as_i64() {
            Some(i) => Ok(BigRational::from_integer(BigInt::from(i))),
            None => Err(field(what, "expected an integer")),
        },
        Value::String(s) => parse_rational_text(what, s),
        _ => Err(field(what, "expected an integer or a string \"p/q\"")),
    }
}

fn json_int(what: &str, v: &Value) -> Result<i64, InputError> {
    v.as_i64().ok_or_else(|| field(what, "expected an integer"))
}

/// Point for the semi-algebraic evaluator: a list of coordinates, each a
/// list of `[degree, numerator, denominator]` triples or an object
/// `{"terms": [...], "zero": bool}`. Coordinates flagged `"zero": true` are
/// the certified zero series; all others are known modulo `t^trunc`.
pub fn parse_series_point(text: &str, trunc: u32) -> Result<Vec<PowerSeriesValue>, InputError> {
    let v: Value = serde_json::from_str(text).map_err(|e| InputError::Json(e.to_string()))?;
    let coords = match &v {
        Value::Array(xs) => xs,
        Value::Object(o) => match o.get("point") {
            Some(Value::Array(xs)) => xs,
            _ => return Err(field("point", "expected a list of coordinates")),
        },
        _ => return Err(field("point", "expected a list of coordinates")),
    };
    let mut out = Vec::with_capacity(coords.len());
    for (k, c) in coords.iter().enumerate() {
        let what = format!("point[{k}]");
        let (terms, zero) = match c {
            Value::Array(ts) => (ts.as_slice(), false),
            Value::Object(o) => {
                for key in o.keys() {
                    if key != "terms" && key != "zero" {
                        return Err(field(format!("{what}.{key}"), "unknown field"));
                    }
                }
                let zero = match o.get("zero") {
                    None => false,
                    Some(Value::Bool(b)) => *b,
                    Some(_) => return Err(field(format!("{what}.zero"), "expected a boolean")),
                };
                let terms = match o.get("terms") {
                    None => &[][..],
                    Some(Value::Array(ts)) => ts.as_slice(),
                    Some(_) => return Err(field(format!("{what}.terms"), "expected a list")),
                };
                (terms, zero)
            }
            _ => return Err(field(&what, "expected a list of triples or an object")),
        };
        if zero {
            if !terms.is_empty() {
                return Err(field(&what, "a certified zero cannot have terms"));
            }
            out.push(PowerSeriesValue::zero());
            continue;
        }
        let mut parsed = Vec::with_capacity(terms.len());
        for (j, t) in terms.iter().enumerate() {
            let tw = format!("{what}.terms[{j}]");
            let Value::Array(triple) = t else {
                return Err(field(tw, "expected [degree, numerator, denominator]"));
            };
            if triple.len() != 3 {
                return Err(field(tw, "expected [degree, numerator, denominator]"));
            }
            let deg = json_int(&tw, &triple[0])?;
            let deg = u32::try_from(deg).map_err(|_| field(&tw, "degree must be nonnegative"))?;
            let num = json_int(&tw, &triple[1])?;
            let den = json_int(&tw, &triple[2])?;
            if den == 0 {
                return Err(field(tw, "zero denominator"));
            }
            parsed.push((deg, BigRational::new(BigInt::from(num), BigInt::from(den))));
        }
        out.push(PowerSeriesValue::truncated(parsed, trunc)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    const DOC: &str = r#"{"d": 1, "m": 2, "r": 1, "I": [1],
        "strata": [{"J": [], "class": "U", "dim": 1},
                   {"J": [1], "class": "E1", "dim": 1},
                   {"J": [2], "class": "E2", "dim": 0},
                   {"J": [1, 2], "class": "P", "dim": 0}],
        "point": {"I_x": [1, 2]},
        "nu": [1, 2], "A": [[1], [2]],
        "a": [1, 1],
        "counts": {"U": 4, "E1": 2, "E2": "1/2", "P": 1}}"#;

    #[test]
    fn full_document() {
        let doc = parse_divisor_document(DOC).unwrap();
        assert_eq!(doc.data.m(), 2);
        assert_eq!(doc.point().unwrap().vertical_component(), Some(0));
        assert_eq!(doc.resolution().unwrap().ell(), 1);
        assert_eq!(doc.volume().unwrap().b(), &[0, 0]);
        assert_eq!(
            doc.counts().unwrap()["E2"],
            BigRational::new(1.into(), 2.into())
        );
    }

    #[test]
    fn field_level_errors() {
        let msg = |text: &str| parse_divisor_document(text).unwrap_err().to_string();
        assert!(msg(r#"{"m": 1, "r": 1}"#).contains("missing field `d`"));
        assert!(msg(r#"{"d": 1, "m": 1, "r": 1, "I": [0]}"#).contains("I[0]"));
        assert!(
            msg(r#"{"d": 1, "m": 1, "r": 1, "strata": [{"J": [], "class": "U"}]}"#)
                .contains("strata[0].dim")
        );
        assert!(msg(r#"{"d": 1, "m": 1, "r": 1, "bogus": 3}"#).contains("bogus"));
    }

    #[test]
    fn series_points() {
        let p = parse_series_point(
            r#"[[[0, 1, 1], [1, 1, 2]], {"zero": true}, {"terms": [[5, 3, 1]]}]"#,
            4,
        )
        .unwrap();
        assert_eq!(p.len(), 3);
        assert_eq!(p[0].trunc(), Some(4));
        assert!(p[1].is_certified_zero());
        assert!(p[2].coeffs().is_empty());
        assert!(parse_series_point(r#"[[[0, 1, 0]]]"#, 4).is_err());
    }
}
