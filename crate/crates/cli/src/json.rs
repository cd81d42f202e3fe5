//! Machine-readable output of the internal representations.

use motivic_core::grothendieck_ring::{LocalizedMotivicElement, MotivicElement};
use motivic_core::presburger::IntegerRationalFunction;
use motivic_core::rational_series::MotivicRationalFunction;
use serde_json::{json, Value};

pub fn element(x: &MotivicElement) -> Value {
    let terms: Vec<Value> = x
        .terms()
        .map(|(k, c)| {
            let symbols: Vec<Value> = k
                .monomial
                .factors()
                .iter()
                .map(|(s, e)| json!({"name": s.name(), "power": e}))
                .collect();
            json!({"symbols": symbols, "l_exp": k.l_exp, "coeff": c.to_string()})
        })
        .collect();
    Value::Array(terms)
}

pub fn localized(x: &LocalizedMotivicElement) -> Value {
    let den: Vec<Value> = x
        .den()
        .iter()
        .map(|(i, k)| json!({"i": i, "power": k}))
        .collect();
    json!({"num": element(x.num()), "den": den, "text": x.to_string()})
}

pub fn rational_function(f: &MotivicRationalFunction) -> Value {
    let num: Vec<Value> = f
        .num()
        .iter()
        .map(|(e, c)| json!({"exponent": e, "coeff": localized(c)}))
        .collect();
    let den: Vec<Value> = f
        .den()
        .iter()
        .map(|(atom, k)| json!({"a": atom.a(), "b": atom.b(), "power": k}))
        .collect();
    json!({"nvars": f.nvars(), "num": num, "den": den, "text": f.to_string()})
}

pub fn integer_rational_function(f: &IntegerRationalFunction) -> Value {
    let num: Vec<Value> = f
        .num()
        .iter()
        .map(|(e, c)| json!({"exponent": e, "coeff": c.to_string()}))
        .collect();
    let den: Vec<Value> = f
        .den()
        .iter()
        .map(|(c, k)| json!({"exponent": c, "power": k}))
        .collect();
    json!({"nvars": f.nvars(), "num": num, "den": den, "text": f.to_string()})
}
