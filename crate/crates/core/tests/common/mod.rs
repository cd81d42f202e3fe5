//! Seeded generators shared by the acceptance suite and the property tests.

#![allow(dead_code)]

use std::collections::BTreeMap;

use motivic_core::grothendieck_ring::{
    ClassSymbol, LocalizedMotivicElement, Monomial, MotivicElement, SymbolRegistry,
};
use motivic_core::presburger::{evaluate, Formula, LinearForm};
use motivic_core::semialg_eval::{Condition, Polynomial, PowerSeriesValue};
use motivic_core::snc_zeta::{PointStratumData, SncDivisorData, ZetaCase};
use motivic_core::specialization::ResolutionData;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn random_divisor(rng: &mut ChaCha8Rng, case: Option<ZetaCase>) -> SncDivisorData {
    loop {
        let d = rng.gen_range(1..=3u32);
        let (m, r, vertical): (usize, usize, Vec<usize>) = match case {
            Some(ZetaCase::NoVertical) => (rng.gen_range(1..=4), rng.gen_range(1..=3), vec![]),
            Some(ZetaCase::DivisorIsFiber) => {
                let m = rng.gen_range(1..=3);
                (m, m, (0..m).collect())
            }
            Some(ZetaCase::FiberInDivisor) => {
                let r = rng.gen_range(1..=3);
                let m = rng.gen_range(r + 1..=4);
                let mut idx: Vec<usize> = (0..m).collect();
                idx.shuffle(rng);
                (m, r, idx[..r].to_vec())
            }
            Some(ZetaCase::Mixed) => {
                let r = rng.gen_range(2..=3);
                let m = rng.gen_range(1..=4);
                let k = rng.gen_range(1..=m.min(r - 1));
                let mut idx: Vec<usize> = (0..m).collect();
                idx.shuffle(rng);
                (m, r, idx[..k].to_vec())
            }
            None => {
                let m = rng.gen_range(1..=4);
                let r = rng.gen_range(1..=3);
                let k = rng.gen_range(0..=m.min(r));
                let mut idx: Vec<usize> = (0..m).collect();
                idx.shuffle(rng);
                (m, r, idx[..k].to_vec())
            }
        };
        let mut reg = SymbolRegistry::new();
        let is_vertical = |i: usize| vertical.contains(&i);
        let fiber_is_divisor = m == vertical.len() && m == r;
        let mut strata = Vec::new();
        for bits in 0u32..(1 << m) {
            let j: Vec<usize> = (0..m).filter(|&i| bits & (1 << i) != 0).collect();
            let on_vertical = j.iter().filter(|&&i| is_vertical(i)).count();
            let name = format!("S{bits}");
            let required = fiber_is_divisor && j.len() == 1;
            if on_vertical >= 2 {
                if rng.gen_bool(0.3) {
                    strata.push((j, reg.declare_empty(&name).unwrap()));
                }
                continue;
            }
            if !required && rng.gen_bool(0.2) {
                continue;
            }
            let symbol = if !required && rng.gen_bool(0.1) {
                reg.declare_empty(&name).unwrap()
            } else {
                let dim = rng.gen_range(0..=i64::from(d));
                reg.declare_symbol(&name, dim).unwrap()
            };
            strata.push((j, symbol));
        }
        let mut fibers = Vec::new();
        if !fiber_is_divisor {
            for &i in &vertical {
                if rng.gen_bool(0.85) {
                    let dim = rng.gen_range(0..=i64::from(d));
                    fibers.push((i, reg.declare_symbol(&format!("F{}", i + 1), dim).unwrap()));
                }
            }
        }
        if let Ok(data) = SncDivisorData::new(d, m, r, &vertical, strata, fibers) {
            return data;
        }
    }
}

/// Resolution data over a divisor with at most three components; every row
/// of `A` is nonzero so fibers are finite.
pub fn random_resolution(rng: &mut ChaCha8Rng) -> ResolutionData {
    let base = loop {
        let data = random_divisor(rng, None);
        if data.m() <= 3 {
            break data;
        }
    };
    let m = base.m();
    let ell = rng.gen_range(1..=3usize);
    let nu: Vec<u32> = (0..m).map(|_| rng.gen_range(1..=3)).collect();
    let a: Vec<Vec<u32>> = (0..m)
        .map(|_| loop {
            let row: Vec<u32> = (0..ell).map(|_| rng.gen_range(0..=3)).collect();
            if row.iter().any(|&x| x > 0) {
                break row;
            }
        })
        .collect();
    ResolutionData::new(base, nu, a, ell).unwrap()
}

pub fn random_point(rng: &mut ChaCha8Rng, data: &SncDivisorData) -> Option<PointStratumData> {
    for _ in 0..50 {
        let m = data.m();
        let vertical: Vec<usize> = data.vertical().iter().collect();
        let horizontal: Vec<usize> = data.horizontal().iter().collect();
        let mut comps: Vec<usize> = horizontal
            .iter()
            .copied()
            .filter(|_| rng.gen_bool(0.5))
            .collect();
        if !vertical.is_empty() && (data.vertical().len() == data.r() || rng.gen_bool(0.5)) {
            comps.push(*vertical.choose(rng).unwrap());
        }
        if m == vertical.len() && m == data.r() {
            comps.truncate(1);
        }
        if let Ok(p) = PointStratumData::new(data, &comps, None) {
            return Some(p);
        }
    }
    None
}

pub fn counts_for(rng: &mut ChaCha8Rng, data: &SncDivisorData) -> BTreeMap<String, BigRational> {
    data.strata()
        .values()
        .chain(data.fiber_classes().values())
        .map(|s| (s.name().to_string(), int(rng.gen_range(0..=12))))
        .collect()
}

pub fn random_form(rng: &mut ChaCha8Rng, vars: &[usize], nvars: usize) -> LinearForm {
    loop {
        let mut coeffs = vec![0i64; nvars];
        for &v in vars {
            if rng.gen_bool(0.6) {
                coeffs[v] = rng.gen_range(-4..=4);
            }
        }
        if coeffs.iter().any(|&c| c != 0) {
            return LinearForm::new(coeffs, rng.gen_range(-6..=6));
        }
    }
}

pub fn random_atom(rng: &mut ChaCha8Rng, vars: &[usize], nvars: usize) -> Formula {
    let l = random_form(rng, vars, nvars);
    match rng.gen_range(0..6) {
        0..=2 => Formula::Ge(l),
        3 => Formula::eq_zero(l).unwrap(),
        _ => Formula::congruence(l, rng.gen_range(2..=6)).unwrap(),
    }
}

pub fn random_qf(rng: &mut ChaCha8Rng, vars: &[usize], nvars: usize, depth: u32) -> Formula {
    if depth == 0 || rng.gen_bool(0.3) {
        return random_atom(rng, vars, nvars);
    }
    match rng.gen_range(0..5) {
        0 => Formula::not(random_qf(rng, vars, nvars, depth - 1)),
        1 | 2 => Formula::And(
            (0..rng.gen_range(2..=3))
                .map(|_| random_qf(rng, vars, nvars, depth - 1))
                .collect(),
        ),
        _ => Formula::Or(
            (0..2)
                .map(|_| random_qf(rng, vars, nvars, depth - 1))
                .collect(),
        ),
    }
}

pub fn quantify(rng: &mut ChaCha8Rng, x: usize, body: Formula) -> Formula {
    if rng.gen_bool(0.5) {
        Formula::exists(x, body)
    } else {
        Formula::forall(x, body)
    }
}

/// Formula over `ℓ_1..ℓ_r` with one or two quantifiers and connective depth
/// at most four. Nested quantifiers bound the outer variable explicitly so
/// direct evaluation can search it.
pub fn random_quantified(rng: &mut ChaCha8Rng, r: usize) -> Formula {
    let nvars = r + 2;
    let free: Vec<usize> = (0..r).collect();
    let (x, y) = (r, r + 1);
    let with = |extra: &[usize]| -> Vec<usize> { free.iter().chain(extra).copied().collect() };
    match rng.gen_range(0..4) {
        0 => {
            let body = random_qf(rng, &with(&[x]), nvars, 3);
            quantify(rng, x, body)
        }
        1 => {
            let body = random_qf(rng, &with(&[x]), nvars, 2);
            let q = quantify(rng, x, body);
            let other = random_qf(rng, &free, nvars, 1);
            if rng.gen_bool(0.5) {
                Formula::And(vec![q, other])
            } else {
                Formula::Or(vec![q, other])
            }
        }
        2 => {
            let b1 = random_qf(rng, &with(&[x]), nvars, 2);
            let b2 = random_qf(rng, &with(&[y]), nvars, 2);
            let q1 = quantify(rng, x, b1);
            let q2 = quantify(rng, y, b2);
            if rng.gen_bool(0.5) {
                Formula::And(vec![q1, q2])
            } else {
                Formula::Or(vec![q1, q2])
            }
        }
        _ => {
            let c = rng.gen_range(0..=4);
            let anchor = *free.choose(rng).unwrap();
            let mut lo = vec![0i64; nvars];
            lo[x] = 1;
            lo[anchor] = -1;
            let mut hi = vec![0i64; nvars];
            hi[x] = -1;
            hi[anchor] = 1;
            let inner_body = random_qf(rng, &with(&[x, y]), nvars, 2);
            let inner = quantify(rng, y, inner_body);
            let outer = Formula::exists(
                x,
                Formula::And(vec![
                    Formula::Ge(LinearForm::new(lo, c)),
                    Formula::Ge(LinearForm::new(hi, c)),
                    inner,
                ]),
            );
            if rng.gen_bool(0.5) {
                Formula::not(outer)
            } else {
                outer
            }
        }
    }
}

pub fn each_point(
    r: usize,
    half: i64,
    mut f: impl FnMut(&[i64]) -> Result<(), String>,
) -> Result<(), String> {
    let mut p = vec![-half; r];
    loop {
        f(&p)?;
        let mut j = 0;
        loop {
            if j == r {
                return Ok(());
            }
            if p[j] < half {
                p[j] += 1;
                break;
            }
            p[j] = -half;
            j += 1;
        }
    }
}

pub fn enumerate_gf(
    p: &Formula,
    r: usize,
    lo: i64,
    hi: i64,
    phi: &[LinearForm],
    degree: u32,
) -> Result<BTreeMap<Vec<u32>, BigInt>, String> {
    let mut out: BTreeMap<Vec<u32>, BigInt> = BTreeMap::new();
    let mut pt = vec![lo; r];
    loop {
        if evaluate(p, &pt).map_err(|e| e.to_string())? {
            let e: Vec<i128> = phi.iter().map(|l| l.eval(&pt)).collect();
            if e.iter().any(|&x| x < 0) {
                return Err(format!("negative exponent at {pt:?}"));
            }
            if e.iter().sum::<i128>() <= i128::from(degree) {
                let key = e.iter().map(|&x| x as u32).collect();
                *out.entry(key).or_insert_with(BigInt::zero) += 1;
            }
        }
        let mut j = 0;
        loop {
            if j == r {
                out.retain(|_, v| !v.is_zero());
                return Ok(out);
            }
            if pt[j] < hi {
                pt[j] += 1;
                break;
            }
            pt[j] = lo;
            j += 1;
        }
    }
}

pub fn random_element(rng: &mut ChaCha8Rng, symbols: &[ClassSymbol]) -> MotivicElement {
    let mut x = MotivicElement::zero();
    for _ in 0..rng.gen_range(0..=4) {
        let mut mono = Monomial::one();
        for _ in 0..rng.gen_range(0..=2) {
            mono = mono.mul(&Monomial::single(symbols.choose(rng).unwrap().clone()));
        }
        let term = MotivicElement::monomial_term(
            mono,
            rng.gen_range(-3..=3),
            BigInt::from(rng.gen_range(-5..=5)),
        );
        x = x + term;
    }
    x
}

pub fn random_localized(rng: &mut ChaCha8Rng, symbols: &[ClassSymbol]) -> LocalizedMotivicElement {
    let den: Vec<(u32, u32)> = (0..rng.gen_range(0..=2))
        .map(|_| (rng.gen_range(1..=3), rng.gen_range(1..=2)))
        .collect();
    LocalizedMotivicElement::from_parts(random_element(rng, symbols), den).unwrap()
}

pub fn random_poly(
    rng: &mut ChaCha8Rng,
    slots: usize,
    max_terms: usize,
    max_deg: u32,
) -> Polynomial {
    let terms = rng.gen_range(1..=max_terms);
    Polynomial::new((0..terms).map(|_| {
        let e: Vec<u32> = (0..slots).map(|_| rng.gen_range(0..=max_deg)).collect();
        let c = BigRational::new(
            BigInt::from(rng.gen_range(-4..=4)),
            BigInt::from(rng.gen_range(1..=3)),
        );
        (e, c)
    }))
}

pub fn random_condition(rng: &mut ChaCha8Rng, m: usize, depth: u32) -> Condition {
    if depth == 0 || rng.gen_bool(0.35) {
        let slots = m + 1;
        return match rng.gen_range(0..4) {
            0 => Condition::ord_ge(
                random_poly(rng, slots, 3, 2),
                random_poly(rng, slots, 3, 2),
                LinearForm::new(
                    vec![rng.gen_range(-1..=1), rng.gen_range(-1..=1)],
                    rng.gen_range(-2..=2),
                ),
            ),
            1 => Condition::ord_mod(
                random_poly(rng, slots, 3, 2),
                LinearForm::new(vec![rng.gen_range(-1..=1), 0], rng.gen_range(0..=2)),
                rng.gen_range(1..=3),
            )
            .unwrap(),
            2 => Condition::is_zero(random_poly(rng, slots, 2, 1)),
            _ => {
                let root = int(rng.gen_range(-2..=2));
                let g = Polynomial::var(0).add(&Polynomial::constant(-root));
                let arg = random_poly(rng, slots, 2, 2);
                Condition::ac_zero(g, vec![arg]).unwrap()
            }
        };
    }
    match rng.gen_range(0..3) {
        0 => Condition::Not(Box::new(random_condition(rng, m, depth - 1))),
        1 => Condition::And(
            (0..2)
                .map(|_| random_condition(rng, m, depth - 1))
                .collect(),
        ),
        _ => Condition::Or(
            (0..2)
                .map(|_| random_condition(rng, m, depth - 1))
                .collect(),
        ),
    }
}

/// An exact series of degree below 20, or the certified zero.
pub fn random_series(rng: &mut ChaCha8Rng) -> Vec<(u32, BigRational)> {
    if rng.gen_bool(0.1) {
        return vec![];
    }
    let start = rng.gen_range(0..=6);
    let mut terms = vec![(start, int(*[-2, -1, 1, 2, 3].choose(rng).unwrap()))];
    for k in start + 1..20 {
        if rng.gen_bool(0.3) {
            terms.push((k, int(rng.gen_range(-3..=3))));
        }
    }
    terms
}

pub fn truncate_point(
    exact: &[Vec<(u32, BigRational)>],
    trunc: Option<u32>,
) -> Vec<PowerSeriesValue> {
    exact
        .iter()
        .map(|terms| match trunc {
            Some(n) if !terms.is_empty() => {
                PowerSeriesValue::truncated(terms.iter().filter(|(k, _)| *k < n).cloned(), n)
                    .unwrap()
            }
            _ => PowerSeriesValue::exact(terms.iter().cloned()),
        })
        .collect()
}
