//! Cooper's quantifier elimination.
//!
//! For `∃x ψ` with `ψ` a conjunction in negation normal form:
//! 1. scale every atom so `x` has coefficient `±δ'`, `δ' = lcm |a_x|`,
//!    rename `δ'x` to `x` and conjoin `δ' | x`;
//! 2. with `δ` the lcm of the moduli of congruences on `x`, lower bounds
//!    `x ≥ b` and upper bounds `x ≤ a`, either
//!    `∃x ψ ⇔ ⋁_{j<δ} ψ_{-∞}(j) ∨ ⋁_{b, j<δ} ψ(b + j)` or
//!    `∃x ψ ⇔ ⋁_{j<δ} ψ_{+∞}(-j) ∨ ⋁_{a, j<δ} ψ(a - j)`,
//!    whichever has fewer bounds. `ψ_{±∞}` replaces every inequality on `x`
//!    by its limit value.
//!
//! Disjunctions are split before elimination and conjuncts free of `x` are
//! pulled out of the quantifier.

use num_integer::Integer;

use super::formula::Formula;
use super::linear::LinearForm;
use super::PresburgerError;

/// An equivalent quantifier-free formula over the same free variables.
pub fn eliminate_quantifiers(f: &Formula) -> Result<Formula, PresburgerError> {
    qe(f)?.simplify()
}

/// `∃ var . f` with the quantifier eliminated. Formulas not mentioning `var`
/// are returned normalized.
pub fn project(f: &Formula, var: usize) -> Result<Formula, PresburgerError> {
    eliminate_quantifiers(&Formula::exists(var, f.clone()))
}

fn qe(f: &Formula) -> Result<Formula, PresburgerError> {
    match f {
        Formula::True | Formula::False | Formula::Ge(_) | Formula::Mod(..) => f.simplify(),
        Formula::Not(g) => Formula::not(qe(g)?).simplify(),
        Formula::And(gs) => Formula::And(gs.iter().map(qe).collect::<Result<_, _>>()?).simplify(),
        Formula::Or(gs) => Formula::Or(gs.iter().map(qe).collect::<Result<_, _>>()?).simplify(),
        Formula::Exists(v, body) => cooper(*v, &qe(body)?),
    }
}

fn cooper(x: usize, body: &Formula) -> Result<Formula, PresburgerError> {
    let body = body.nnf()?.simplify()?;
    let disjuncts = match body {
        Formula::Or(gs) => gs,
        g => vec![g],
    };
    let mut out = Vec::with_capacity(disjuncts.len());
    for d in disjuncts {
        let e = cooper_conjunction(x, d)?;
        if e == Formula::True {
            return Ok(Formula::True);
        }
        out.push(e);
    }
    Formula::Or(out).simplify()
}

fn mentions(f: &Formula, x: usize) -> bool {
    f.free_vars().contains(&x)
}

fn cooper_conjunction(x: usize, psi: Formula) -> Result<Formula, PresburgerError> {
    if !mentions(&psi, x) {
        return Ok(psi);
    }
    let conjuncts = match psi {
        Formula::And(gs) => gs,
        g => vec![g],
    };
    let (inner, outer): (Vec<Formula>, Vec<Formula>) =
        conjuncts.into_iter().partition(|g| mentions(g, x));

    let scale = coefficient_lcm(&inner, x);
    let mut inner: Vec<Formula> = inner
        .iter()
        .map(|g| unit_coefficient(g, x, scale))
        .collect::<Result<_, _>>()?;
    if scale > 1 {
        inner.push(Formula::Mod(LinearForm::var(x), scale as u64));
    }
    let psi = Formula::And(inner);

    let mut lower = Vec::new();
    let mut upper = Vec::new();
    collect_bounds(&psi, x, &mut lower, &mut upper)?;
    let delta = moduli_lcm(&psi, x);

    let mut disjuncts = Vec::new();
    let use_lower = lower.len() <= upper.len();
    let limit = limit_formula(&psi, x, use_lower)?.simplify()?;
    for j in 0..delta {
        let at = if use_lower { j } else { -j };
        disjuncts.push(limit.substitute(x, &LinearForm::constant(at))?.simplify()?);
    }
    let bounds = if use_lower { &lower } else { &upper };
    for t in bounds {
        for j in 0..delta {
            let at = t.checked_add_constant(if use_lower { j } else { -j })?;
            let g = psi.substitute(x, &at)?.simplify()?;
            if g == Formula::True {
                return Formula::And(outer).simplify();
            }
            disjuncts.push(g);
        }
    }
    let mut out = outer;
    out.push(Formula::Or(disjuncts));
    Formula::And(out).simplify()
}

fn coefficient_lcm(fs: &[Formula], x: usize) -> i64 {
    fn walk(f: &Formula, x: usize, acc: &mut i64) {
        match f {
            Formula::Ge(l) | Formula::Mod(l, _) => {
                let a = l.coeff(x).abs();
                if a != 0 {
                    *acc = acc.lcm(&a);
                }
            }
            Formula::Not(g) => walk(g, x, acc),
            Formula::And(gs) | Formula::Or(gs) => gs.iter().for_each(|g| walk(g, x, acc)),
            _ => {}
        }
    }
    let mut acc = 1;
    fs.iter().for_each(|f| walk(f, x, &mut acc));
    acc
}

/// Scales each atom so the coefficient of `x` is `±scale`, then renames
/// `scale·x` to `x`.
fn unit_coefficient(f: &Formula, x: usize, scale: i64) -> Result<Formula, PresburgerError> {
    f.map_atoms(&mut |atom| {
        let (l, d) = match atom {
            Formula::Ge(l) => (l, None),
            Formula::Mod(l, d) => (l, Some(*d)),
            _ => unreachable!(),
        };
        let a = l.coeff(x);
        if a == 0 {
            return Ok(atom.clone());
        }
        let k = scale / a.abs();
        let scaled = l.checked_scale(k)?.with_coeff(x, a.signum());
        Ok(match d {
            None => Formula::Ge(scaled),
            Some(d) => {
                let d = d.checked_mul(k as u64).ok_or(PresburgerError::Overflow)?;
                Formula::Mod(scaled, d)
            }
        })
    })
}

/// Lower bounds `x ≥ b` and upper bounds `x ≤ a` of a formula whose
/// inequalities have `x`-coefficient `±1`.
fn collect_bounds(
    f: &Formula,
    x: usize,
    lower: &mut Vec<LinearForm>,
    upper: &mut Vec<LinearForm>,
) -> Result<(), PresburgerError> {
    match f {
        Formula::Ge(l) => match l.coeff(x) {
            1 => {
                let b = l.with_coeff(x, 0).checked_scale(-1)?;
                if !lower.contains(&b) {
                    lower.push(b);
                }
            }
            -1 => {
                let a = l.with_coeff(x, 0);
                if !upper.contains(&a) {
                    upper.push(a);
                }
            }
            _ => {}
        },
        Formula::Not(g) => collect_bounds(g, x, lower, upper)?,
        Formula::And(gs) | Formula::Or(gs) => {
            for g in gs {
                collect_bounds(g, x, lower, upper)?;
            }
        }
        _ => {}
    }
    Ok(())
}

fn moduli_lcm(f: &Formula, x: usize) -> i64 {
    match f {
        Formula::Mod(l, d) if l.mentions(x) => *d as i64,
        Formula::Not(g) => moduli_lcm(g, x),
        Formula::And(gs) | Formula::Or(gs) => {
            gs.iter().fold(1, |acc, g| acc.lcm(&moduli_lcm(g, x)))
        }
        _ => 1,
    }
}

/// `ψ_{-∞}` (`to_minus = true`) or `ψ_{+∞}`.
fn limit_formula(f: &Formula, x: usize, to_minus: bool) -> Result<Formula, PresburgerError> {
    f.map_atoms(&mut |atom| {
        Ok(match atom {
            Formula::Ge(l) if l.mentions(x) => {
                if (l.coeff(x) > 0) == to_minus {
                    Formula::False
                } else {
                    Formula::True
                }
            }
            other => other.clone(),
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presburger::{evaluate, parse_formula};

    fn equivalent_on_box(a: &Formula, b: &Formula, nvars: usize, r: i64) {
        let mut point = vec![-r; nvars];
        loop {
            assert_eq!(
                evaluate(a, &point).unwrap(),
                evaluate(b, &point).unwrap(),
                "{a} vs {b} at {point:?}"
            );
            let mut j = nvars;
            loop {
                if j == 0 {
                    return;
                }
                j -= 1;
                if point[j] < r {
                    point[j] += 1;
                    break;
                }
                point[j] = -r;
            }
        }
    }

    #[test]
    fn even_nonnegative() {
        let f = parse_formula("exists l2 . l1 - 2*l2 = 0 && l2 >= 0").unwrap();
        let g = eliminate_quantifiers(&f).unwrap();
        assert!(g.is_quantifier_free());
        let expected = parse_formula("l1 = 0 mod 2 && l1 >= 0").unwrap();
        equivalent_on_box(&g, &expected, 1, 20);
    }

    #[test]
    fn interval_projection() {
        let f = parse_formula("exists l2 . l2 >= 0 && l1 - l2 >= 0").unwrap();
        let g = eliminate_quantifiers(&f).unwrap();
        equivalent_on_box(&g, &parse_formula("l1 >= 0").unwrap(), 1, 20);
    }

    #[test]
    fn quantifier_free_is_normalized() {
        let f = parse_formula("2*l1 - 3 >= 0").unwrap();
        assert_eq!(
            eliminate_quantifiers(&f).unwrap(),
            parse_formula("l1 - 2 >= 0").unwrap()
        );
    }

    #[test]
    fn nested_and_universal() {
        let f = parse_formula(
            "forall l2 . (l2 < 0 || l2 > 3 || exists l3 . l1 + l2 = 3*l3 && l3 >= 0)",
        )
        .unwrap();
        let g = eliminate_quantifiers(&f).unwrap();
        for x in -12..12i64 {
            let expected = (0..=3).all(|y: i64| (x + y) % 3 == 0 && x + y >= 0);
            assert_eq!(evaluate(&g, &[x]).unwrap(), expected, "{x}: {g}");
        }
    }

    #[test]
    fn projections() {
        let boxed = parse_formula("l1 >= 1 && l1 <= 3 && l2 >= 2 && l2 <= 4").unwrap();
        let p = project(&boxed, 1).unwrap();
        equivalent_on_box(&p, &parse_formula("l1 >= 1 && l1 <= 3").unwrap(), 1, 6);
        assert_eq!(project(&Formula::False, 0).unwrap(), Formula::False);
        let free = parse_formula("l1 >= 2").unwrap();
        assert_eq!(project(&free, 1).unwrap(), free);
    }
}
