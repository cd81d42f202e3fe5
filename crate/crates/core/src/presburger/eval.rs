//! Direct evaluation of formulas at integer points.
//!
//! Quantifier-free formulas are evaluated atom by atom. A quantifier is
//! decided without elimination in two situations:
//! - its body is quantifier-free: with every other variable fixed the body
//!   is a boolean combination of `a·x + c ≥ 0` and `a·x + c ≡ 0 mod d`, so
//!   between consecutive inequality breakpoints its truth value is periodic
//!   with period the lcm of the moduli and finitely many candidates suffice;
//! - otherwise, when top-level conjuncts of the body bound the variable on
//!   both sides, by search over that range.
//!
//! Anything else is reported as [`PresburgerError::Undecidable`].

use num_integer::Integer;

use super::formula::Formula;
use super::PresburgerError;

/// Largest range searched for a quantified variable.
pub const SEARCH_CAP: i128 = 1 << 16;

/// Truth value of `f` at `point` (`point[j]` is `ℓ_{j+1}`). The point must
/// cover every free variable.
pub fn evaluate(f: &Formula, point: &[i64]) -> Result<bool, PresburgerError> {
    if let Some(&v) = f.free_vars().iter().next_back() {
        if v >= point.len() {
            return Err(PresburgerError::PointTooShort {
                needed: v + 1,
                got: point.len(),
            });
        }
    }
    let mut env: Vec<i64> = point.to_vec();
    if env.len() < f.var_bound() {
        env.resize(f.var_bound(), 0);
    }
    eval_in(f, &mut env)
}

fn eval_in(f: &Formula, env: &mut [i64]) -> Result<bool, PresburgerError> {
    Ok(match f {
        Formula::True => true,
        Formula::False => false,
        Formula::Ge(l) => l.eval(env) >= 0,
        Formula::Mod(l, d) => l.eval(env).mod_floor(&i128::from(*d)) == 0,
        Formula::Not(g) => !eval_in(g, env)?,
        Formula::And(gs) => {
            for g in gs {
                if !eval_in(g, env)? {
                    return Ok(false);
                }
            }
            true
        }
        Formula::Or(gs) => {
            for g in gs {
                if eval_in(g, env)? {
                    return Ok(true);
                }
            }
            false
        }
        Formula::Exists(v, body) => {
            let saved = env[*v];
            let candidates = if body.is_quantifier_free() {
                breakpoint_candidates(body, *v, env)
            } else {
                guarded_range(body, *v, env)?
            };
            let mut found = false;
            for x in candidates {
                env[*v] = x;
                if eval_in(body, env)? {
                    found = true;
                    break;
                }
            }
            env[*v] = saved;
            found
        }
    })
}

/// `(a, c)` for the restriction `a·x + c` of each inequality to `x`.
fn restricted_inequalities(f: &Formula, v: usize, env: &mut [i64], out: &mut Vec<(i128, i128)>) {
    match f {
        Formula::Ge(l) => {
            let a = i128::from(l.coeff(v));
            if a != 0 {
                let saved = env[v];
                env[v] = 0;
                out.push((a, l.eval(env)));
                env[v] = saved;
            }
        }
        Formula::Not(g) => restricted_inequalities(g, v, env, out),
        Formula::And(gs) | Formula::Or(gs) => {
            for g in gs {
                restricted_inequalities(g, v, env, out);
            }
        }
        _ => {}
    }
}

fn moduli_period(f: &Formula, v: usize) -> i128 {
    match f {
        Formula::Mod(l, d) if l.mentions(v) => i128::from(*d),
        Formula::Not(g) => moduli_period(g, v),
        Formula::And(gs) | Formula::Or(gs) => gs.iter().fold(1, |p, g| p.lcm(&moduli_period(g, v))),
        _ => 1,
    }
}

fn breakpoint_candidates(body: &Formula, v: usize, env: &mut [i64]) -> Vec<i64> {
    let mut ineqs = Vec::new();
    restricted_inequalities(body, v, env, &mut ineqs);
    let period = moduli_period(body, v);
    // first x at which each inequality changes value
    let mut starts: Vec<i128> = ineqs
        .iter()
        .map(|&(a, c)| {
            if a > 0 {
                Integer::div_ceil(&(-c), &a)
            } else {
                Integer::div_floor(&c, &(-a)) + 1
            }
        })
        .collect();
    starts.sort_unstable();
    starts.dedup();
    let lowest = starts.first().copied().unwrap_or(0);
    let mut out = Vec::new();
    let mut push = |x: i128| {
        if let Ok(x) = i64::try_from(x) {
            out.push(x);
        }
    };
    for k in 1..=period {
        push(lowest - k);
    }
    for &s in &starts {
        for k in 0..period {
            push(s + k);
        }
    }
    if starts.is_empty() {
        for k in 0..period {
            push(k);
        }
    }
    out
}

fn guarded_range(body: &Formula, v: usize, env: &mut [i64]) -> Result<Vec<i64>, PresburgerError> {
    let conjuncts: Vec<&Formula> = match body {
        Formula::And(gs) => gs.iter().collect(),
        g => vec![g],
    };
    let mut lo: Option<i128> = None;
    let mut hi: Option<i128> = None;
    for g in conjuncts {
        let Formula::Ge(l) = g else { continue };
        let a = i128::from(l.coeff(v));
        if a == 0 {
            continue;
        }
        let saved = env[v];
        env[v] = 0;
        let c = l.eval(env);
        env[v] = saved;
        if a > 0 {
            let b = Integer::div_ceil(&(-c), &a);
            lo = Some(lo.map_or(b, |x| x.max(b)));
        } else {
            let b = Integer::div_floor(&c, &(-a));
            hi = Some(hi.map_or(b, |x| x.min(b)));
        }
    }
    match (lo, hi) {
        (Some(lo), Some(hi)) => {
            if hi < lo {
                return Ok(Vec::new());
            }
            if hi - lo > SEARCH_CAP {
                return Err(PresburgerError::Undecidable(format!(
                    "search range for l{} has {} values",
                    v + 1,
                    hi - lo + 1
                )));
            }
            Ok((lo..=hi).filter_map(|x| i64::try_from(x).ok()).collect())
        }
        _ => Err(PresburgerError::Undecidable(format!(
            "no finite search range for l{}; eliminate quantifiers first",
            v + 1
        ))),
    }
}

/// Points of `[0, bound]^nvars` satisfying the quantifier-free `f`, in
/// lexicographic order.
pub fn enumerate(f: &Formula, nvars: usize, bound: u64) -> Result<Vec<Vec<i64>>, PresburgerError> {
    if !f.is_quantifier_free() {
        return Err(PresburgerError::NotQuantifierFree);
    }
    if let Some(&v) = f.free_vars().iter().next_back() {
        if v >= nvars {
            return Err(PresburgerError::PointTooShort {
                needed: v + 1,
                got: nvars,
            });
        }
    }
    let bound = i64::try_from(bound).map_err(|_| PresburgerError::Overflow)?;
    let mut out = Vec::new();
    let mut point = vec![0i64; nvars];
    loop {
        if eval_in(f, &mut point.clone())? {
            out.push(point.clone());
        }
        let mut j = nvars;
        loop {
            if j == 0 {
                return Ok(out);
            }
            j -= 1;
            if point[j] < bound {
                point[j] += 1;
                break;
            }
            point[j] = 0;
        }
    }
}
