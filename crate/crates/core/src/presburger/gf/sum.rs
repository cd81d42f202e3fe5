//! Summation of `X^{φ(ℓ)}` over a cube by eliminating one variable at a
//! time. Each piece eliminates next the variable with the fewest branches,
//! and variables pinned by an equality are substituted directly.
//!
//! A piece is a cube together with a list of terms
//! `w(ℓ) · X^{e(ℓ)} · R`, with `w` a polynomial, `e` affine and `R` a fixed
//! rational function; the piece stands for the sum of its terms over the
//! integer points of the cube. Eliminating `x`:
//! 1. split `x` by residues so that no congruence mentions it and the
//!    exponent is integral in `x`;
//! 2. branch on which lower and which upper inequality is binding, fixing
//!    the residues of the bounds so they are affine in the other variables;
//! 3. sum each term over `lo ≤ x ≤ hi` in closed form: power sums when the
//!    exponent does not depend on `x`, otherwise derivatives of geometric
//!    series.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::cells::Cube;
use super::irf::IntegerRationalFunction;
use super::poly::{
    binomial_row, eulerian_numerator, lp_add_term, power_sum_polynomial, q, AffineQ, LPoly,
    LaurentRational, QPoly,
};
use crate::presburger::{eliminate_quantifiers, Formula, LinearForm, PresburgerError};

#[derive(Clone, Debug)]
struct Term {
    weight: QPoly,
    exponent: Vec<AffineQ>,
    factor: LaurentRational,
}

#[derive(Clone, Debug)]
struct Piece {
    ges: Vec<LinearForm>,
    mods: Vec<(LinearForm, u64)>,
    terms: Vec<Term>,
    /// Bit `j` is set while `ℓ_{j+1}` has not been summed out.
    remaining: u64,
}

/// `Σ_{ℓ ∈ cube} X^{φ(ℓ)}` as a rational function.
pub(crate) fn sum_cubes(
    cubes: Vec<Cube>,
    nvars: usize,
    phi: &[LinearForm],
) -> Result<IntegerRationalFunction, PresburgerError> {
    let s = phi.len();
    let start = Term {
        weight: QPoly::one(nvars),
        exponent: phi.iter().map(|l| AffineQ::from_linear(l, nvars)).collect(),
        factor: LaurentRational::one(s),
    };
    if nvars > 64 {
        return Err(PresburgerError::Unsupported(format!(
            "{nvars} variables (at most 64)"
        )));
    }
    let all = if nvars == 64 {
        u64::MAX
    } else {
        (1u64 << nvars) - 1
    };
    let mut work: Vec<Piece> = cubes
        .into_iter()
        .filter(|c| plausible(&c.ges, &c.mods))
        .map(|c| Piece {
            ges: c.ges,
            mods: c.mods,
            terms: vec![start.clone()],
            remaining: all,
        })
        .collect();
    let mut done = Vec::new();
    while let Some(p) = work.pop() {
        let Some(p) = normalize(p)? else { continue };
        if p.remaining == 0 {
            done.push(p);
            continue;
        }
        if let Some((l, x)) = equality(&p) {
            work.push(pin(p, &l, x)?);
            continue;
        }
        let x = cheapest_variable(&p)?;
        for split in residue_split(p, x)? {
            let Some(split) = normalize(split)? else {
                continue;
            };
            eliminate(split, x, &mut work)?;
        }
    }
    finalize(done, s)
}

/// An equality `l = 0` among the inequalities, with the variable of smallest
/// coefficient to solve for.
fn equality(p: &Piece) -> Option<(LinearForm, usize)> {
    for (i, l) in p.ges.iter().enumerate() {
        let opposite = p.ges[i + 1..].iter().any(|m| {
            l.checked_add(m)
                .is_ok_and(|s| s.is_constant() && s.constant_term() == 0)
        });
        if !opposite {
            continue;
        }
        let x = (0..l.coeffs().len())
            .rev()
            .filter(|&j| l.coeff(j) != 0)
            .min_by_key(|&j| l.coeff(j).unsigned_abs())?;
        return Some((l.clone(), x));
    }
    None
}

/// Sums out `x` over the single point where `a x + R = 0`: substitutes
/// `x := -R/a` and keeps the condition `a | R`.
fn pin(p: Piece, l: &LinearForm, x: usize) -> Result<Piece, PresburgerError> {
    let a = l.coeff(x);
    let r = l.with_coeff(x, 0);
    let m = a.abs();
    // m (b x + S) = m S - sgn(a) b R
    let solve = |f: &LinearForm| -> Result<LinearForm, PresburgerError> {
        let b = f.coeff(x);
        f.with_coeff(x, 0)
            .checked_scale(m)?
            .checked_add(&r.checked_scale(-a.signum() * b)?)
    };
    let ges = p.ges.iter().map(solve).collect::<Result<_, _>>()?;
    let mut mods = p
        .mods
        .iter()
        .map(|(f, d)| {
            let d = d.checked_mul(m as u64).ok_or(PresburgerError::Overflow)?;
            Ok((solve(f)?, d))
        })
        .collect::<Result<Vec<_>, PresburgerError>>()?;
    if m > 1 {
        mods.push((r.clone(), m as u64));
    }
    let nvars = p.terms.first().map_or(0, |t| t.weight.nvars());
    let value =
        AffineQ::from_linear(&r, nvars).scale(&BigRational::new(BigInt::from(-1), BigInt::from(a)));
    let terms = p
        .terms
        .iter()
        .map(|t| Term {
            weight: t.weight.substitute(x, &value),
            exponent: t.exponent.iter().map(|e| e.substitute(x, &value)).collect(),
            factor: t.factor.clone(),
        })
        .collect();
    Ok(Piece {
        ges,
        mods,
        terms: merge(terms),
        remaining: p.remaining & !(1 << x),
    })
}

/// The remaining variable whose elimination is estimated to create the
/// fewest pieces: residue classes times lower choices times upper choices.
fn cheapest_variable(p: &Piece) -> Result<usize, PresburgerError> {
    let mut best: Option<(u128, usize)> = None;
    for x in (0..64).rev().filter(|&x| p.remaining & (1 << x) != 0) {
        let d = split_modulus(p, x)?;
        let (mut lower, mut upper) = (0u128, 0u128);
        for l in &p.ges {
            let a = l.coeff(x);
            if a == 0 {
                continue;
            }
            let scaled = i128::from(a) * i128::from(d);
            let g = l
                .coeffs()
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != x)
                .fold(scaled, |g, (_, &c)| g.gcd(&i128::from(c)));
            let k = (scaled / g).unsigned_abs();
            if a > 0 {
                lower += k;
            } else {
                upper += k;
            }
        }
        let cost = u128::from(d.unsigned_abs())
            .saturating_mul(lower.max(1))
            .saturating_mul(upper.max(1));
        if best.is_none_or(|(c, _)| cost < c) {
            best = Some((cost, x));
        }
    }
    Ok(best.expect("a remaining variable").1)
}

fn rat_to_i64(v: &BigRational) -> Result<i64, PresburgerError> {
    if !v.is_integer() {
        return Err(PresburgerError::Unsupported(format!(
            "non-integral exponent {v}"
        )));
    }
    v.to_integer().to_i64().ok_or(PresburgerError::Overflow)
}

/// Drops ground constraints, divides inequalities by their content and
/// reduces congruence coefficients. `None` if a ground constraint fails.
fn normalize(mut p: Piece) -> Result<Option<Piece>, PresburgerError> {
    let mut ges = Vec::new();
    for l in p.ges {
        if l.is_constant() {
            if l.constant_term() < 0 {
                return Ok(None);
            }
            continue;
        }
        let g = l.content();
        let l = if g > 1 {
            LinearForm::new(
                l.coeffs().iter().map(|a| a / g).collect(),
                Integer::div_floor(&l.constant_term(), &g),
            )
        } else {
            l
        };
        if !ges.contains(&l) {
            ges.push(l);
        }
    }
    let mut mods = Vec::new();
    for (l, d) in p.mods {
        let di = i64::try_from(d).map_err(|_| PresburgerError::Overflow)?;
        let l = LinearForm::new(
            l.coeffs().iter().map(|a| a.rem_euclid(di)).collect(),
            l.constant_term().rem_euclid(di),
        );
        if l.is_constant() {
            if l.constant_term() != 0 {
                return Ok(None);
            }
            continue;
        }
        if !mods.contains(&(l.clone(), d)) {
            mods.push((l, d));
        }
    }
    p.ges = ges;
    p.mods = mods;
    Ok(Some(p))
}

/// The step `D` of [`residue_split`] for `x`.
fn split_modulus(p: &Piece, x: usize) -> Result<i64, PresburgerError> {
    let mut big_d: i64 = 1;
    for (l, d) in &p.mods {
        let a = l.coeff(x);
        if a != 0 {
            let d = *d as i64;
            big_d = big_d.lcm(&(d / d.gcd(&a)));
        }
    }
    for t in &p.terms {
        for e in &t.exponent {
            let den = e.coeffs[x]
                .denom()
                .to_i64()
                .ok_or(PresburgerError::Overflow)?;
            big_d = big_d.lcm(&den);
        }
    }
    Ok(big_d)
}

/// Substitutes `x := D·x + τ` for each `τ < D`, with `D` chosen so that
/// afterwards no congruence mentions `x` and every exponent has integral
/// `x`-coefficient.
fn residue_split(p: Piece, x: usize) -> Result<Vec<Piece>, PresburgerError> {
    let big_d = split_modulus(&p, x)?;
    if big_d == 1 {
        return Ok(vec![p]);
    }
    let nvars = p.terms.first().map_or(0, |t| t.weight.nvars());
    // congruences in x alone decide a residue without substituting
    let own: Vec<(i128, i128, i128)> = p
        .mods
        .iter()
        .filter(|(l, _)| {
            l.coeffs()
                .iter()
                .enumerate()
                .all(|(j, &a)| j == x || a == 0)
        })
        .map(|(l, d)| {
            (
                i128::from(l.coeff(x)),
                i128::from(l.constant_term()),
                i128::from(*d),
            )
        })
        .collect();
    let mut out = Vec::new();
    for tau in 0..big_d {
        let t = i128::from(tau);
        if own.iter().any(|&(a, c, d)| (a * t + c).rem_euclid(d) != 0) {
            continue;
        }
        let value = LinearForm::var(x)
            .checked_scale(big_d)?
            .checked_add_constant(tau)?;
        let mut value_q = AffineQ::constant(nvars, q(tau));
        value_q.coeffs[x] = q(big_d);
        let ges = p
            .ges
            .iter()
            .map(|l| l.substitute(x, &value))
            .collect::<Result<_, _>>()?;
        let mods = p
            .mods
            .iter()
            .map(|(l, d)| {
                let l = l.substitute(x, &value)?;
                // the x-coefficient is now a multiple of d
                Ok((l.with_coeff(x, 0), *d))
            })
            .collect::<Result<_, PresburgerError>>()?;
        // most residues contradict a congruence; skip them before
        // substituting into the terms
        let bare = Piece {
            ges,
            mods,
            terms: Vec::new(),
            remaining: p.remaining,
        };
        let Some(bare) = normalize(bare)? else {
            continue;
        };
        if !plausible(&bare.ges, &bare.mods) {
            continue;
        }
        let terms = p
            .terms
            .iter()
            .map(|t| Term {
                weight: t.weight.substitute(x, &value_q),
                exponent: t
                    .exponent
                    .iter()
                    .map(|e| e.substitute(x, &value_q))
                    .collect(),
                factor: t.factor.clone(),
            })
            .collect();
        out.push(Piece { terms, ..bare });
    }
    Ok(out)
}

fn piece_formula(ges: &[LinearForm], mods: &[(LinearForm, u64)]) -> Formula {
    let mut parts: Vec<Formula> = ges.iter().cloned().map(Formula::Ge).collect();
    parts.extend(mods.iter().map(|(l, d)| Formula::Mod(l.clone(), *d)));
    Formula::And(parts)
}

/// Whether the constraints have an integer solution.
pub(crate) fn feasible(
    ges: &[LinearForm],
    mods: &[(LinearForm, u64)],
) -> Result<bool, PresburgerError> {
    let mut f = piece_formula(ges, mods);
    for v in f.free_vars().into_iter().rev() {
        f = Formula::exists(v, f);
    }
    Ok(eliminate_quantifiers(&f)? == Formula::True)
}

/// Cheap feasibility filter: exact when the constraints mention at most one
/// variable, the Fourier-Motzkin test on the inequalities otherwise.
fn plausible(ges: &[LinearForm], mods: &[(LinearForm, u64)]) -> bool {
    let mut vars = ges.iter().chain(mods.iter().map(|(l, _)| l)).flat_map(|l| {
        l.coeffs()
            .iter()
            .enumerate()
            .filter(|&(_, &a)| a != 0)
            .map(|(j, _)| j)
    });
    let Some(x) = vars.next() else {
        return true;
    };
    if vars.any(|j| j != x) {
        return maybe_feasible(ges);
    }
    univariate_feasible(ges, mods, x).unwrap_or(true)
}

/// Scans one period of the congruences inside the interval cut out by the
/// inequalities. `None` when the period is too long to scan.
fn univariate_feasible(ges: &[LinearForm], mods: &[(LinearForm, u64)], x: usize) -> Option<bool> {
    const MAX_PERIOD: i128 = 1 << 16;
    let (mut lo, mut hi): (Option<i128>, Option<i128>) = (None, None);
    for l in ges {
        let a = i128::from(l.coeff(x));
        let c = i128::from(l.constant_term());
        // a x + c ≥ 0
        if a > 0 {
            let b = Integer::div_ceil(&-c, &a);
            lo = Some(lo.map_or(b, |v| v.max(b)));
        } else {
            let b = Integer::div_floor(&c, &-a);
            hi = Some(hi.map_or(b, |v| v.min(b)));
        }
    }
    let period = mods.iter().try_fold(1i128, |m, (_, d)| {
        let m = m.lcm(&i128::from(*d));
        (m <= MAX_PERIOD).then_some(m)
    })?;
    let start = lo.or(hi.map(|h| h - period + 1)).unwrap_or(0);
    let end = hi.map_or(start + period - 1, |h| h.min(start + period - 1));
    Some((start..=end).any(|v| {
        mods.iter().all(|(l, d)| {
            (i128::from(l.coeff(x)) * v + i128::from(l.constant_term())).rem_euclid(i128::from(*d))
                == 0
        })
    }))
}

/// Fourier-Motzkin elimination with integer tightening. `false` only when
/// the inequalities have no integer solution; gives up with `true` when the
/// system grows too large or coefficients overflow.
pub(crate) fn maybe_feasible(ges: &[LinearForm]) -> bool {
    const MAX_ROWS: usize = 400;
    let mut rows: Vec<(Vec<i128>, i128)> = ges
        .iter()
        .map(|l| {
            (
                l.coeffs().iter().map(|&a| i128::from(a)).collect(),
                i128::from(l.constant_term()),
            )
        })
        .collect();
    let nvars = rows.iter().map(|r| r.0.len()).max().unwrap_or(0);
    for r in &mut rows {
        r.0.resize(nvars, 0);
    }
    loop {
        let mut tight: Vec<(Vec<i128>, i128)> = Vec::with_capacity(rows.len());
        for (a, c) in rows {
            let g = a.iter().fold(0i128, |g, &x| g.gcd(&x));
            if g == 0 {
                if c < 0 {
                    return false;
                }
                continue;
            }
            let row = (
                a.iter().map(|x| x / g).collect(),
                Integer::div_floor(&c, &g),
            );
            if !tight.contains(&row) {
                tight.push(row);
            }
        }
        rows = tight;
        let pick = (0..nvars)
            .filter_map(|v| {
                let pos = rows.iter().filter(|r| r.0[v] > 0).count();
                let neg = rows.iter().filter(|r| r.0[v] < 0).count();
                (pos + neg > 0).then_some((pos * neg, v))
            })
            .min();
        let Some((_, v)) = pick else { return true };
        let (with, mut next): (Vec<_>, Vec<_>) = rows.into_iter().partition(|r| r.0[v] != 0);
        for p in with.iter().filter(|r| r.0[v] > 0) {
            for n in with.iter().filter(|r| r.0[v] < 0) {
                let (a, b) = (p.0[v], -n.0[v]);
                let combine = |x: i128, y: i128| b.checked_mul(x)?.checked_add(a.checked_mul(y)?);
                let coeffs: Option<Vec<i128>> =
                    p.0.iter().zip(&n.0).map(|(&x, &y)| combine(x, y)).collect();
                match (coeffs, combine(p.1, n.1)) {
                    (Some(coeffs), Some(c)) => next.push((coeffs, c)),
                    _ => return true,
                }
            }
        }
        if next.len() > MAX_ROWS {
            return true;
        }
        rows = next;
    }
}

fn eliminate(p: Piece, x: usize, out: &mut Vec<Piece>) -> Result<(), PresburgerError> {
    let (bounds, rest): (Vec<LinearForm>, Vec<LinearForm>) =
        p.ges.iter().cloned().partition(|l| l.mentions(x));
    let lowers: Vec<&LinearForm> = bounds.iter().filter(|l| l.coeff(x) > 0).collect();
    let uppers: Vec<&LinearForm> = bounds.iter().filter(|l| l.coeff(x) < 0).collect();

    if p.terms.iter().all(|t| t.weight.is_zero()) {
        return Ok(());
    }
    if lowers.is_empty() && uppers.is_empty() {
        return unbounded(&p, x);
    }

    // every lower choice (or a single "none")
    let lower_choices: Vec<Option<(usize, i64)>> = if lowers.is_empty() {
        vec![None]
    } else {
        lowers
            .iter()
            .enumerate()
            .flat_map(|(i, l)| (0..l.coeff(x)).map(move |rho| Some((i, rho))))
            .collect()
    };
    let upper_choices: Vec<Option<(usize, i64)>> = if uppers.is_empty() {
        vec![None]
    } else {
        uppers
            .iter()
            .enumerate()
            .flat_map(|(j, l)| (0..-l.coeff(x)).map(move |sigma| Some((j, sigma))))
            .collect()
    };

    let nvars = p.terms[0].weight.nvars();
    for lc in &lower_choices {
        for uc in &upper_choices {
            let mut ges = rest.clone();
            let mut mods = p.mods.clone();
            let mut lo = None;
            let mut hi = None;
            if let Some((i, rho)) = *lc {
                let a = lowers[i].coeff(x);
                let r = lowers[i].with_coeff(x, 0);
                mods.push((r.checked_add_constant(-rho)?, a as u64));
                for (j, lj) in lowers.iter().enumerate() {
                    if j == i {
                        continue;
                    }
                    let aj = lj.coeff(x);
                    let rj = lj.with_coeff(x, 0);
                    let strict = if j < i { a } else { 0 };
                    // a_j (ρ - R - a [j<i]) + a R_j ≥ 0
                    let c = r
                        .checked_scale(-aj)?
                        .checked_add(&rj.checked_scale(a)?)?
                        .checked_add_constant(
                            aj.checked_mul(rho - strict)
                                .ok_or(PresburgerError::Overflow)?,
                        )?;
                    ges.push(c);
                }
                let mut v =
                    AffineQ::from_linear(&r.checked_scale(-1)?.checked_add_constant(rho)?, nvars);
                v = v.scale(&BigRational::new(BigInt::one(), BigInt::from(a)));
                lo = Some((v, r, a, rho));
            }
            if let Some((j0, sigma)) = *uc {
                let b = -uppers[j0].coeff(x);
                let s = uppers[j0].with_coeff(x, 0);
                mods.push((s.checked_add_constant(-sigma)?, b as u64));
                for (j, uj) in uppers.iter().enumerate() {
                    if j == j0 {
                        continue;
                    }
                    let bj = -uj.coeff(x);
                    let sj = uj.with_coeff(x, 0);
                    let strict = if j < j0 { b } else { 0 };
                    // -b_j (S - σ + b [j<j0]) + b S_j ≥ 0
                    let c = s
                        .checked_scale(-bj)?
                        .checked_add(&sj.checked_scale(b)?)?
                        .checked_add_constant(
                            bj.checked_mul(sigma - strict)
                                .ok_or(PresburgerError::Overflow)?,
                        )?;
                    ges.push(c);
                }
                let mut v = AffineQ::from_linear(&s.checked_add_constant(-sigma)?, nvars);
                v = v.scale(&BigRational::new(BigInt::one(), BigInt::from(b)));
                hi = Some((v, s, b));
            }
            if let (Some((_, r, a, rho)), Some((_, s, b))) = (&lo, &hi) {
                // lo ≤ hi: -b (ρ - R) + a S ≥ 0
                let c = s
                    .checked_scale(*a)?
                    .checked_add(&r.checked_scale(*b)?)?
                    .checked_add_constant(b.checked_mul(-*rho).ok_or(PresburgerError::Overflow)?)?;
                ges.push(c);
            }
            let sub = Piece {
                ges,
                mods,
                terms: Vec::new(),
                remaining: p.remaining & !(1 << x),
            };
            let Some(mut sub) = normalize(sub)? else {
                continue;
            };
            if !plausible(&sub.ges, &sub.mods) {
                continue;
            }
            let lo = lo.map(|t| t.0);
            let hi = hi.map(|t| t.0);
            let mut terms = Vec::new();
            for t in &p.terms {
                match sum_term(t, x, lo.as_ref(), hi.as_ref())? {
                    Some(ts) => terms.extend(ts),
                    None => return Err(diverges(x)),
                }
            }
            sub.terms = merge(terms);
            if !sub.terms.is_empty() {
                out.push(sub);
            }
        }
    }
    Ok(())
}

fn diverges(x: usize) -> PresburgerError {
    PresburgerError::InfiniteFiber(format!(
        "sum over l{} does not converge to a power series",
        x + 1
    ))
}

fn unbounded(p: &Piece, x: usize) -> Result<(), PresburgerError> {
    if feasible(&p.ges, &p.mods)? {
        Err(diverges(x))
    } else {
        Ok(())
    }
}

/// Sum of one term over `lo ≤ x ≤ hi`; `None` when the sum diverges.
fn sum_term(
    t: &Term,
    x: usize,
    lo: Option<&AffineQ>,
    hi: Option<&AffineQ>,
) -> Result<Option<Vec<Term>>, PresburgerError> {
    let c: Vec<i64> = t
        .exponent
        .iter()
        .map(|e| rat_to_i64(&e.coeffs[x]))
        .collect::<Result<_, _>>()?;
    let w = t.weight.coefficients_in(x);
    if c.iter().all(|&v| v == 0) {
        let (Some(lo), Some(hi)) = (lo, hi) else {
            return Ok(None);
        };
        let lo_minus = lo.add_constant(&q(-1));
        let mut weight = QPoly::constant(t.weight.nvars(), BigRational::zero());
        for (p, wp) in w.iter().enumerate() {
            if wp.is_zero() {
                continue;
            }
            let f = power_sum_polynomial(p as u32);
            let diff = QPoly::compose_univariate(&f, hi)
                .add(&QPoly::compose_univariate(&f, &lo_minus).scale(&q(-1)));
            weight = weight.add(&wp.mul(&diff));
        }
        let mut exponent = t.exponent.clone();
        for e in &mut exponent {
            e.coeffs[x] = BigRational::zero();
        }
        return Ok(Some(vec![Term {
            weight,
            exponent,
            factor: t.factor.clone(),
        }]));
    }
    let nonneg = c.iter().all(|&v| v >= 0);
    let nonpos = c.iter().all(|&v| v <= 0);
    match (lo, hi) {
        (Some(lo), Some(hi)) => {
            let mut out = geometric_tail(t, x, &w, lo, &c, false)?;
            let hi1 = hi.add_constant(&q(1));
            let neg: Vec<Term> = geometric_tail(t, x, &w, &hi1, &c, false)?
                .into_iter()
                .map(|mut u| {
                    u.weight = u.weight.scale(&q(-1));
                    u
                })
                .collect();
            out.extend(neg);
            Ok(Some(out))
        }
        (Some(lo), None) if nonneg => Ok(Some(geometric_tail(t, x, &w, lo, &c, false)?)),
        (None, Some(hi)) if nonpos => {
            // Σ_{x ≤ hi} x^p Y^x = Σ_{u ≥ -hi} (-u)^p (Y^{-1})^u
            let neg_hi = hi.scale(&q(-1));
            let neg_c: Vec<i64> = c.iter().map(|v| -v).collect();
            Ok(Some(geometric_tail(t, x, &w, &neg_hi, &neg_c, true)?))
        }
        _ => Ok(None),
    }
}

/// `Σ_{x ≥ a} Σ_p w_p (±x)^p X^{e_0 + c x}` as terms, using
/// `Σ_{u≥0} u^t Y^u = E_t(Y)/(1 - Y)^{t+1}`. With `reflect`, `x^p` carries
/// the sign `(-1)^p`.
fn geometric_tail(
    t: &Term,
    x: usize,
    w: &[QPoly],
    a: &AffineQ,
    c: &[i64],
    reflect: bool,
) -> Result<Vec<Term>, PresburgerError> {
    let nvars = t.weight.nvars();
    // exponent at x = a
    let exponent: Vec<AffineQ> = t
        .exponent
        .iter()
        .zip(c)
        .map(|(e, &ck)| {
            let mut e0 = e.clone();
            e0.coeffs[x] = BigRational::zero();
            e0.add(&a.scale(&q(ck)))
        })
        .collect();
    let a_poly = QPoly::from_affine(a);
    let maxp = w.len();
    let mut a_pows = vec![QPoly::one(nvars)];
    for k in 1..maxp {
        a_pows.push(a_pows[k - 1].mul(&a_poly));
    }
    let mut out = Vec::new();
    for tt in 0..maxp {
        // Σ_{p ≥ t} w_p C(p, t) a^{p-t}
        let mut weight = QPoly::constant(nvars, BigRational::zero());
        for (p, wp) in w.iter().enumerate().skip(tt) {
            if wp.is_zero() {
                continue;
            }
            let binom = BigRational::from_integer(binomial_row(p as u32)[tt].clone());
            let sign = if reflect && p % 2 == 1 { q(-1) } else { q(1) };
            weight = weight.add(&wp.mul(&a_pows[p - tt]).scale(&(binom * sign)));
        }
        if weight.is_zero() {
            continue;
        }
        let mut e_t = LPoly::new();
        for (i, coef) in eulerian_numerator(tt as u32).into_iter().enumerate() {
            let e: Vec<i64> = c.iter().map(|&ck| ck * i as i64).collect();
            lp_add_term(&mut e_t, e, BigRational::from_integer(coef));
        }
        let factor = t.factor.mul_poly(&e_t).with_atom(c.to_vec(), tt as u32 + 1);
        out.push(Term {
            weight,
            exponent: exponent.clone(),
            factor,
        });
    }
    Ok(out)
}

fn merge(terms: Vec<Term>) -> Vec<Term> {
    let mut out: Vec<Term> = Vec::new();
    for t in terms {
        if t.weight.is_zero() || t.factor.num.is_empty() {
            continue;
        }
        if let Some(u) = out
            .iter_mut()
            .find(|u| u.exponent == t.exponent && u.factor == t.factor)
        {
            u.weight = u.weight.add(&t.weight);
        } else {
            out.push(t);
        }
    }
    out.retain(|t| !t.weight.is_zero());
    out
}

fn finalize(pieces: Vec<Piece>, s: usize) -> Result<IntegerRationalFunction, PresburgerError> {
    let mut groups: BTreeMap<Vec<(Vec<i64>, u32)>, LPoly> = BTreeMap::new();
    for p in pieces {
        let Some(p) = normalize(p)? else { continue };
        if !p.ges.is_empty() || !p.mods.is_empty() {
            return Err(PresburgerError::Internal(
                "constraints left after elimination".into(),
            ));
        }
        for t in p.terms {
            let w = t
                .weight
                .constant_value()
                .ok_or_else(|| PresburgerError::Internal("weight not constant".into()))?;
            let e: Vec<i64> = t
                .exponent
                .iter()
                .map(|a| rat_to_i64(&a.constant))
                .collect::<Result<_, _>>()?;
            let mut mono = LPoly::new();
            lp_add_term(&mut mono, e, w);
            let f = t.factor.mul_poly(&mono).orient_atoms();
            let key: Vec<(Vec<i64>, u32)> = f.den.iter().map(|(c, k)| (c.clone(), *k)).collect();
            let slot = groups.entry(key).or_default();
            for (e, v) in f.num {
                lp_add_term(slot, e, v);
            }
        }
    }
    let mut total = LaurentRational::zero();
    for (den, num) in groups {
        if num.is_empty() {
            continue;
        }
        let mut f = LaurentRational {
            num,
            den: den.into_iter().collect(),
        };
        f.cancel();
        total = total.add(&f);
    }
    total.cancel();
    if total.den.keys().any(|c| c.iter().any(|&v| v < 0)) {
        return Err(PresburgerError::Unsupported(
            "exponent map has no common positive direction".into(),
        ));
    }
    let mut num = Vec::new();
    for (e, v) in &total.num {
        if !v.is_integer() || e.iter().any(|&x| x < 0) {
            return Err(PresburgerError::Internal(
                "generating function is not an integer power series".into(),
            ));
        }
        num.push((
            e.iter().map(|&x| x as u32).collect::<Vec<u32>>(),
            v.to_integer(),
        ));
    }
    let den: Vec<(Vec<u32>, u32)> = total
        .den
        .iter()
        .map(|(c, k)| (c.iter().map(|&x| x as u32).collect(), *k))
        .collect();
    IntegerRationalFunction::new(s, num, den)
}
