use std::collections::{BTreeSet, HashSet};
use std::fmt;

use num_integer::Integer;

use super::linear::LinearForm;
use super::PresburgerError;

/// A Presburger formula over the variables `ℓ_1, ℓ_2, …` (indices from 0).
///
/// `Ge(L)` is the inequality `L ≥ 0` and `Mod(L, d)` the congruence
/// `L ≡ 0 mod d` with `d ≥ 1`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    True,
    False,
    Ge(LinearForm),
    Mod(LinearForm, u64),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Exists(usize, Box<Formula>),
}

impl Formula {
    pub fn ge(l: LinearForm) -> Self {
        Formula::Ge(l)
    }

    /// `L ≡ 0 mod d`; errors on `d = 0`.
    pub fn congruence(l: LinearForm, d: u64) -> Result<Self, PresburgerError> {
        if d == 0 {
            return Err(PresburgerError::ZeroModulus);
        }
        Ok(Formula::Mod(l, d))
    }

    /// `L = 0`, as two inequalities.
    pub fn eq_zero(l: LinearForm) -> Result<Self, PresburgerError> {
        let neg = l.checked_scale(-1)?;
        Ok(Formula::And(vec![Formula::Ge(l), Formula::Ge(neg)]))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn exists(var: usize, body: Formula) -> Self {
        Formula::Exists(var, Box::new(body))
    }

    pub fn forall(var: usize, body: Formula) -> Self {
        Formula::not(Formula::exists(var, Formula::not(body)))
    }

    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Formula::True | Formula::False | Formula::Ge(_) | Formula::Mod(..) => true,
            Formula::Not(f) => f.is_quantifier_free(),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().all(Formula::is_quantifier_free),
            Formula::Exists(..) => false,
        }
    }

    /// Number of nested quantifiers on the deepest branch.
    pub fn quantifier_depth(&self) -> usize {
        match self {
            Formula::True | Formula::False | Formula::Ge(_) | Formula::Mod(..) => 0,
            Formula::Not(f) => f.quantifier_depth(),
            Formula::And(fs) | Formula::Or(fs) => {
                fs.iter().map(Formula::quantifier_depth).max().unwrap_or(0)
            }
            Formula::Exists(_, f) => 1 + f.quantifier_depth(),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<usize>, out: &mut BTreeSet<usize>) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Ge(l) | Formula::Mod(l, _) => {
                for j in 0..l.var_bound() {
                    if l.mentions(j) && !bound.contains(&j) {
                        out.insert(j);
                    }
                }
            }
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::And(fs) | Formula::Or(fs) => {
                for f in fs {
                    f.collect_free(bound, out);
                }
            }
            Formula::Exists(v, f) => {
                bound.push(*v);
                f.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// One more than the largest variable index occurring anywhere,
    /// including bound variables.
    pub fn var_bound(&self) -> usize {
        match self {
            Formula::True | Formula::False => 0,
            Formula::Ge(l) | Formula::Mod(l, _) => l.var_bound(),
            Formula::Not(f) => f.var_bound(),
            Formula::And(fs) | Formula::Or(fs) => {
                fs.iter().map(Formula::var_bound).max().unwrap_or(0)
            }
            Formula::Exists(v, f) => f.var_bound().max(v + 1),
        }
    }

    /// Number of atoms and connectives.
    pub fn size(&self) -> usize {
        match self {
            Formula::True | Formula::False | Formula::Ge(_) | Formula::Mod(..) => 1,
            Formula::Not(f) | Formula::Exists(_, f) => 1 + f.size(),
            Formula::And(fs) | Formula::Or(fs) => 1 + fs.iter().map(Formula::size).sum::<usize>(),
        }
    }

    /// Applies `f` to every atom of a quantifier-free formula.
    pub(crate) fn map_atoms(
        &self,
        f: &mut impl FnMut(&Formula) -> Result<Formula, PresburgerError>,
    ) -> Result<Formula, PresburgerError> {
        Ok(match self {
            Formula::True | Formula::False => self.clone(),
            Formula::Ge(_) | Formula::Mod(..) => f(self)?,
            Formula::Not(g) => Formula::not(g.map_atoms(f)?),
            Formula::And(gs) => Formula::And(
                gs.iter()
                    .map(|g| g.map_atoms(f))
                    .collect::<Result<_, _>>()?,
            ),
            Formula::Or(gs) => Formula::Or(
                gs.iter()
                    .map(|g| g.map_atoms(f))
                    .collect::<Result<_, _>>()?,
            ),
            Formula::Exists(..) => return Err(PresburgerError::NotQuantifierFree),
        })
    }

    /// Replaces the free variable `j` by `value` in a quantifier-free formula.
    pub fn substitute(&self, j: usize, value: &LinearForm) -> Result<Formula, PresburgerError> {
        self.map_atoms(&mut |atom| {
            Ok(match atom {
                Formula::Ge(l) => Formula::Ge(l.substitute(j, value)?),
                Formula::Mod(l, d) => Formula::Mod(l.substitute(j, value)?, *d),
                _ => unreachable!(),
            })
        })
    }

    /// Negation normal form of a quantifier-free formula: negations only in
    /// front of congruences, inequalities negated in place.
    pub fn nnf(&self) -> Result<Formula, PresburgerError> {
        self.nnf_signed(true)
    }

    fn nnf_signed(&self, positive: bool) -> Result<Formula, PresburgerError> {
        Ok(match (self, positive) {
            (Formula::True, true) | (Formula::False, false) => Formula::True,
            (Formula::True, false) | (Formula::False, true) => Formula::False,
            (Formula::Ge(l), true) => Formula::Ge(l.clone()),
            (Formula::Ge(l), false) => Formula::Ge(negate_ge(l)?),
            (Formula::Mod(..), true) => self.clone(),
            (Formula::Mod(..), false) => Formula::not(self.clone()),
            (Formula::Not(f), s) => f.nnf_signed(!s)?,
            (Formula::And(fs), s) | (Formula::Or(fs), s) => {
                let children = fs
                    .iter()
                    .map(|f| f.nnf_signed(s))
                    .collect::<Result<_, _>>()?;
                if matches!(self, Formula::And(_)) == s {
                    Formula::And(children)
                } else {
                    Formula::Or(children)
                }
            }
            (Formula::Exists(..), _) => return Err(PresburgerError::NotQuantifierFree),
        })
    }

    /// Constant folding, gcd normalization of atoms, flattening and
    /// deduplication. Semantics are unchanged.
    pub fn simplify(&self) -> Result<Formula, PresburgerError> {
        Ok(match self {
            Formula::True | Formula::False => self.clone(),
            Formula::Ge(l) => simplify_ge(l),
            Formula::Mod(l, d) => simplify_mod(l, *d)?,
            Formula::Not(f) => match f.simplify()? {
                Formula::True => Formula::False,
                Formula::False => Formula::True,
                Formula::Not(g) => *g,
                Formula::Ge(l) => simplify_ge(&negate_ge(&l)?),
                g => Formula::not(g),
            },
            Formula::And(fs) => junction(fs, true)?,
            Formula::Or(fs) => junction(fs, false)?,
            Formula::Exists(v, f) => {
                let body = f.simplify()?;
                if !body.free_vars().contains(v) {
                    body
                } else {
                    Formula::exists(*v, body)
                }
            }
        })
    }
}

/// `¬(L ≥ 0)` is `-L - 1 ≥ 0`.
pub(crate) fn negate_ge(l: &LinearForm) -> Result<LinearForm, PresburgerError> {
    l.checked_scale(-1)?.checked_add_constant(-1)
}

fn simplify_ge(l: &LinearForm) -> Formula {
    if l.is_constant() {
        return if l.constant_term() >= 0 {
            Formula::True
        } else {
            Formula::False
        };
    }
    let g = l.content();
    if g > 1 {
        let coeffs = l.coeffs().iter().map(|&a| a / g).collect();
        Formula::Ge(LinearForm::new(
            coeffs,
            Integer::div_floor(&l.constant_term(), &g),
        ))
    } else {
        Formula::Ge(l.clone())
    }
}

fn simplify_mod(l: &LinearForm, d: u64) -> Result<Formula, PresburgerError> {
    if d == 0 {
        return Err(PresburgerError::ZeroModulus);
    }
    let dm = i64::try_from(d).map_err(|_| PresburgerError::Overflow)?;
    let mut coeffs: Vec<i64> = l.coeffs().iter().map(|a| a.mod_floor(&dm)).collect();
    let mut c = l.constant_term().mod_floor(&dm);
    let mut dm = dm;
    let g = coeffs.iter().fold(dm, |g, a| g.gcd(a));
    if c % g != 0 {
        return Ok(Formula::False);
    }
    if g > 1 {
        dm /= g;
        c /= g;
        for a in coeffs.iter_mut() {
            *a /= g;
        }
    }
    if dm == 1 {
        return Ok(Formula::True);
    }
    let form = LinearForm::new(coeffs, c);
    if form.is_constant() {
        return Ok(if c == 0 {
            Formula::True
        } else {
            Formula::False
        });
    }
    Ok(Formula::Mod(form, dm as u64))
}

fn junction(fs: &[Formula], conj: bool) -> Result<Formula, PresburgerError> {
    let (unit, absorb) = if conj {
        (Formula::True, Formula::False)
    } else {
        (Formula::False, Formula::True)
    };
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    let mut stack: Vec<Formula> = fs.iter().rev().cloned().collect();
    while let Some(f) = stack.pop() {
        let f = f.simplify()?;
        match f {
            Formula::And(gs) if conj => stack.extend(gs.into_iter().rev()),
            Formula::Or(gs) if !conj => stack.extend(gs.into_iter().rev()),
            g if g == unit => {}
            g if g == absorb => return Ok(absorb),
            g => {
                if seen.insert(g.clone()) {
                    out.push(g);
                }
            }
        }
    }
    // x and ¬x together
    for f in &out {
        if let Formula::Ge(l) = f {
            if let Ok(n) = negate_ge(l) {
                if seen.contains(&Formula::Ge(n)) {
                    return Ok(absorb);
                }
            }
        } else if seen.contains(&Formula::not(f.clone())) {
            return Ok(absorb);
        }
    }
    Ok(match out.len() {
        0 => unit,
        1 => out.pop().unwrap(),
        _ if conj => Formula::And(out),
        _ => Formula::Or(out),
    })
}

impl Formula {
    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, prec: u8) -> fmt::Result {
        // 0: top, 2: operand of ||, 3: operand of &&, 4: operand of !
        match self {
            Formula::True => f.write_str("true"),
            Formula::False => f.write_str("false"),
            Formula::Ge(l) => {
                if prec >= 4 {
                    write!(f, "({l} >= 0)")
                } else {
                    write!(f, "{l} >= 0")
                }
            }
            Formula::Mod(l, d) => {
                if prec >= 4 {
                    write!(f, "({l} = 0 mod {d})")
                } else {
                    write!(f, "{l} = 0 mod {d}")
                }
            }
            Formula::Not(g) => {
                f.write_str("!")?;
                g.fmt_prec(f, 4)
            }
            Formula::And(gs) | Formula::Or(gs) => {
                let (sep, own) = if matches!(self, Formula::And(_)) {
                    (" && ", 2)
                } else {
                    (" || ", 1)
                };
                let wrap = prec > own;
                if wrap {
                    f.write_str("(")?;
                }
                for (i, g) in gs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(sep)?;
                    }
                    g.fmt_prec(f, own + 1)?;
                }
                if wrap {
                    f.write_str(")")?;
                }
                Ok(())
            }
            Formula::Exists(v, g) => {
                if prec > 0 {
                    f.write_str("(")?;
                }
                write!(f, "exists l{} . ", v + 1)?;
                g.fmt_prec(f, 0)?;
                if prec > 0 {
                    f.write_str(")")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}
