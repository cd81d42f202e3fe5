use std::fmt;

use num_rational::BigRational;

use super::poly::Polynomial;
use super::value::{Angular, ExtInt, Order, PowerSeriesValue};
use super::SemialgError;
use crate::presburger::LinearForm;

/// Kleene truth value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Truth {
    True,
    False,
    Indeterminate,
}

impl Truth {
    pub fn from_bool(b: bool) -> Truth {
        if b {
            Truth::True
        } else {
            Truth::False
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Truth {
        match self {
            Truth::True => Truth::False,
            Truth::False => Truth::True,
            Truth::Indeterminate => Truth::Indeterminate,
        }
    }

    pub fn and(self, other: Truth) -> Truth {
        match (self, other) {
            (Truth::False, _) | (_, Truth::False) => Truth::False,
            (Truth::True, Truth::True) => Truth::True,
            _ => Truth::Indeterminate,
        }
    }

    pub fn or(self, other: Truth) -> Truth {
        self.not().and(other.not()).not()
    }
}

impl fmt::Display for Truth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Truth::True => "TRUE",
            Truth::False => "FALSE",
            Truth::Indeterminate => "INDETERMINATE",
        })
    }
}

/// Boolean combination of valuation and angular-component atoms.
///
/// The polynomials `f` live in `Q[t, x_1, …, x_m]` (slot 0 is `t`, slot `i`
/// is `x_i`); `g` in an atom on angular components lives in
/// `Q[y_1, …, y_s]` (slot `i - 1` is `y_i`). Linear forms are in the
/// integer parameters `ℓ_1, …, ℓ_r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Condition {
    True,
    False,
    /// `ord_t f ≥ ord_t g + L(ℓ)`.
    OrdGe {
        f: Polynomial,
        g: Polynomial,
        l: LinearForm,
    },
    /// `ord_t f ≡ L(ℓ) mod d`.
    OrdMod {
        f: Polynomial,
        l: LinearForm,
        d: u64,
    },
    /// `g(ac f_1, …, ac f_s) = 0`.
    AcZero {
        g: Polynomial,
        args: Vec<Polynomial>,
    },
    Not(Box<Condition>),
    And(Vec<Condition>),
    Or(Vec<Condition>),
}

impl Condition {
    pub fn ord_ge(f: Polynomial, g: Polynomial, l: LinearForm) -> Condition {
        Condition::OrdGe { f, g, l }
    }

    pub fn ord_mod(f: Polynomial, l: LinearForm, d: u64) -> Result<Condition, SemialgError> {
        if d == 0 {
            return Err(SemialgError::ZeroModulus);
        }
        Ok(Condition::OrdMod { f, l, d })
    }

    pub fn ac_zero(g: Polynomial, args: Vec<Polynomial>) -> Result<Condition, SemialgError> {
        if g.var_bound() > args.len() {
            return Err(SemialgError::Arity {
                what: "angular-component slots",
                expected: g.var_bound(),
                got: args.len(),
            });
        }
        Ok(Condition::AcZero { g, args })
    }

    /// `f = 0`, written as `ord_t f ≡ 0 mod 2 ∧ ord_t f ≡ 1 mod 2`: only
    /// `+∞` lies in both classes.
    pub fn is_zero(f: Polynomial) -> Condition {
        Condition::And(vec![
            Condition::OrdMod {
                f: f.clone(),
                l: LinearForm::constant(0),
                d: 2,
            },
            Condition::OrdMod {
                f,
                l: LinearForm::constant(1),
                d: 2,
            },
        ])
    }

    /// Number of `x` variables used.
    pub fn point_arity(&self) -> usize {
        let x = |p: &Polynomial| p.var_bound().saturating_sub(1);
        match self {
            Condition::True | Condition::False => 0,
            Condition::OrdGe { f, g, .. } => x(f).max(x(g)),
            Condition::OrdMod { f, .. } => x(f),
            Condition::AcZero { args, .. } => args.iter().map(x).max().unwrap_or(0),
            Condition::Not(c) => c.point_arity(),
            Condition::And(cs) | Condition::Or(cs) => {
                cs.iter().map(Condition::point_arity).max().unwrap_or(0)
            }
        }
    }

    /// Number of `ℓ` parameters used.
    pub fn ell_arity(&self) -> usize {
        match self {
            Condition::OrdGe { l, .. } | Condition::OrdMod { l, .. } => l.var_bound(),
            Condition::Not(c) => c.ell_arity(),
            Condition::And(cs) | Condition::Or(cs) => {
                cs.iter().map(Condition::ell_arity).max().unwrap_or(0)
            }
            _ => 0,
        }
    }
}

/// Truth value of `c` at the point `x` and parameters `ell`.
///
/// Polynomials are evaluated in truncated arithmetic; an atom whose value
/// depends on unknown coefficients is `Indeterminate`.
pub fn evaluate_condition(
    c: &Condition,
    point: &[PowerSeriesValue],
    ell: &[i64],
) -> Result<Truth, SemialgError> {
    if c.point_arity() > point.len() {
        return Err(SemialgError::Arity {
            what: "point coordinates",
            expected: c.point_arity(),
            got: point.len(),
        });
    }
    if c.ell_arity() > ell.len() {
        return Err(SemialgError::Arity {
            what: "integer parameters",
            expected: c.ell_arity(),
            got: ell.len(),
        });
    }
    let mut truncs = point.iter().filter_map(PowerSeriesValue::trunc);
    if let Some(first) = truncs.next() {
        if let Some(other) = truncs.find(|&p| p != first) {
            return Err(SemialgError::TruncMismatch(first, other));
        }
    }
    let mut slots = Vec::with_capacity(point.len() + 1);
    slots.push(PowerSeriesValue::t());
    slots.extend(point.iter().cloned());
    eval(c, &slots, ell)
}

fn eval_linear(l: &LinearForm, ell: &[i64]) -> Result<i64, SemialgError> {
    i64::try_from(l.eval(ell)).map_err(|_| SemialgError::Overflow)
}

fn eval(c: &Condition, slots: &[PowerSeriesValue], ell: &[i64]) -> Result<Truth, SemialgError> {
    Ok(match c {
        Condition::True => Truth::True,
        Condition::False => Truth::False,
        Condition::OrdGe { f, g, l } => {
            let lhs = f.eval_series(slots).ord_t();
            let rhs = g.eval_series(slots).ord_t();
            ord_ge(lhs, rhs, eval_linear(l, ell)?)
        }
        Condition::OrdMod { f, l, d } => match f.eval_series(slots).ord_t() {
            Order::Known(v) => Truth::from_bool(v.congruent(eval_linear(l, ell)?, *d)),
            Order::Indeterminate { .. } if *d == 1 => Truth::True,
            Order::Indeterminate { .. } => Truth::Indeterminate,
        },
        Condition::AcZero { g, args } => {
            let mut acs: Vec<BigRational> = Vec::with_capacity(args.len());
            for a in args {
                match a.eval_series(slots).ac() {
                    Angular::Known(v) => acs.push(v),
                    Angular::Indeterminate => return Ok(Truth::Indeterminate),
                }
            }
            Truth::from_bool(num_traits::Zero::is_zero(&g.eval_rational(&acs)))
        }
        Condition::Not(inner) => eval(inner, slots, ell)?.not(),
        Condition::And(cs) => {
            let mut acc = Truth::True;
            for c in cs {
                acc = acc.and(eval(c, slots, ell)?);
            }
            acc
        }
        Condition::Or(cs) => {
            let mut acc = Truth::False;
            for c in cs {
                acc = acc.or(eval(c, slots, ell)?);
            }
            acc
        }
    })
}

/// Interval `[lo, hi]` of possible orders, `None` standing for `+∞`.
fn range(o: Order) -> (Option<i64>, Option<i64>) {
    match o {
        Order::Known(ExtInt::Finite(a)) => (Some(a), Some(a)),
        Order::Known(ExtInt::Infinity) => (None, None),
        Order::Indeterminate { at_least } => (Some(i64::from(at_least)), None),
    }
}

fn le(a: Option<i64>, b: Option<i64>) -> bool {
    match (a, b) {
        (_, None) => true,
        (None, Some(_)) => false,
        (Some(x), Some(y)) => x <= y,
    }
}

fn ord_ge(lhs: Order, rhs: Order, l: i64) -> Truth {
    let (lo1, hi1) = range(lhs);
    let (lo2, hi2) = range(rhs);
    let (lo2, hi2) = (lo2.map(|v| v + l), hi2.map(|v| v + l));
    if le(hi2, lo1) {
        Truth::True
    } else if !le(lo2, hi1) {
        Truth::False
    } else {
        Truth::Indeterminate
    }
}

fn x_name(i: usize) -> String {
    if i == 0 {
        "t".to_string()
    } else {
        format!("x{i}")
    }
}

fn y_name(i: usize) -> String {
    format!("y{}", i + 1)
}

fn prec(c: &Condition) -> u8 {
    match c {
        Condition::Or(_) => 1,
        Condition::And(_) => 2,
        Condition::Not(_) => 3,
        _ => 4,
    }
}

impl Condition {
    fn fmt_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let wrap = prec(self) < min;
        if wrap {
            f.write_str("(")?;
        }
        match self {
            Condition::True => f.write_str("true")?,
            Condition::False => f.write_str("false")?,
            Condition::OrdGe { f: p, g, l } => {
                write!(
                    f,
                    "ord({}) >= ord({})",
                    p.display(&x_name),
                    g.display(&x_name)
                )?;
                let text = l.to_string();
                if text != "0" {
                    match text.strip_prefix('-') {
                        Some(rest) => write!(f, " - {rest}")?,
                        None => write!(f, " + {text}")?,
                    }
                }
            }
            Condition::OrdMod { f: p, l, d } => {
                write!(f, "ord({}) === {l} mod {d}", p.display(&x_name))?;
            }
            Condition::AcZero { g, args } => {
                write!(f, "ac-poly ({})(", g.display(&y_name))?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "ac({})", a.display(&x_name))?;
                }
                f.write_str(") = 0")?;
            }
            Condition::Not(c) => {
                f.write_str("!")?;
                c.fmt_at(f, 3)?;
            }
            Condition::And(cs) | Condition::Or(cs) => {
                let (sep, child) = if matches!(self, Condition::And(_)) {
                    (" && ", 3)
                } else {
                    (" || ", 2)
                };
                if cs.is_empty() {
                    f.write_str(if child == 3 { "true" } else { "false" })?;
                }
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(sep)?;
                    }
                    c.fmt_at(f, child)?;
                }
            }
        }
        if wrap {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_at(f, 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semialg_eval::value::rational;

    fn t_pow(k: u32) -> Polynomial {
        Polynomial::var(0).pow(k)
    }

    #[test]
    fn valuation_inequality() {
        let c = Condition::ord_ge(t_pow(2), t_pow(1), LinearForm::constant(1));
        assert_eq!(evaluate_condition(&c, &[], &[]).unwrap(), Truth::True);
        let c = Condition::ord_ge(t_pow(2), t_pow(1), LinearForm::var(0));
        assert_eq!(evaluate_condition(&c, &[], &[2]).unwrap(), Truth::False);
    }

    #[test]
    fn infinite_order_conventions() {
        let zero = PowerSeriesValue::zero();
        for l in -3..4 {
            for d in 1..5 {
                let c = Condition::ord_mod(Polynomial::var(1), LinearForm::var(0), d).unwrap();
                assert_eq!(
                    evaluate_condition(&c, std::slice::from_ref(&zero), &[l]).unwrap(),
                    Truth::True
                );
                let c =
                    Condition::ord_ge(Polynomial::var(1), Polynomial::var(1), LinearForm::var(0));
                assert_eq!(
                    evaluate_condition(&c, std::slice::from_ref(&zero), &[l]).unwrap(),
                    Truth::True
                );
            }
        }
    }

    #[test]
    fn angular_component_polynomial() {
        let g = Polynomial::var(0).add(&Polynomial::constant(rational(-1, 1)));
        let c = Condition::ac_zero(g, vec![Polynomial::var(1)]).unwrap();
        let x = PowerSeriesValue::truncated([(0, rational(1, 1)), (1, rational(1, 1))], 8).unwrap();
        assert_eq!(evaluate_condition(&c, &[x], &[]).unwrap(), Truth::True);
        let unknown = PowerSeriesValue::truncated([], 8).unwrap();
        assert_eq!(
            evaluate_condition(&c, &[unknown], &[]).unwrap(),
            Truth::Indeterminate
        );
    }

    #[test]
    fn zero_atom_matches_certified_zero() {
        // x1 - x2 at equal certified points, at equal truncated points, and
        // at distinct points
        let f = Polynomial::var(1).add(&Polynomial::var(2).neg());
        let c = Condition::is_zero(f.clone());
        let guard = Condition::ord_ge(f, Polynomial::default(), LinearForm::constant(0));
        let s = |terms: &[(u32, i64)]| {
            PowerSeriesValue::truncated(terms.iter().map(|&(k, v)| (k, rational(v, 1))), 6).unwrap()
        };
        let e = |terms: &[(u32, i64)]| {
            PowerSeriesValue::exact(terms.iter().map(|&(k, v)| (k, rational(v, 1))))
        };
        let cases = [
            (vec![e(&[(1, 2)]), e(&[(1, 2)])], Truth::True),
            (vec![s(&[(1, 2)]), s(&[(1, 2)])], Truth::Indeterminate),
            (vec![s(&[(1, 2)]), s(&[(1, 3)])], Truth::False),
        ];
        for (point, expected) in cases {
            assert_eq!(evaluate_condition(&c, &point, &[]).unwrap(), expected);
            assert_eq!(evaluate_condition(&guard, &point, &[]).unwrap(), expected);
            let direct = {
                let v = Polynomial::var(1).add(&Polynomial::var(2).neg());
                let mut slots = vec![PowerSeriesValue::t()];
                slots.extend(point.iter().cloned());
                let value = v.eval_series(&slots);
                if value.is_certified_zero() {
                    Truth::True
                } else if value.coeffs().is_empty() {
                    Truth::Indeterminate
                } else {
                    Truth::False
                }
            };
            assert_eq!(direct, expected);
        }
    }

    #[test]
    fn arity_errors() {
        let c = Condition::ord_mod(Polynomial::var(2), LinearForm::var(1), 2).unwrap();
        assert!(matches!(
            evaluate_condition(&c, &[PowerSeriesValue::zero()], &[1, 2]),
            Err(SemialgError::Arity { .. })
        ));
        assert!(matches!(
            evaluate_condition(
                &c,
                &[PowerSeriesValue::zero(), PowerSeriesValue::zero()],
                &[1]
            ),
            Err(SemialgError::Arity { .. })
        ));
        assert_eq!(
            Condition::ord_mod(Polynomial::var(1), LinearForm::constant(0), 0),
            Err(SemialgError::ZeroModulus)
        );
    }
}
