//! Text syntax for conditions.
//!
//! ```text
//! cond    := conj ( "||" conj )*
//! conj    := unary ( "&&" unary )*
//! unary   := "!" unary | "(" cond ")" | "true" | "false" | atom
//! atom    := "ord" "(" poly ")" ">=" "ord" "(" poly ")" [ ("+" | "-") linear ]
//!          | "ord" "(" poly ")" "===" linear "mod" INT
//!          | "ac-poly" "(" ypoly ")" "(" "ac" "(" poly ")" ( "," "ac" "(" poly ")" )* ")" "=" "0"
//! poly    := polynomial in t, x1, x2, … with + - * ^ and division by numbers
//! ypoly   := polynomial in y1, y2, …
//! linear  := integer affine form in l1, l2, …
//! ```

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::condition::Condition;
use super::poly::Polynomial;
use super::SemialgError;
use crate::presburger::LinearForm;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    AcPoly,
    Sym(&'static str),
    End,
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
}

const SYMBOLS: [&str; 14] = [
    "===", ">=", "&&", "||", "(", ")", ",", "+", "-", "*", "/", "^", "=", "!",
];

fn lex(text: &str) -> Result<Lexer, SemialgError> {
    let chars: Vec<char> = text.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    'outer: while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            toks.push((Tok::Num(s.parse().expect("digits")), col));
            continue;
        }
        if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            let rest: String = chars[i..].iter().take(5).collect();
            if s == "ac" && rest == "-poly" {
                i += 5;
                toks.push((Tok::AcPoly, col));
            } else {
                toks.push((Tok::Ident(s), col));
            }
            continue;
        }
        for sym in SYMBOLS {
            let n = sym.len();
            if i + n <= chars.len() && chars[i..i + n].iter().collect::<String>() == sym {
                toks.push((Tok::Sym(sym), col));
                i += n;
                continue 'outer;
            }
        }
        return Err(syntax(col, format!("unexpected character '{c}'")));
    }
    toks.push((Tok::End, chars.len() + 1));
    Ok(Lexer { toks })
}

fn syntax(column: usize, message: impl Into<String>) -> SemialgError {
    SemialgError::Syntax {
        column,
        message: message.into(),
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Vars {
    /// `t` and `x1, x2, …`
    Point,
    /// `y1, y2, …`
    Slots,
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn col(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn eat_sym(&mut self, s: &str) -> bool {
        if matches!(self.peek(), Tok::Sym(x) if *x == s) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, s: &str) -> Result<(), SemialgError> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            Err(syntax(self.col(), format!("expected '{s}'")))
        }
    }

    fn eat_ident(&mut self, name: &str) -> bool {
        if matches!(self.peek(), Tok::Ident(x) if x == name) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect_ident(&mut self, name: &str) -> Result<(), SemialgError> {
        if self.eat_ident(name) {
            Ok(())
        } else {
            Err(syntax(self.col(), format!("expected '{name}'")))
        }
    }

    fn condition(&mut self) -> Result<Condition, SemialgError> {
        let mut parts = vec![self.conjunction()?];
        while self.eat_sym("||") {
            parts.push(self.conjunction()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            Condition::Or(parts)
        })
    }

    fn conjunction(&mut self) -> Result<Condition, SemialgError> {
        let mut parts = vec![self.unary()?];
        while self.eat_sym("&&") {
            parts.push(self.unary()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            Condition::And(parts)
        })
    }

    fn unary(&mut self) -> Result<Condition, SemialgError> {
        if self.eat_sym("!") {
            return Ok(Condition::Not(Box::new(self.unary()?)));
        }
        if self.eat_sym("(") {
            let c = self.condition()?;
            self.expect_sym(")")?;
            return Ok(c);
        }
        if self.eat_ident("true") {
            return Ok(Condition::True);
        }
        if self.eat_ident("false") {
            return Ok(Condition::False);
        }
        if matches!(self.peek(), Tok::AcPoly) {
            self.bump();
            return self.ac_atom();
        }
        if self.eat_ident("ord") {
            return self.ord_atom();
        }
        Err(syntax(self.col(), "expected a condition"))
    }

    fn ord_atom(&mut self) -> Result<Condition, SemialgError> {
        self.expect_sym("(")?;
        let f = self.poly(Vars::Point)?;
        self.expect_sym(")")?;
        if self.eat_sym(">=") {
            self.expect_ident("ord")?;
            self.expect_sym("(")?;
            let g = self.poly(Vars::Point)?;
            self.expect_sym(")")?;
            let l = if matches!(self.peek(), Tok::Sym("+") | Tok::Sym("-")) {
                self.linear()?
            } else {
                LinearForm::constant(0)
            };
            return Ok(Condition::ord_ge(f, g, l));
        }
        if self.eat_sym("===") {
            let l = self.linear()?;
            self.expect_ident("mod")?;
            let col = self.col();
            let d = match self.bump() {
                Tok::Num(n) => n.to_u64().ok_or_else(|| syntax(col, "modulus too large"))?,
                _ => return Err(syntax(col, "expected a modulus")),
            };
            return Condition::ord_mod(f, l, d)
                .map_err(|_| syntax(col, "modulus must be at least 1"));
        }
        Err(syntax(self.col(), "expected '>=' or '==='"))
    }

    fn ac_atom(&mut self) -> Result<Condition, SemialgError> {
        self.expect_sym("(")?;
        let g = self.poly(Vars::Slots)?;
        self.expect_sym(")")?;
        self.expect_sym("(")?;
        let mut args = Vec::new();
        loop {
            self.expect_ident("ac")?;
            self.expect_sym("(")?;
            args.push(self.poly(Vars::Point)?);
            self.expect_sym(")")?;
            if !self.eat_sym(",") {
                break;
            }
        }
        self.expect_sym(")")?;
        let col = self.col();
        self.expect_sym("=")?;
        match self.bump() {
            Tok::Num(n) if n.is_zero() => {}
            _ => return Err(syntax(col, "expected '= 0'")),
        }
        Condition::ac_zero(g, args).map_err(|e| syntax(col, e.to_string()))
    }

    /// Affine form in `l1, l2, …`; a leading sign is allowed.
    fn linear(&mut self) -> Result<LinearForm, SemialgError> {
        let mut coeffs: Vec<i64> = Vec::new();
        let mut constant: i64 = 0;
        let mut first = true;
        loop {
            let sign = if self.eat_sym("-") {
                -1
            } else if self.eat_sym("+") || first {
                1
            } else {
                break;
            };
            first = false;
            let col = self.col();
            let mut coef: i64 = 1;
            let mut have_num = false;
            if let Tok::Num(n) = self.peek().clone() {
                self.bump();
                coef = n
                    .to_i64()
                    .ok_or_else(|| syntax(col, "coefficient too large"))?;
                have_num = true;
                if !self.eat_sym("*") {
                    constant += sign * coef;
                    continue;
                }
            }
            let col = self.col();
            match self.bump() {
                Tok::Ident(name) => {
                    let j = var_index(&name, 'l').ok_or_else(|| {
                        syntax(col, format!("expected l1, l2, … but found '{name}'"))
                    })?;
                    if coeffs.len() < j {
                        coeffs.resize(j, 0);
                    }
                    coeffs[j - 1] += sign * coef;
                }
                _ if have_num => return Err(syntax(col, "expected a variable after '*'")),
                _ => return Err(syntax(col, "expected a term")),
            }
        }
        Ok(LinearForm::new(coeffs, constant))
    }

    fn poly(&mut self, vars: Vars) -> Result<Polynomial, SemialgError> {
        let mut acc = if self.eat_sym("-") {
            self.term(vars)?.neg()
        } else {
            self.term(vars)?
        };
        loop {
            if self.eat_sym("+") {
                acc = acc.add(&self.term(vars)?);
            } else if self.eat_sym("-") {
                acc = acc.add(&self.term(vars)?.neg());
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self, vars: Vars) -> Result<Polynomial, SemialgError> {
        let mut acc = self.power(vars)?;
        loop {
            if self.eat_sym("*") {
                acc = acc.mul(&self.power(vars)?);
            } else if self.eat_sym("/") {
                let col = self.col();
                let n = match self.bump() {
                    Tok::Num(n) if !n.is_zero() => n,
                    _ => return Err(syntax(col, "expected a nonzero integer divisor")),
                };
                let inv = BigRational::new(BigInt::from(1), n);
                acc = acc.mul(&Polynomial::constant(inv));
            } else {
                return Ok(acc);
            }
        }
    }

    fn power(&mut self, vars: Vars) -> Result<Polynomial, SemialgError> {
        let base = self.atom(vars)?;
        if self.eat_sym("^") {
            let col = self.col();
            return match self.bump() {
                Tok::Num(n) => {
                    let k = n
                        .to_u32()
                        .ok_or_else(|| syntax(col, "exponent too large"))?;
                    Ok(base.pow(k))
                }
                _ => Err(syntax(col, "expected an exponent")),
            };
        }
        Ok(base)
    }

    fn atom(&mut self, vars: Vars) -> Result<Polynomial, SemialgError> {
        let col = self.col();
        match self.bump() {
            Tok::Num(n) => Ok(Polynomial::constant(BigRational::from_integer(n))),
            Tok::Sym("(") => {
                let p = self.poly(vars)?;
                self.expect_sym(")")?;
                Ok(p)
            }
            Tok::Sym("-") => Ok(self.power(vars)?.neg()),
            Tok::Ident(name) => match vars {
                Vars::Point if name == "t" => Ok(Polynomial::var(0)),
                Vars::Point => var_index(&name, 'x').map(Polynomial::var).ok_or_else(|| {
                    syntax(col, format!("expected t, x1, x2, … but found '{name}'"))
                }),
                Vars::Slots => var_index(&name, 'y')
                    .map(|j| Polynomial::var(j - 1))
                    .ok_or_else(|| syntax(col, format!("expected y1, y2, … but found '{name}'"))),
            },
            _ => Err(syntax(col, "expected a polynomial term")),
        }
    }
}

/// `k` for the name `{prefix}k`, `k ≥ 1`.
fn var_index(name: &str, prefix: char) -> Option<usize> {
    let rest = name.strip_prefix(prefix)?;
    if rest.is_empty() || !rest.chars().all(|c| c.is_ascii_digit()) || rest.starts_with('0') {
        return None;
    }
    rest.parse().ok()
}

pub fn parse_condition(text: &str) -> Result<Condition, SemialgError> {
    let lexer = lex(text)?;
    let mut p = Parser {
        toks: lexer.toks,
        pos: 0,
    };
    let c = p.condition()?;
    if *p.peek() != Tok::End {
        return Err(syntax(p.col(), "unexpected trailing input"));
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips() {
        for text in [
            "ord(x1^2 - t) >= ord(x2) + l1 - 1",
            "ord(t^2) >= ord(t) + 1",
            "ord(3/2*x1*x2 + 1) === 2*l1 + 1 mod 3",
            "ac-poly (y1 - 1)(ac(x1)) = 0",
            "!ord(x1) >= ord(x2) && (ac-poly (y1^2 - 2*y2)(ac(x1), ac(t + x2)) = 0 || ord(x1) === 0 mod 2)",
        ] {
            let c = parse_condition(text).unwrap();
            assert_eq!(c.to_string(), text);
            assert_eq!(parse_condition(&c.to_string()).unwrap(), c);
        }
    }

    #[test]
    fn normalizes_spelling() {
        let c = parse_condition("ord(x1) >= ord(x1 * x1) - 2 + l2").unwrap();
        assert_eq!(c.to_string(), "ord(x1) >= ord(x1^2) + l2 - 2");
        let c = parse_condition("ord(x1) >= ord(1)").unwrap();
        assert_eq!(c.to_string(), "ord(x1) >= ord(1)");
    }

    #[test]
    fn error_columns() {
        let err = |s: &str| match parse_condition(s) {
            Err(SemialgError::Syntax { column, .. }) => column,
            other => panic!("{s}: {other:?}"),
        };
        assert_eq!(err("ord(x1) >"), 9);
        assert_eq!(err("ord(z1) >= ord(t)"), 5);
        assert_eq!(err("ord(x1) === 1 mod 0"), 19);
        assert_eq!(err("ac-poly (x1)(ac(x1)) = 0"), 10);
        assert_eq!(err("ord(x1) >= ord(t) + 1 )"), 23);
    }
}
