//! Recursive-descent parser for the formula language.
//!
//! ```text
//! formula := and ('||' and)*
//! and     := unary ('&&' unary)*
//! unary   := '!' unary | ('exists' | 'forall') VAR '.' formula | primary
//! primary := 'true' | 'false' | '(' formula ')' | atom
//! atom    := sum REL sum | sum '=' sum 'mod' INT | sum '=_' INT sum
//! REL     := '>=' | '<=' | '>' | '<' | '=' | '!='
//! sum     := ['+' | '-'] term (('+' | '-') term)*
//! term    := factor ('*' factor)*
//! factor  := INT | VAR | '-' factor | '(' sum ')'
//! ```
//!
//! Variables are `l1, l2, …`. Products must keep the form affine.

use super::formula::Formula;
use super::linear::LinearForm;
use super::PresburgerError;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(i64),
    Var(usize),
    Exists,
    Forall,
    True,
    False,
    ModKw,
    Ge,
    Le,
    Gt,
    Lt,
    Eq,
    Ne,
    Cong(u64),
    Not,
    And,
    Or,
    LParen,
    RParen,
    Plus,
    Minus,
    Star,
    Dot,
    Eof,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Int(n) => format!("integer {n}"),
        Tok::Var(j) => format!("variable l{}", j + 1),
        Tok::Eof => "end of input".into(),
        Tok::Cong(d) => format!("'=_{d}'"),
        other => format!("{other:?}").to_lowercase(),
    }
}

fn syntax(column: usize, message: impl Into<String>) -> PresburgerError {
    PresburgerError::Syntax {
        column,
        message: message.into(),
    }
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>, PresburgerError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
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
            let n = s
                .parse::<i64>()
                .map_err(|_| syntax(col, "integer literal too large"))?;
            out.push((Tok::Int(n), col));
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            let tok = match word.as_str() {
                "exists" => Tok::Exists,
                "forall" => Tok::Forall,
                "true" => Tok::True,
                "false" => Tok::False,
                "mod" => Tok::ModKw,
                w => match w.strip_prefix('l').map(str::parse::<usize>) {
                    Some(Ok(k)) if k >= 1 => Tok::Var(k - 1),
                    _ => return Err(syntax(col, format!("unknown identifier '{w}'"))),
                },
            };
            out.push((tok, col));
            continue;
        }
        let next = chars.get(i + 1).copied();
        let (tok, len) = match (c, next) {
            ('>', Some('=')) => (Tok::Ge, 2),
            ('<', Some('=')) => (Tok::Le, 2),
            ('!', Some('=')) => (Tok::Ne, 2),
            ('&', Some('&')) => (Tok::And, 2),
            ('|', Some('|')) => (Tok::Or, 2),
            ('=', Some('_')) => {
                let start = i + 2;
                let mut j = start;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                let s: String = chars[start..j].iter().collect();
                let d = s
                    .parse::<u64>()
                    .map_err(|_| syntax(col, "expected a modulus after '=_'"))?;
                (Tok::Cong(d), j - i)
            }
            ('>', _) => (Tok::Gt, 1),
            ('<', _) => (Tok::Lt, 1),
            ('=', _) => (Tok::Eq, 1),
            ('!', _) => (Tok::Not, 1),
            ('(', _) => (Tok::LParen, 1),
            (')', _) => (Tok::RParen, 1),
            ('+', _) => (Tok::Plus, 1),
            ('-', _) => (Tok::Minus, 1),
            ('*', _) => (Tok::Star, 1),
            ('.', _) => (Tok::Dot, 1),
            _ => return Err(syntax(col, format!("unexpected character '{c}'"))),
        };
        out.push((tok, col));
        i += len;
    }
    out.push((Tok::Eof, chars.len() + 1));
    Ok(out)
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
        if t != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), PresburgerError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(syntax(
                self.col(),
                format!("expected {what}, found {}", describe(self.peek())),
            ))
        }
    }

    fn formula(&mut self) -> Result<Formula, PresburgerError> {
        let mut parts = vec![self.conjunction()?];
        while *self.peek() == Tok::Or {
            self.bump();
            parts.push(self.conjunction()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            Formula::Or(parts)
        })
    }

    fn conjunction(&mut self) -> Result<Formula, PresburgerError> {
        let mut parts = vec![self.unary()?];
        while *self.peek() == Tok::And {
            self.bump();
            parts.push(self.unary()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            Formula::And(parts)
        })
    }

    fn unary(&mut self) -> Result<Formula, PresburgerError> {
        match self.peek() {
            Tok::Not => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::Exists | Tok::Forall => {
                let universal = self.bump() == Tok::Forall;
                let var = match self.bump() {
                    Tok::Var(j) => j,
                    t => {
                        self.pos -= usize::from(t != Tok::Eof);
                        return Err(syntax(
                            self.col(),
                            format!("expected a variable, found {}", describe(&t)),
                        ));
                    }
                };
                self.expect(Tok::Dot, "'.'")?;
                let body = self.formula()?;
                Ok(if universal {
                    Formula::forall(var, body)
                } else {
                    Formula::exists(var, body)
                })
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<Formula, PresburgerError> {
        match self.peek() {
            Tok::True => {
                self.bump();
                Ok(Formula::True)
            }
            Tok::False => {
                self.bump();
                Ok(Formula::False)
            }
            Tok::LParen => {
                let start = self.pos;
                self.bump();
                let grouped = self
                    .formula()
                    .and_then(|f| self.expect(Tok::RParen, "')'").map(|_| f));
                match grouped {
                    Ok(f) if !self.continues_sum() => Ok(f),
                    first => {
                        let grouped_end = self.pos;
                        self.pos = start;
                        match self.atom() {
                            Ok(f) => Ok(f),
                            Err(e) => match first {
                                Err(e1) if error_column(&e1) > error_column(&e) => {
                                    self.pos = grouped_end;
                                    Err(e1)
                                }
                                _ => Err(e),
                            },
                        }
                    }
                }
            }
            _ => self.atom(),
        }
    }

    fn continues_sum(&self) -> bool {
        matches!(
            self.peek(),
            Tok::Plus
                | Tok::Minus
                | Tok::Star
                | Tok::Ge
                | Tok::Le
                | Tok::Gt
                | Tok::Lt
                | Tok::Eq
                | Tok::Ne
                | Tok::Cong(_)
        )
    }

    fn atom(&mut self) -> Result<Formula, PresburgerError> {
        let lhs = self.sum()?;
        let op_col = self.col();
        let op = self.bump();
        if matches!(op, Tok::Eof)
            || !matches!(
                op,
                Tok::Ge | Tok::Le | Tok::Gt | Tok::Lt | Tok::Eq | Tok::Ne | Tok::Cong(_)
            )
        {
            if op != Tok::Eof {
                self.pos -= 1;
            }
            return Err(syntax(
                op_col,
                format!("expected a comparison, found {}", describe(&op)),
            ));
        }
        let rhs = self.sum()?;
        let diff = lhs.checked_sub(&rhs)?;
        match op {
            Tok::Ge => Ok(Formula::Ge(diff)),
            Tok::Le => Ok(Formula::Ge(diff.checked_scale(-1)?)),
            Tok::Gt => Ok(Formula::Ge(diff.checked_add_constant(-1)?)),
            Tok::Lt => Ok(Formula::Ge(
                diff.checked_scale(-1)?.checked_add_constant(-1)?,
            )),
            Tok::Cong(d) => Formula::congruence(diff, d)
                .map_err(|_| syntax(op_col, "modulus must be at least 1")),
            Tok::Ne => Ok(Formula::not(Formula::eq_zero(diff)?)),
            Tok::Eq => {
                if *self.peek() == Tok::ModKw {
                    self.bump();
                    let col = self.col();
                    match self.bump() {
                        Tok::Int(d) if d >= 1 => Formula::congruence(diff, d as u64),
                        Tok::Int(_) => Err(syntax(col, "modulus must be at least 1")),
                        t => {
                            self.pos -= usize::from(t != Tok::Eof);
                            Err(syntax(
                                col,
                                format!("expected a modulus, found {}", describe(&t)),
                            ))
                        }
                    }
                } else {
                    Formula::eq_zero(diff)
                }
            }
            _ => unreachable!(),
        }
    }

    fn sum(&mut self) -> Result<LinearForm, PresburgerError> {
        let mut acc = match self.peek() {
            Tok::Plus => {
                self.bump();
                self.term()?
            }
            Tok::Minus => {
                self.bump();
                self.term()?.checked_scale(-1)?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = acc.checked_add(&self.term()?)?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = acc.checked_sub(&self.term()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<LinearForm, PresburgerError> {
        let mut acc = self.factor()?;
        while *self.peek() == Tok::Star {
            self.bump();
            let col = self.col();
            let rhs = self.factor()?;
            acc = if acc.is_constant() {
                rhs.checked_scale(acc.constant_term())?
            } else if rhs.is_constant() {
                acc.checked_scale(rhs.constant_term())?
            } else {
                return Err(syntax(col, "product of two variables is not affine"));
            };
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<LinearForm, PresburgerError> {
        let col = self.col();
        match self.bump() {
            Tok::Int(n) => Ok(LinearForm::constant(n)),
            Tok::Var(j) => Ok(LinearForm::var(j)),
            Tok::Minus => self.factor()?.checked_scale(-1),
            Tok::LParen => {
                let inner = self.sum()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(inner)
            }
            t => {
                if t != Tok::Eof {
                    self.pos -= 1;
                }
                Err(syntax(
                    col,
                    format!("expected a term, found {}", describe(&t)),
                ))
            }
        }
    }
}

fn error_column(e: &PresburgerError) -> usize {
    match e {
        PresburgerError::Syntax { column, .. } => *column,
        _ => 0,
    }
}

/// Parses a formula; errors carry the 1-based column of the offending token
/// (one past the end for unexpected end of input).
pub fn parse_formula(text: &str) -> Result<Formula, PresburgerError> {
    let mut p = Parser {
        toks: tokenize(text)?,
        pos: 0,
    };
    let f = p.formula()?;
    if *p.peek() != Tok::Eof {
        return Err(syntax(
            p.col(),
            format!("unexpected {}", describe(p.peek())),
        ));
    }
    Ok(f)
}

/// Parses a comma-separated list of affine forms, e.g. `"l1+l2,l1"`.
pub fn parse_linear_forms(text: &str) -> Result<Vec<LinearForm>, PresburgerError> {
    let mut out = Vec::new();
    let mut offset = 0;
    for piece in text.split(',') {
        let mut p = Parser {
            toks: tokenize(piece).map_err(|e| shift(e, offset))?,
            pos: 0,
        };
        let form = p.sum().map_err(|e| shift(e, offset))?;
        if *p.peek() != Tok::Eof {
            return Err(syntax(
                p.col() + offset,
                format!("unexpected {}", describe(p.peek())),
            ));
        }
        out.push(form);
        offset += piece.chars().count() + 1;
    }
    Ok(out)
}

fn shift(e: PresburgerError, offset: usize) -> PresburgerError {
    match e {
        PresburgerError::Syntax { column, message } => PresburgerError::Syntax {
            column: column + offset,
            message,
        },
        other => other,
    }
}
