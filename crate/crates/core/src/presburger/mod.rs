//! Presburger arithmetic: formulas over integer variables built from affine
//! inequalities `L ≥ 0` and congruences `L ≡ 0 mod d`, a text syntax,
//! quantifier elimination, and rational generating functions of
//! Presburger sets weighted by affine maps.

mod eval;
mod formula;
mod gf;
mod linear;
mod parser;
mod qe;

use thiserror::Error;

pub use eval::{enumerate, evaluate, SEARCH_CAP};
pub use formula::Formula;
pub use gf::{expand_gf, generating_function, GfOptions, IntegerRationalFunction};
pub use linear::LinearForm;
pub use parser::{parse_formula, parse_linear_forms};
pub use qe::{eliminate_quantifiers, project};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PresburgerError {
    #[error("syntax error at column {column}: {message}")]
    Syntax { column: usize, message: String },
    #[error("congruence modulus must be at least 1")]
    ZeroModulus,
    #[error("integer overflow in coefficient arithmetic")]
    Overflow,
    #[error("formula must be quantifier-free here")]
    NotQuantifierFree,
    #[error("point has {got} coordinates, formula needs {needed}")]
    PointTooShort { needed: usize, got: usize },
    #[error("cannot decide quantifier by search: {0}")]
    Undecidable(String),
    #[error("expected {expected} variables, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("denominator atom 1 - X^0 is not allowed")]
    ConstantAtom,
    #[error("infinite fiber: {0}")]
    InfiniteFiber(String),
    #[error("function {0} takes negative values on the set")]
    NegativeFunction(usize),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("internal inconsistency: {0}")]
    Internal(String),
}
