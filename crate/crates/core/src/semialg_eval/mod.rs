//! Three-valued evaluation of semi-algebraic conditions at points given by
//! truncated power series over `Q`.
//!
//! Atoms compare valuations `ord_t`, test valuations modulo an integer, or
//! test a polynomial relation between angular components. The zero series
//! has order `+∞`, with `(+∞) + ℓ = +∞` and `+∞ ≡ ℓ mod d` for all `ℓ`, `d`.
//! A point coordinate known only modulo `t^N` whose stored coefficients all
//! vanish has an unknown order in `[N, +∞]`; atoms depending on it evaluate
//! to `Indeterminate` unless every possible value gives the same answer.

mod condition;
mod parser;
mod poly;
mod value;

use thiserror::Error;

pub use condition::{evaluate_condition, Condition, Truth};
pub use parser::parse_condition;
pub use poly::Polynomial;
pub use value::{Angular, ExtInt, Order, PowerSeriesValue};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SemialgError {
    #[error("syntax error at column {column}: {message}")]
    Syntax { column: usize, message: String },
    #[error("congruence modulus must be at least 1")]
    ZeroModulus,
    #[error("truncation order must be at least 1")]
    InvalidTrunc,
    #[error("expected {expected} {what}, got {got}")]
    Arity {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("point coordinates have different truncation orders {0} and {1}")]
    TruncMismatch(u32, u32),
    #[error("integer overflow evaluating a parameter form")]
    Overflow,
}
