//! Exact arithmetic in the Grothendieck ring of varieties localized at `L`.
//!
//! Elements are formal integer combinations of products of declared class
//! symbols `[S]` times powers of `L`. No scissor relation is imposed: `[S] +
//! [S']` stays a two-term sum. [`LocalizedMotivicElement`] further inverts the
//! atoms `L^i - 1`.
//!
//! The dimension filtration induces a non-archimedean norm `2^{virtual_dim}`,
//! computed on the canonical form (an upper bound for the norm in the
//! completion).

mod element;
mod localized;
mod registry;
mod render;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

pub use element::{Monomial, MotivicElement, TermKey};
pub use localized::LocalizedMotivicElement;
pub use registry::{ClassSymbol, RegistryId, SymbolDim, SymbolRegistry};
pub use render::render_l_atoms;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error("symbol `{0}` is already declared")]
    DuplicateSymbol(String),
    #[error("symbol `{name}` declared with negative dimension {dim}")]
    NegativeDimension { name: String, dim: i64 },
    #[error("dimension {0} is too large")]
    DimensionTooLarge(i64),
    #[error("symbol names must be nonempty")]
    EmptyName,
    #[error("undeclared symbol `{0}`")]
    UnknownSymbol(String),
    #[error("operands belong to different symbol registries")]
    RegistryMismatch,
    #[error("no count given for symbol `{0}`")]
    MissingCount(String),
    #[error("division by zero while specializing")]
    DivisionByZero,
    #[error("denominator atoms L^i - 1 need i >= 1")]
    InvalidDenominatorAtom,
}

/// A norm value `2^e`, or `0`.
///
/// Ordered so that `0` is the smallest value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Norm(Option<i64>);

impl Norm {
    pub fn zero() -> Self {
        Norm(None)
    }

    pub fn from_virtual_dim(v: Option<i64>) -> Self {
        Norm(v)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_none()
    }

    /// The exponent `e` of `2^e`; `None` for the zero norm.
    pub fn exponent(&self) -> Option<i64> {
        self.0
    }

    pub fn to_rational(&self) -> BigRational {
        match self.0 {
            None => BigRational::zero(),
            Some(e) => {
                let p = BigInt::one() << e.unsigned_abs();
                if e >= 0 {
                    BigRational::from_integer(p)
                } else {
                    BigRational::new(BigInt::one(), p)
                }
            }
        }
    }
}

impl std::ops::Mul for Norm {
    type Output = Norm;
    // 2^a · 2^b = 2^{a+b}
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: Norm) -> Norm {
        match (self.0, rhs.0) {
            (Some(a), Some(b)) => Norm(Some(a + b)),
            _ => Norm(None),
        }
    }
}

impl fmt::Display for Norm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            None => write!(f, "0"),
            Some(e) => write!(f, "2^{e}"),
        }
    }
}
