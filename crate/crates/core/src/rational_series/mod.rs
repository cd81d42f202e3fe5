//! Rational functions in `T_1..T_r` with coefficients in the localized
//! Grothendieck ring, and their truncated power-series expansions.
//!
//! A [`MotivicRationalFunction`] is a polynomial numerator over a multiset of
//! atoms `1 - L^{-a} T^b`. Denominators are never multiplied out; the atoms
//! themselves are the normal form, so membership in the subring generated by
//! polynomials, `(1 - L^{-a}T^b)^{-1}` and `(L^i - 1)^{-1}` can be read off
//! the representation (see [`shape`]).

mod function;
pub mod shape;
mod truncated;

use thiserror::Error;

use crate::grothendieck_ring::RingError;

pub use function::{
    geometric_series_product, MonomialSubstitution, MotivicRationalFunction, TAtom,
};
pub use truncated::TruncatedSeries;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("variable count mismatch: {0} vs {1}")]
    VariableCountMismatch(usize, usize),
    #[error("exponent vector of length {0}, expected {1}")]
    ExponentLength(usize, usize),
    #[error("atom exponent vector must be nonzero")]
    ConstantAtom,
    #[error("{0} substitutions given for {1} variables")]
    SubstitutionArity(usize, usize),
    #[error("divergent substitution: atom {0} becomes zero")]
    DivergentSubstitution(String),
    #[error("exponent overflow during substitution")]
    ExponentOverflow,
    #[error("product over zero variables")]
    EmptyProduct,
    #[error(transparent)]
    Ring(#[from] RingError),
}
