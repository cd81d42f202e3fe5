//! Structural check that a value lies in the subring generated by
//! `M[T]`, the series `(1 - L^{-a}T^b)^{-1}` and `(L^i - 1)^{-1}`.
//!
//! The types already enforce most of this; the walker re-reads the stored
//! representation so a violation introduced by a future change shows up in
//! tests rather than in downstream arithmetic.

use thiserror::Error;

use crate::grothendieck_ring::LocalizedMotivicElement;

use super::MotivicRationalFunction;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ShapeViolation {
    #[error("stored zero coefficient at {0:?}")]
    ZeroCoefficient(Vec<u32>),
    #[error("exponent {0:?} has the wrong length")]
    ExponentLength(Vec<u32>),
    #[error("denominator atom with zero T-exponent")]
    ConstantAtom,
    #[error("denominator atom of the wrong length")]
    AtomLength,
    #[error("coefficient denominator atom L^{0} - 1 with exponent < 1")]
    CoefficientAtom(u32),
    #[error("zero multiplicity stored for a denominator atom")]
    ZeroMultiplicity,
}

/// Checks a coefficient: only atoms `L^i - 1` with `i ≥ 1` may be inverted.
pub fn check_localized(x: &LocalizedMotivicElement) -> Result<(), ShapeViolation> {
    for (&i, &k) in x.den() {
        if i < 1 {
            return Err(ShapeViolation::CoefficientAtom(i));
        }
        if k == 0 {
            return Err(ShapeViolation::ZeroMultiplicity);
        }
    }
    Ok(())
}

/// Walks numerator and denominator of `f`.
pub fn check_rational_function(f: &MotivicRationalFunction) -> Result<(), ShapeViolation> {
    for (n, c) in f.num() {
        if n.len() != f.nvars() {
            return Err(ShapeViolation::ExponentLength(n.clone()));
        }
        if c.is_zero() {
            return Err(ShapeViolation::ZeroCoefficient(n.clone()));
        }
        check_localized(c)?;
    }
    for (atom, &k) in f.den() {
        if atom.b().len() != f.nvars() {
            return Err(ShapeViolation::AtomLength);
        }
        if atom.b().iter().all(|&x| x == 0) {
            return Err(ShapeViolation::ConstantAtom);
        }
        if k == 0 {
            return Err(ShapeViolation::ZeroMultiplicity);
        }
    }
    Ok(())
}
