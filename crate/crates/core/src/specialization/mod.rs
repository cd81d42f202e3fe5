//! Specializations of the SNC zeta function.
//!
//! Substituting monomials for the variables of `Z_D` gives the motivic Igusa
//! zeta functions of the map `f` resolved by the divisor data, and the
//! substitution `T_i ↦ L^{-k_i}` gives motivic volumes. Each specialization
//! has an enumerative counterpart summed over fibers of the substitution.

mod resolution;
mod volume;

use thiserror::Error;

use crate::grothendieck_ring::RingError;
use crate::rational_series::SeriesError;
use crate::snc_zeta::SncError;

pub use resolution::{
    u_to_l_inverse, zeta_f, zeta_f_series_by_enumeration, zeta_two_variable,
    zeta_two_variable_series_by_enumeration, ResolutionData,
};
pub use volume::{
    motivic_volume_integral, rational, total_volume, volume_numeric_limit, volume_partial_sum,
    volume_tail_exponent, VolumeData, VolumeExponent,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpecializationError {
    #[error("{what} has length {got}, expected {expected}")]
    Length {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("nu of component {0} must be at least 1")]
    NuZero(usize),
    #[error("multiplicity a of component {0} must be at least 1")]
    MultiplicityZero(usize),
    #[error("component {0} has zero weight, so the fibers of the substitution are infinite")]
    InfiniteFiber(usize),
    #[error("substitution did not produce a constant")]
    NotConstant,
    #[error("total volume needs l = 0, got {0} functions")]
    TotalVolumeNeedsNoFunctions(usize),
    #[error("no point count for symbol [{0}]")]
    MissingCount(String),
    #[error(transparent)]
    Snc(#[from] SncError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Ring(#[from] RingError),
}
