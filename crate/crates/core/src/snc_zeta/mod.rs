//! Zeta functions of strict-normal-crossings divisors.
//!
//! The coefficient of `T^n` is a cylinder class `[D_J°](L-1)^{|J|}L^{-|n|}`
//! (after the `L^{-|n|d}` weighting) whenever `n` satisfies the support
//! condition [`property_p`]. [`zeta_closed_form`] returns the rational
//! function and [`zeta_series_truncated`] the directly summed series; the two
//! must agree coefficient by coefficient.

mod closed_form;
mod components;
mod data;
mod series;

use thiserror::Error;

use crate::grothendieck_ring::RingError;
use crate::rational_series::SeriesError;

pub use closed_form::{zeta_at_point_closed_form, zeta_closed_form, ZetaCase};
pub use components::{multi_indices, ComponentSet, MAX_COMPONENTS};
pub use data::{PointStratumData, SncDivisorData};
pub use series::{
    cylinder_class, point_cylinder_class, property_p, zeta_at_point_series_truncated,
    zeta_series_truncated,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SncError {
    #[error("relative dimension d must be at least 1")]
    ZeroRelativeDimension,
    #[error("the special fiber must have at least one connected component (r >= 1)")]
    NoFiberComponents,
    #[error("at most {} components are supported, got {0}", MAX_COMPONENTS)]
    TooManyComponents(usize),
    #[error("component index {index} out of range for m = {m}")]
    ComponentOutOfRange { index: usize, m: usize },
    #[error("repeated component index")]
    DuplicateIndex,
    #[error("{vertical} vertical components but only r = {r} fiber components")]
    TooManyVertical { vertical: usize, r: usize },
    #[error("{what} has dimension {dim} > d = {d}")]
    DimensionTooLarge { what: String, dim: u32, d: u32 },
    #[error("stratum {0} meets two vertical components and must be empty")]
    VerticalIntersection(String),
    #[error("stratum {0} given twice")]
    DuplicateStratum(String),
    #[error("fiber class given for component {0}, which is not vertical")]
    FiberClassNotVertical(usize),
    #[error("missing fiber class for vertical component {0}")]
    MissingFiberClass(usize),
    #[error("fiber class and stratum class of component {0} disagree")]
    FiberClassConflict(usize),
    #[error("multi-index of length {got}, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("inconsistent point data: {0}")]
    InconsistentPoint(String),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Ring(#[from] RingError),
}
