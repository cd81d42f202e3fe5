//! Symbolic computation of motivic Igusa zeta functions and motivic volumes
//! from combinatorial resolution data, with a Presburger-arithmetic engine
//! for rational generating functions and an evaluator for semi-algebraic
//! conditions on truncated power series.
//!
//! Every closed form has a truncated-series counterpart computed by direct
//! summation, so results can be cross-checked coefficient by coefficient.

pub mod grothendieck_ring;
pub mod input;
pub mod presburger;
pub mod rational_series;
pub mod semialg_eval;
pub mod snc_zeta;
pub mod specialization;
