//! Power evaluation and layout/PTO optimization for arrays of submerged
//! wave-energy converters.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod farm;
pub mod harness;
pub mod hydro;
pub mod optimizers;
pub mod scenario;
pub mod strategies;
