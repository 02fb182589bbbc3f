//! Weighted mean matrices, their `l^p` operator norms and the machinery to
//! check Hardy-type inequalities numerically.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod certificates;
pub mod error;
pub mod format;
pub mod matrices;
pub mod means;
pub mod spectral;
pub mod sum;
pub mod verify;

pub use error::{Error, Result};
