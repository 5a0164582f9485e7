// Negated float comparisons in this crate are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod distributions;
pub mod division;
pub mod entire_fn;
pub mod error;
pub mod group;
pub mod poly;
pub mod quadrature;
pub mod rank_one;
pub mod search;
pub mod slow_decrease;
pub mod symbols;
pub mod witness;

pub use error::{Error, Result};
