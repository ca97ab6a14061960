// negated float comparisons are deliberate: they reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod coherent;
pub mod error;
pub mod massmap;
pub mod specfun;
pub mod table;
pub mod verify;
pub mod xspace;
pub mod yspace;

pub use error::{Error, Result};
