#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod atoms;
pub mod campaign;
pub mod corpus;
pub mod error;
pub mod grid;
pub mod lipschitz;
pub mod maximal;
pub mod oscillation;
pub mod orlicz;
pub mod product;
pub mod projection;

pub use error::{Error, Result};
