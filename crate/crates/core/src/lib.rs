// NaN must fail the `!(x > 0.0)` parameter checks
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channel;
pub mod cli;
pub mod error;
pub mod linalg;
pub mod outage;
pub mod quadrature;
pub mod relay_multi;
pub mod relay_single;
pub mod sdp;
pub mod sim;
pub mod special;

pub use error::{Error, Result};
