//! Numerical construction of the global solution `y*` of
//! `y'' - y' + y = y^3` with `y(-∞) = 0`, `y(0) = 0`, `y(∞) = 1`, and of the
//! monopole profile `f(r) = y*(ln(r/r0))`.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod branch;
pub mod cli;
pub mod constants;
mod error;
pub mod ivp;
pub mod manifold;
pub mod phase;
pub mod picard;
pub mod pipeline;
pub mod profile;
pub mod quadrature;
pub mod roots;
pub mod shooting;
pub mod verify;

pub use error::Error;
