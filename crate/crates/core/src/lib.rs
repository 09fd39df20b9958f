//! Root numbers of elliptic curves over Q and the parity predictions derived from them.

pub mod arith;
pub mod artin;
pub mod curve;
pub mod error;
pub mod globalroot;
pub mod localroot;
pub mod predict;
pub(crate) mod serde_util;

pub use arith::{Rational, Sign, Valuation};
pub use error::{Error, Result};
