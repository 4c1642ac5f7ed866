//! Search, verification and round-trip tooling for integer solutions of
//! `a^4 + b^4 + c^4 + d^4 = (a + b + c + d)^4`.

pub mod error;
pub mod exactmath;
pub mod quadform;
pub mod quartic;
pub mod ecurve;
pub mod pipeline;
pub mod cli;

pub use error::{Error, Result};
