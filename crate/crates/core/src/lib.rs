//! Exact arithmetic and certificates for congruence towers of Kleinian groups
//! over imaginary quadratic fields.

pub mod congruence;
pub mod error;
pub mod geometry;
pub mod matgroup;
pub mod presets;
pub mod quadfield;
pub mod spectrum;
pub mod tower;

pub use error::{Error, Result};
