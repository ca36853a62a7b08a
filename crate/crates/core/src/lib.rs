pub mod arith;
pub mod error;
pub mod pairs;
pub mod moments;
pub mod real;
pub mod series;
pub mod zeta;

pub use error::{Error, Result};
