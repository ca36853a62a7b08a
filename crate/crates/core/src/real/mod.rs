//! High-precision real arithmetic with rigorous error radii.
//!
//! [`Real`] is a ball (midpoint plus radius) over a binary big-float;
//! [`Jet`] is a truncated Taylor series of `Real`s used for derivatives in
//! the complex variable `s`.

mod ball;
mod float;
mod jet;

pub use ball::{ln2, ln_int, pi, Real};
pub(crate) use ball::ratio_to_f64;
pub use float::BigFloat;
pub use jet::Jet;

/// Default working precision in bits.
pub const DEFAULT_PREC: u32 = 256;
