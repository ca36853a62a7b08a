//! ζ at real points, Laurent arithmetic at poles and main terms.

mod bernoulli;
mod em;
mod laurent;
mod main_term;
mod stieltjes;

pub use bernoulli::bernoulli_even;
pub use em::{zeta_at, zeta_jet, zeta_real, zeta_regular_jet_at_one};
pub use laurent::{recip_s_jet, zeta_laurent, LaurentSeries};
pub use stieltjes::{stieltjes, STIELTJES_LITERALS};
pub use main_term::{
    decade_ratio, error_exponent_bound, fit_exponent, log_grid, main_term, residual, residual_csv, residual_envelope, residual_f64, Fit, MainTerm,
    MainTermPiece, ResidualPoint,
};
