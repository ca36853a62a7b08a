//! Euler-product factorizations L = Z · G and evaluation of G.

mod euler;
mod local;
mod power;

pub use local::{
    carmichael_of_exponents, g_coefficients, g_coefficients_with_limit, g_growth_exponent, local_factor,
    local_factor_g, local_factor_l, local_factor_z, local_factor_z_inverse, required_vanishing, vanishing_report,
    verify_vanishing, z_coefficients, VanishingReport, ZetaProductSpec, G_COEFFICIENT_LIMIT,
};
pub use euler::{evaluate_g, evaluate_g_jet, g_vanishing_order, GEvalConfig, GEvaluation, GRecord};
pub use power::PowerSeriesQ;
