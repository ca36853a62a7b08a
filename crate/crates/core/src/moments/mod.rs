//! Moment bounds for ζ on vertical lines, the contour threshold for the
//! error term, and the Hölder balance that fixes C₄.

mod holder;
mod mu;
mod pointwise;
mod table;

pub(crate) use crate::real::ratio_to_f64 as ratio_f64;

pub use holder::{holder_deficit, quadratic_roots, solve_c4, C4Report, HolderReport, HolderTerm, MomentModel, QuadraticSurd, HOLDER_TERMS};
pub use mu::{
    alpha_exponent, alpha_pieces, contour_threshold, contour_threshold_value, mu_half, mu_hat, mu_three_fifths,
    threshold_from_pieces, AffinePiece, ContourThreshold, MuModel,
};
pub use pointwise::{combined_m, pointwise_m, PointwiseModel, PointwiseValue, POINTWISE_GRID};
pub use table::{
    last_breakpoint, m_table, moment_requirements, moment_table, Endpoint, MomentRequirement, PiecewiseRationalBound, Poly,
    Segment,
};
