//! Exponent pairs, the A and B processes, and searches over the pair tree.

mod kratzel;
mod pair;
mod search;

pub use kratzel::{kratzel_check, kratzel_exponent, kratzel_formula, C3bReading, KratzelReport};
pub use pair::{apply_word, from_word, ExponentPair, Seed};
pub use search::{
    mu_bound, mu_bound_value, mu_bound_with, optimize_fractional, pairs_to_depth, FractionalObjective, LinearConstraint, Optimum,
    SearchOptions, SearchOutcome,
};
