//! Exact arithmetic functions of exponential type and their partial sums.

mod convolve;
mod factor;
mod functions;
mod maxorder;
mod sieve;

pub use convolve::dirichlet_convolve;
pub use factor::{factorize, factorize_signed, is_prime, FactoredInteger};
pub use functions::{
    carmichael, carmichael_small, exp_carmichael_r, exp_totient, parse_exponent_list, tau_local, tau_multi,
    FunctionId,
};
pub use maxorder::{max_order_constant, max_order_scan, sup_log_carmichael_ratio, MaxOrderReport};
pub use sieve::{primes_up_to, sieve_values, summatory, SieveConfig, SummatoryTable};

use std::fmt::Display;

/// CSV with columns `n,value`, starting at n = `start`.
pub fn coefficients_csv<T: Display>(start: u64, values: &[T]) -> String {
    let mut out = String::from("n,value\n");
    for (i, v) in values.iter().enumerate() {
        out.push_str(&format!("{},{v}\n", start + i as u64));
    }
    out
}

/// JSON array of `{n, value}` records with decimal-string integers.
pub fn coefficients_json<T: Display>(start: u64, values: &[T]) -> serde_json::Value {
    serde_json::Value::Array(
        values
            .iter()
            .enumerate()
            .map(|(i, v)| serde_json::json!({ "n": (start + i as u64).to_string(), "value": v.to_string() }))
            .collect(),
    )
}
