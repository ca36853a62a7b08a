use serde::Serialize;

use super::functions::{carmichael, FunctionId};
use super::factorize;
use super::sieve::{sieve_values, SieveConfig};
use crate::error::{domain, Result};

/// (log 4)/5, the supremum of log λ(m)/m.
pub fn max_order_constant() -> f64 {
    4f64.ln() / 5.0
}

#[derive(Clone, Debug, Serialize)]
pub struct MaxOrderReport {
    pub x: u64,
    /// Smallest n in [2, x] attaining the maximum.
    pub n_star: u64,
    pub max_value: u64,
    /// log F(n*) · log log n* / log n*.
    pub normalized: f64,
    pub c: f64,
}

/// Maximum of λ⁽ᵉ⁾ on [2, x] and its normalized exponent.
pub fn max_order_scan(x: u64, cfg: &SieveConfig) -> Result<MaxOrderReport> {
    if x < 16 {
        return domain("max_order_scan needs x >= 16");
    }
    let vals = sieve_values(&FunctionId::ExpCarmichael(1), 2, x + 1, cfg)?;
    let mut n_star = 2;
    let mut best = 0;
    for (i, &v) in vals.iter().enumerate() {
        if v > best {
            best = v;
            n_star = i as u64 + 2;
        }
    }
    let ln = (n_star as f64).ln();
    Ok(MaxOrderReport {
        x,
        n_star,
        max_value: best,
        normalized: (best as f64).ln() * ln.ln() / ln,
        c: max_order_constant(),
    })
}

/// The m <= limit maximizing log λ(m)/m, with ties broken toward the
/// smallest m. Candidates close in floating point are compared exactly via
/// λ(a)^b against λ(b)^a.
pub fn sup_log_carmichael_ratio(limit: u64) -> Result<(u64, f64)> {
    if limit < 2 {
        return domain("limit must be >= 2");
    }
    let lam: Vec<u64> = (1..=limit).map(|m| carmichael(&factorize(m).unwrap())).collect();
    let ratio = |m: u64| (lam[m as usize - 1] as f64).ln() / m as f64;
    let top = (1..=limit).map(ratio).fold(f64::MIN, f64::max);
    let mut best = 0u64;
    for m in 1..=limit {
        if ratio(m) < top - 1e-9 {
            continue;
        }
        if best == 0 || exact_greater(lam[m as usize - 1], m, lam[best as usize - 1], best) {
            best = m;
        }
    }
    Ok((best, ratio(best)))
}

/// log(la)/a > log(lb)/b, i.e. la^b > lb^a.
fn exact_greater(la: u64, a: u64, lb: u64, b: u64) -> bool {
    use num_bigint::BigUint;
    BigUint::from(la).pow(b as u32) > BigUint::from(lb).pow(a as u32)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scan_to_31() {
        let r = max_order_scan(31, &SieveConfig::default()).unwrap();
        assert_eq!(r.max_value, 2);
        assert_eq!(r.n_star, 8);
        assert!(max_order_scan(15, &SieveConfig::default()).is_err());
    }

    #[test]
    fn sup_ratio_at_five() {
        let (m, v) = sup_log_carmichael_ratio(10_000).unwrap();
        assert_eq!(m, 5);
        assert!((v - max_order_constant()).abs() < 1e-15);
    }
}
