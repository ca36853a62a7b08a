use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::factor::{factorize, FactoredInteger};
use crate::error::{domain, Error, Result};

fn carmichael_prime_power(p: u64, a: u32) -> u64 {
    let phi = p.pow(a - 1) * (p - 1);
    if p == 2 && a > 2 {
        phi / 2
    } else {
        phi
    }
}

/// Carmichael's function λ(n).
pub fn carmichael(n: &FactoredInteger) -> u64 {
    n.factors()
        .iter()
        .fold(1u64, |acc, &(p, a)| acc.lcm(&carmichael_prime_power(p, a)))
}

/// λ(a) for a small exponent `a >= 1`.
pub fn carmichael_small(a: u32) -> u64 {
    carmichael(&factorize(a as u64).expect("a >= 1"))
}

fn totient_small(a: u32) -> u64 {
    factorize(a as u64)
        .expect("a >= 1")
        .factors()
        .iter()
        .map(|&(p, e)| p.pow(e - 1) * (p - 1))
        .product()
}

fn check_r(r: u32) -> Result<()> {
    if (1..=4).contains(&r) {
        Ok(())
    } else {
        domain(format!("r must be in 1..4, got {r}"))
    }
}

/// λ⁽ᵉ⁾_r(n): product of λ(a) over p^a || n when every a >= r, otherwise 0.
pub fn exp_carmichael_r(n: &FactoredInteger, r: u32) -> Result<u64> {
    check_r(r)?;
    let mut v = 1u64;
    for a in n.exponents() {
        if a < r {
            return Ok(0);
        }
        v *= carmichael_small(a);
    }
    Ok(v)
}

/// φ⁽ᵉ⁾(n): product of φ(a) over p^a || n.
pub fn exp_totient(n: &FactoredInteger) -> u64 {
    n.exponents().map(totient_small).product()
}

/// Number of nonnegative solutions of `sum a_i e_i = m`.
pub fn tau_local(a: &[u32], m: u32) -> u64 {
    let m = m as usize;
    let mut ways = vec![0u64; m + 1];
    ways[0] = 1;
    for &ai in a {
        let ai = ai as usize;
        for t in ai..=m {
            ways[t] += ways[t - ai];
        }
    }
    ways[m]
}

/// τ(a_1, ..., a_k; n), the number of ordered representations
/// `n = d_1^{a_1} ... d_k^{a_k}`.
pub fn tau_multi(a: &[u32], n: &FactoredInteger) -> Result<u64> {
    check_tau(a)?;
    Ok(n.exponents().map(|e| tau_local(a, e)).product())
}

fn check_tau(a: &[u32]) -> Result<()> {
    if a.is_empty() {
        return domain("tau needs at least one exponent");
    }
    if a.contains(&0) {
        return domain("tau exponents must be >= 1");
    }
    Ok(())
}

/// Functions that the sieve and the CLI know how to evaluate.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FunctionId {
    /// λ itself (not of exponential type).
    Carmichael,
    /// λ⁽ᵉ⁾_r with r in 1..4; r = 1 is λ⁽ᵉ⁾.
    ExpCarmichael(u32),
    ExpTotient,
    Tau(Vec<u32>),
}

impl FunctionId {
    pub fn exp_carmichael(r: u32) -> Result<Self> {
        check_r(r)?;
        Ok(FunctionId::ExpCarmichael(r))
    }

    pub fn tau(a: Vec<u32>) -> Result<Self> {
        check_tau(&a)?;
        Ok(FunctionId::Tau(a))
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            FunctionId::ExpCarmichael(r) => check_r(*r),
            FunctionId::Tau(a) => check_tau(a),
            _ => Ok(()),
        }
    }

    /// True when the value at p^a depends on a only.
    pub fn is_exponential(&self) -> bool {
        !matches!(self, FunctionId::Carmichael)
    }

    pub fn eval(&self, n: &FactoredInteger) -> Result<u64> {
        match self {
            FunctionId::Carmichael => Ok(carmichael(n)),
            FunctionId::ExpCarmichael(r) => exp_carmichael_r(n, *r),
            FunctionId::ExpTotient => Ok(exp_totient(n)),
            FunctionId::Tau(a) => tau_multi(a, n),
        }
    }

    pub fn eval_u64(&self, n: u64) -> Result<u64> {
        self.eval(&factorize(n)?)
    }

    /// Table of local values f(p^a) for a = 0..=max_exp (index 0 is 1).
    /// Only meaningful for exponential-type functions.
    pub fn local_table(&self, max_exp: u32) -> Result<Vec<u64>> {
        self.validate()?;
        let mut t = Vec::with_capacity(max_exp as usize + 1);
        t.push(1);
        for a in 1..=max_exp {
            let v = match self {
                FunctionId::Carmichael => return domain("λ is not of exponential type"),
                FunctionId::ExpCarmichael(r) => {
                    if a < *r {
                        0
                    } else {
                        carmichael_small(a)
                    }
                }
                FunctionId::ExpTotient => totient_small(a),
                FunctionId::Tau(e) => tau_local(e, a),
            };
            t.push(v);
        }
        Ok(t)
    }
}

impl fmt::Display for FunctionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FunctionId::Carmichael => write!(f, "lambda"),
            FunctionId::ExpCarmichael(1) => write!(f, "lambda-e"),
            FunctionId::ExpCarmichael(r) => write!(f, "lambda-e{r}"),
            FunctionId::ExpTotient => write!(f, "phi-e"),
            FunctionId::Tau(a) => {
                let parts: Vec<String> = a.iter().map(u32::to_string).collect();
                write!(f, "tau:{}", parts.join(","))
            }
        }
    }
}

impl FromStr for FunctionId {
    type Err = Error;

    /// Accepts `lambda`, `lambda-e`, `lambda-e1`..`lambda-e4`, `phi-e` and
    /// `tau:1,3,5,5`.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lambda" => return Ok(FunctionId::Carmichael),
            "lambda-e" => return Ok(FunctionId::ExpCarmichael(1)),
            "phi-e" => return Ok(FunctionId::ExpTotient),
            _ => {}
        }
        if let Some(r) = s.strip_prefix("lambda-e") {
            let r: u32 = r
                .parse()
                .map_err(|_| Error::Domain(format!("unknown function id '{s}'")))?;
            return FunctionId::exp_carmichael(r);
        }
        if let Some(list) = s.strip_prefix("tau:") {
            return FunctionId::tau(parse_exponent_list(list)?);
        }
        domain(format!("unknown function id '{s}'"))
    }
}

/// Parse a comma-separated list such as `1,3,5,5`.
pub fn parse_exponent_list(s: &str) -> Result<Vec<u32>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<u32>()
                .map_err(|_| Error::Domain(format!("bad exponent '{t}' in '{s}'")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f(n: u64) -> FactoredInteger {
        factorize(n).unwrap()
    }

    /// Multiplicative order of every unit, maximized: the definition of λ.
    fn carmichael_brute(n: u64) -> u64 {
        if n == 1 {
            return 1;
        }
        let mut best = 1;
        for g in 1..n {
            if g.gcd(&n) != 1 {
                continue;
            }
            let mut x = g % n;
            let mut k = 1;
            while x != 1 % n {
                x = x * g % n;
                k += 1;
            }
            best = best.max(k);
        }
        best
    }

    #[test]
    fn carmichael_examples() {
        assert_eq!(carmichael(&f(8)), 2);
        assert_eq!(carmichael(&f(5)), 4);
        assert_eq!(carmichael(&f(12)), 2);
        assert_eq!(carmichael(&f(1)), 1);
    }

    #[test]
    fn carmichael_matches_group_exponent() {
        for n in 1..400 {
            assert_eq!(carmichael(&f(n)), carmichael_brute(n), "n = {n}");
        }
    }

    #[test]
    fn exp_carmichael_examples() {
        assert_eq!(exp_carmichael_r(&f(12), 1).unwrap(), 1);
        assert_eq!(exp_carmichael_r(&f(12), 2).unwrap(), 0);
        assert_eq!(exp_carmichael_r(&f(32 * 243), 4).unwrap(), 16);
        for r in 1..=4 {
            assert_eq!(exp_carmichael_r(&f(1), r).unwrap(), 1);
        }
        assert!(exp_carmichael_r(&f(12), 0).is_err());
        assert!(exp_carmichael_r(&f(12), 5).is_err());
    }

    #[test]
    fn exp_totient_examples() {
        assert_eq!(exp_totient(&f(1)), 1);
        assert_eq!(exp_totient(&f(49)), 1);
        assert_eq!(exp_totient(&f(32 * 243)), 16);
    }

    #[test]
    fn tau_examples() {
        let a = [1, 3, 5, 5];
        assert_eq!(tau_multi(&a, &f(1)).unwrap(), 1);
        assert_eq!(tau_multi(&a, &f(32)).unwrap(), 4);
        for p in [2, 3, 101] {
            assert_eq!(tau_multi(&[2, 3, 3, 4], &f(p)).unwrap(), 0);
        }
        assert!(tau_multi(&[], &f(6)).is_err());
    }

    #[test]
    fn tau_matches_enumeration() {
        // direct count of (d1,d2) with d1 * d2^2 = n
        for n in 1..500u64 {
            let mut count = 0;
            let mut d2 = 1;
            while d2 * d2 <= n {
                if n % (d2 * d2) == 0 {
                    count += 1;
                }
                d2 += 1;
            }
            assert_eq!(tau_multi(&[1, 2], &f(n)).unwrap(), count);
        }
    }

    #[test]
    fn function_ids_round_trip() {
        for s in ["lambda", "lambda-e", "lambda-e3", "phi-e", "tau:1,3,5,5"] {
            let id: FunctionId = s.parse().unwrap();
            assert_eq!(id.to_string(), s);
        }
        assert!("lambda-e7".parse::<FunctionId>().is_err());
        assert!("sigma".parse::<FunctionId>().is_err());
    }

    proptest! {
        #[test]
        fn gating_and_ordering(n in 2u64..100_000) {
            let fac = f(n);
            let min_exp = fac.exponents().min().unwrap();
            let vals: Vec<u64> = (1..=4).map(|r| exp_carmichael_r(&fac, r).unwrap()).collect();
            for r in 1..=4u32 {
                prop_assert_eq!(vals[r as usize - 1] == 0, min_exp < r);
            }
            prop_assert!(vals[3] <= vals[2] && vals[2] <= vals[1] && vals[1] <= vals[0]);
        }

        #[test]
        fn lambda_below_m(m in 2u64..10_000) {
            prop_assert!(carmichael(&f(m)) < m);
        }
    }
}
