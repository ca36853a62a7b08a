use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Canonical factorization `p1^a1 ... pm^am` with strictly increasing primes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactoredInteger {
    factors: Vec<(u64, u32)>,
}

impl FactoredInteger {
    /// Validating constructor.
    pub fn new(factors: Vec<(u64, u32)>) -> Result<Self> {
        for w in factors.windows(2) {
            if w[0].0 >= w[1].0 {
                return domain(format!("primes not strictly increasing: {} then {}", w[0].0, w[1].0));
            }
        }
        for &(p, a) in &factors {
            if a == 0 {
                return domain(format!("zero exponent for prime {p}"));
            }
            if !is_prime(p) {
                return domain(format!("{p} is not prime"));
            }
        }
        Ok(FactoredInteger { factors })
    }

    pub fn one() -> Self {
        FactoredInteger { factors: Vec::new() }
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn exponents(&self) -> impl Iterator<Item = u32> + '_ {
        self.factors.iter().map(|&(_, a)| a)
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    /// The integer itself, in arbitrary precision.
    pub fn value(&self) -> BigUint {
        let mut v = BigUint::one();
        for &(p, a) in &self.factors {
            v *= BigUint::from(p).pow(a);
        }
        v
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin for all u64.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &p in &SMALL {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &SMALL {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Brent's variant of Pollard rho; `n` must be odd and composite.
fn pollard_brent(n: u64) -> u64 {
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut g) = (2u64, 2u64, 1u64);
        let mut q = 1u64;
        let mut r = 1u64;
        let m = 128u64;
        let mut ys = y;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..m.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd(q, n);
                k += m;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
        c += 1;
    }
}

fn split(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let d = pollard_brent(n);
    split(d, out);
    split(n / d, out);
}

/// Canonical factorization of `n >= 1`.
pub fn factorize(n: u64) -> Result<FactoredInteger> {
    if n == 0 {
        return domain("cannot factor 0");
    }
    let mut n = n;
    let mut primes = Vec::new();
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
        while n.is_multiple_of(p) {
            primes.push(p);
            n /= p;
        }
    }
    let mut p = 53u64;
    while p * p <= n && p < 1 << 12 {
        while n.is_multiple_of(p) {
            primes.push(p);
            n /= p;
        }
        p += 2;
    }
    split(n, &mut primes);
    primes.sort_unstable();
    let mut factors: Vec<(u64, u32)> = Vec::new();
    for p in primes {
        match factors.last_mut() {
            Some((q, a)) if *q == p => *a += 1,
            _ => factors.push((p, 1)),
        }
    }
    Ok(FactoredInteger { factors })
}

/// Factorization of a signed input; zero and negatives are domain errors.
pub fn factorize_signed(n: i128) -> Result<FactoredInteger> {
    if n <= 0 {
        return domain(format!("factorization needs n >= 1, got {n}"));
    }
    match u64::try_from(n) {
        Ok(v) => factorize(v),
        Err(_) => domain(format!("{n} exceeds the u64 range")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_cases() {
        assert!(factorize(1).unwrap().is_one());
        assert_eq!(factorize(12).unwrap().factors(), &[(2, 2), (3, 1)]);
        // 2^6 * 5^5
        let f = factorize(200_000).unwrap();
        assert_eq!(f.factors(), &[(2, 6), (5, 5)]);
        assert_eq!(f.value(), BigUint::from(200_000u32));
    }

    #[test]
    fn zero_and_negative_rejected() {
        assert!(factorize(0).is_err());
        assert!(factorize_signed(-5).is_err());
        assert!(factorize_signed(0).is_err());
    }

    #[test]
    fn large_semiprime() {
        let p = 4_294_967_291u64; // largest prime below 2^32
        let q = 4_294_967_279u64;
        let f = factorize(p * q).unwrap();
        assert_eq!(f.factors(), &[(q, 1), (p, 1)]);
        assert!(is_prime(18_446_744_073_709_551_557));
    }

    #[test]
    fn constructor_validates() {
        assert!(FactoredInteger::new(vec![(3, 1), (2, 1)]).is_err());
        assert!(FactoredInteger::new(vec![(4, 1)]).is_err());
        assert!(FactoredInteger::new(vec![(2, 0)]).is_err());
        assert!(FactoredInteger::new(vec![(2, 3), (7, 1)]).is_ok());
    }

    proptest! {
        #[test]
        fn factorization_reconstructs(n in 1u64..u64::MAX / 2) {
            let f = factorize(n).unwrap();
            prop_assert_eq!(f.value(), BigUint::from(n));
            for w in f.factors().windows(2) {
                prop_assert!(w[0].0 < w[1].0);
            }
            for &(p, _) in f.factors() {
                prop_assert!(is_prime(p));
            }
        }
    }
}
