use std::sync::Mutex;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

static CACHE: Mutex<Vec<BigRational>> = Mutex::new(Vec::new());

/// Even-index Bernoulli numbers B_0, B_2, ..., B_{2m} (cached).
///
/// Uses sum_{k=0}^{n} C(n+1, k) B_k = 0 restricted to even k, which holds
/// because B_k = 0 for odd k > 1 and the B_1 term is handled explicitly.
pub fn bernoulli_even(m: usize) -> Vec<BigRational> {
    let mut cache = CACHE.lock().unwrap_or_else(|e| e.into_inner());
    if cache.is_empty() {
        cache.push(BigRational::one());
    }
    while cache.len() <= m {
        let j = cache.len();
        let n = 2 * j;
        // sum over even k < n of C(n+1,k) B_k  +  C(n+1,1) B_1 + (n+1) B_n = 0
        let mut binom = BigInt::one(); // C(n+1, 0)
        let mut acc = BigRational::zero();
        for k in 0..n {
            if k % 2 == 0 {
                acc += BigRational::from_integer(binom.clone()) * &cache[k / 2];
            } else if k == 1 {
                acc -= BigRational::new(binom.clone(), BigInt::from(2));
            }
            binom = binom * BigInt::from(n + 1 - k) / BigInt::from(k + 1);
        }
        let b = -acc / BigRational::from_integer(BigInt::from(n + 1));
        cache.push(b);
    }
    cache[..=m].to_vec()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_values() {
        let b = bernoulli_even(6);
        let q = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        assert_eq!(b[1], q(1, 6));
        assert_eq!(b[2], q(-1, 30));
        assert_eq!(b[3], q(1, 42));
        assert_eq!(b[4], q(-1, 30));
        assert_eq!(b[5], q(5, 66));
        assert_eq!(b[6], q(-691, 2730));
    }
}
