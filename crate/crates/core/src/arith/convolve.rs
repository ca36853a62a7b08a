use std::ops::{Add, Mul};

use num_traits::Zero;

use crate::error::{domain, Result};

/// Dirichlet convolution of two coefficient lists; index 0 holds n = 1.
pub fn dirichlet_convolve<T>(f: &[T], g: &[T]) -> Result<Vec<T>>
where
    T: Clone + Zero + Add<Output = T>,
    for<'a> &'a T: Mul<&'a T, Output = T>,
{
    if f.len() != g.len() {
        return domain(format!("length mismatch: {} vs {}", f.len(), g.len()));
    }
    let n = f.len();
    let mut out = vec![T::zero(); n];
    for d in 1..=n {
        if f[d - 1].is_zero() {
            continue;
        }
        let mut m = d;
        let mut q = 1;
        while m <= n {
            if !g[q - 1].is_zero() {
                out[m - 1] = out[m - 1].clone() + &f[d - 1] * &g[q - 1];
            }
            m += d;
            q += 1;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn identity_and_divisor_counts() {
        let g: Vec<i64> = vec![3, -1, 4, 1, -5, 9];
        let mut e = vec![0i64; 6];
        e[0] = 1;
        assert_eq!(dirichlet_convolve(&e, &g).unwrap(), g);
        let ones = vec![1i64; 6];
        assert_eq!(dirichlet_convolve(&ones, &ones).unwrap(), vec![1, 2, 2, 3, 2, 4]);
    }

    #[test]
    fn mobius_inverts_ones() {
        let n = 200;
        let ones: Vec<BigInt> = vec![BigInt::from(1); n];
        let mut mu = vec![BigInt::from(0); n];
        for k in 1..=n {
            let f = crate::arith::factorize(k as u64).unwrap();
            if f.exponents().all(|a| a == 1) {
                mu[k - 1] = BigInt::from(if f.factors().len().is_multiple_of(2) { 1 } else { -1 });
            }
        }
        let e = dirichlet_convolve(&ones, &mu).unwrap();
        assert_eq!(e[0], BigInt::from(1));
        assert!(e[1..].iter().all(|v| v.is_zero()));
    }

    #[test]
    fn length_mismatch() {
        assert!(dirichlet_convolve(&[1i64, 2], &[1i64]).is_err());
    }
}
