use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{domain, Result};

/// Formal power series c_0 + c_1 x + ... + c_K x^K over Q, truncated at K.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerSeriesQ {
    c: Vec<BigRational>,
}

impl PowerSeriesQ {
    /// Pads or truncates `coeffs` to order `k`.
    pub fn new(mut coeffs: Vec<BigRational>, k: usize) -> Self {
        coeffs.resize(k + 1, BigRational::zero());
        PowerSeriesQ { c: coeffs }
    }

    pub fn from_ints(coeffs: &[i64], k: usize) -> Self {
        Self::new(coeffs.iter().map(|&v| BigRational::from_integer(v.into())).collect(), k)
    }

    pub fn zero(k: usize) -> Self {
        Self::new(Vec::new(), k)
    }

    pub fn one(k: usize) -> Self {
        Self::new(vec![BigRational::one()], k)
    }

    /// 1 - x^a (or 1 - x^a truncated away when a > K).
    pub fn one_minus_monomial(a: usize, k: usize) -> Self {
        let mut s = Self::one(k);
        if a <= k {
            s.c[a] -= BigRational::one();
        }
        s
    }

    /// Truncation order K.
    pub fn order(&self) -> usize {
        self.c.len() - 1
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> &BigRational {
        &self.c[i]
    }

    pub fn truncate(&self, k: usize) -> Self {
        Self::new(self.c[..=k.min(self.order())].to_vec(), k.min(self.order()))
    }

    fn common(&self, other: &Self) -> usize {
        self.order().min(other.order())
    }

    pub fn add(&self, other: &Self) -> Self {
        let k = self.common(other);
        Self::new((0..=k).map(|i| &self.c[i] + &other.c[i]).collect(), k)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let k = self.common(other);
        Self::new((0..=k).map(|i| &self.c[i] - &other.c[i]).collect(), k)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let k = self.common(other);
        let mut c = vec![BigRational::zero(); k + 1];
        for i in 0..=k {
            if self.c[i].is_zero() {
                continue;
            }
            for j in 0..=k - i {
                if !other.c[j].is_zero() {
                    c[i + j] += &self.c[i] * &other.c[j];
                }
            }
        }
        PowerSeriesQ { c }
    }

    pub fn powi(&self, e: u32) -> Self {
        let mut out = Self::one(self.order());
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Multiplicative inverse; the constant term must be nonzero.
    pub fn inv(&self) -> Result<Self> {
        if self.c[0].is_zero() {
            return domain("cannot invert a power series with zero constant term");
        }
        let k = self.order();
        let inv0 = self.c[0].recip();
        let mut out = vec![inv0.clone()];
        for n in 1..=k {
            let mut acc = BigRational::zero();
            for j in 1..=n {
                if !self.c[j].is_zero() {
                    acc += &self.c[j] * &out[n - j];
                }
            }
            out.push(-acc * &inv0);
        }
        Ok(PowerSeriesQ { c: out })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    /// Smallest i >= 1 with a nonzero coefficient.
    pub fn first_nonzero_positive(&self) -> Option<usize> {
        (1..=self.order()).find(|&i| !self.c[i].is_zero())
    }

    /// Integer coefficients, when all are integral.
    pub fn to_integers(&self) -> Option<Vec<BigInt>> {
        self.c.iter().map(|q| q.is_integer().then(|| q.to_integer())).collect()
    }

    /// CSV with columns `index,numerator,denominator`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,numerator,denominator\n");
        for (i, q) in self.c.iter().enumerate() {
            out.push_str(&format!("{i},{},{}\n", q.numer(), q.denom()));
        }
        out
    }
}

impl fmt::Display for PowerSeriesQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, q) in self.c.iter().enumerate() {
            if q.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{q}")?,
                1 => write!(f, "{q}x")?,
                _ => write!(f, "{q}x^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(x^{})", self.order() + 1)
    }
}
