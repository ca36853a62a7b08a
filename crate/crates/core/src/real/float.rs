//! Binary floating-point numbers with an arbitrary-size mantissa.
//!
//! `BigFloat` is only a value container; error tracking lives in
//! [`super::Real`]. Every rounding operation reports an upper bound on the
//! absolute error it introduced so the ball layer can widen its radius.

use std::cmp::Ordering;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// `man * 2^exp`. Zero is always stored as `man = 0, exp = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigFloat {
    man: BigInt,
    exp: i64,
}

/// `m * 2^e` evaluated in f64 without intermediate overflow.
pub(crate) fn ldexp(m: f64, e: i64) -> f64 {
    if m == 0.0 || !m.is_finite() {
        return m;
    }
    let mut m = m;
    let mut e = e;
    while e > 1000 {
        m *= 2f64.powi(1000);
        e -= 1000;
        if m.is_infinite() {
            return m;
        }
    }
    while e < -1000 {
        m *= 2f64.powi(-1000);
        e += 1000;
        if m == 0.0 {
            return 0.0;
        }
    }
    m * 2f64.powi(e as i32)
}

impl BigFloat {
    pub fn zero() -> Self {
        BigFloat { man: BigInt::zero(), exp: 0 }
    }

    pub fn from_int(n: BigInt) -> Self {
        BigFloat { man: n, exp: 0 }.canonical()
    }

    pub fn from_parts(man: BigInt, exp: i64) -> Self {
        BigFloat { man, exp }.canonical()
    }

    /// Exact conversion; panics on NaN or infinity.
    pub fn from_f64(x: f64) -> Self {
        assert!(x.is_finite(), "non-finite f64 cannot become a BigFloat");
        if x == 0.0 {
            return Self::zero();
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 1 { -1i64 } else { 1 };
        let raw_exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if raw_exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), raw_exp - 1075)
        };
        BigFloat::from_parts(BigInt::from(m) * sign, e)
    }

    fn canonical(mut self) -> Self {
        if self.man.is_zero() {
            self.exp = 0;
            return self;
        }
        let tz = self.man.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.man >>= tz as usize;
            self.exp += tz as i64;
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.man.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.man.sign() == Sign::Minus
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.man
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    /// Position of the leading bit: `2^(top-1) <= |x| < 2^top`.
    pub fn top(&self) -> i64 {
        self.man.bits() as i64 + self.exp
    }

    /// Truncate to `prec` significant bits; returns the value and an upper
    /// bound on the absolute error.
    pub fn rounded(self, prec: u32) -> (Self, f64) {
        let bits = self.man.bits();
        if bits <= prec as u64 {
            return (self, 0.0);
        }
        let shift = bits - prec as u64;
        let man = &self.man >> shift as usize;
        let exp = self.exp + shift as i64;
        (BigFloat { man, exp }.canonical(), ldexp(1.0, exp).next_up())
    }

    pub fn neg(&self) -> Self {
        BigFloat { man: -&self.man, exp: self.exp }
    }

    pub fn abs(&self) -> Self {
        BigFloat { man: self.man.abs(), exp: self.exp }
    }

    /// Exact multiplication by `2^k`.
    pub fn mul_pow2(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        BigFloat { man: self.man.clone(), exp: self.exp + k }
    }

    /// Sum rounded to `prec` bits. Operands far below the precision window
    /// of the larger one are folded into the error bound instead of being
    /// aligned, which keeps mantissas short.
    pub fn add(&self, other: &Self, prec: u32) -> (Self, f64) {
        if self.is_zero() {
            return other.clone().rounded(prec);
        }
        if other.is_zero() {
            return self.clone().rounded(prec);
        }
        let (big, small) = if self.top() >= other.top() { (self, other) } else { (other, self) };
        if small.top() < big.top() - prec as i64 - 8 {
            let (v, e) = big.clone().rounded(prec);
            return (v, (e + small.mag_upper()).next_up());
        }
        let e = big.exp.min(small.exp);
        let a = &big.man << (big.exp - e) as usize;
        let b = &small.man << (small.exp - e) as usize;
        BigFloat::from_parts(a + b, e).rounded(prec)
    }

    pub fn sub(&self, other: &Self, prec: u32) -> (Self, f64) {
        self.add(&other.neg(), prec)
    }

    pub fn mul(&self, other: &Self, prec: u32) -> (Self, f64) {
        BigFloat { man: &self.man * &other.man, exp: self.exp + other.exp }
            .canonical()
            .rounded(prec)
    }

    /// Quotient truncated to `prec` bits. Panics on division by zero.
    pub fn div(&self, other: &Self, prec: u32) -> (Self, f64) {
        assert!(!other.is_zero(), "BigFloat division by zero");
        if self.is_zero() {
            return (Self::zero(), 0.0);
        }
        let shift = prec as i64 + 2 + other.man.bits() as i64 - self.man.bits() as i64;
        let shift = shift.max(0);
        let num = &self.man << shift as usize;
        let (q, r) = num.div_rem(&other.man);
        let exp = self.exp - other.exp - shift;
        let trunc = if r.is_zero() { 0.0 } else { ldexp(1.0, exp) };
        let (v, e) = BigFloat::from_parts(q, exp).rounded(prec);
        (v, (e + trunc).next_up())
    }

    /// Square root of a nonnegative value, truncated to `prec` bits.
    pub fn sqrt(&self, prec: u32) -> (Self, f64) {
        assert!(!self.is_negative(), "sqrt of negative BigFloat");
        if self.is_zero() {
            return (Self::zero(), 0.0);
        }
        // man * 2^shift with at least 2*prec+4 bits and exp - shift even
        let mut shift = (2 * prec as i64 + 4 - self.man.bits() as i64).max(0);
        if (self.exp - shift).rem_euclid(2) != 0 {
            shift += 1;
        }
        let scaled = &self.man << shift as usize;
        let root = scaled.sqrt();
        let exp = (self.exp - shift).div_euclid(2);
        let exact = &root * &root == scaled;
        let trunc = if exact { 0.0 } else { ldexp(1.0, exp) };
        let (v, e) = BigFloat::from_parts(root, exp).rounded(prec);
        (v, (e + trunc).next_up())
    }

    /// Upper bound on `|self|` as f64.
    pub fn mag_upper(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.man.bits();
        let shift = bits.saturating_sub(53);
        let top = (self.man.abs() >> shift as usize).to_u64().unwrap_or(u64::MAX);
        let top = if shift == 0 { top } else { top + 1 };
        ldexp(top as f64, self.exp + shift as i64).next_up()
    }

    /// Lower bound on `|self|` as f64 (may be zero on underflow).
    pub fn mag_lower(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.man.bits();
        let shift = bits.saturating_sub(53);
        let top = (self.man.abs() >> shift as usize).to_u64().unwrap_or(0);
        ldexp(top as f64, self.exp + shift as i64).next_down().max(0.0)
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.man.bits();
        let shift = bits.saturating_sub(62);
        let top = (&self.man >> shift as usize).to_i64().expect("62-bit mantissa fits i64");
        ldexp(top as f64, self.exp + shift as i64)
    }

    /// Floor of the value as a big integer.
    pub fn floor_int(&self) -> BigInt {
        if self.exp >= 0 {
            &self.man << self.exp as usize
        } else {
            // arithmetic shift rounds toward -inf
            &self.man >> (-self.exp) as usize
        }
    }

    /// Decimal scientific notation with `digits` significant digits,
    /// rounded to nearest.
    pub fn to_decimal(&self, digits: usize) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let digits = digits.max(1);
        let sign = if self.is_negative() { "-" } else { "" };
        let a = self.abs();
        let est = (a.top() as f64 - 0.5) * std::f64::consts::LOG10_2;
        let mut e10 = est.floor() as i64;
        let mut scaled = a.scaled_decimal(digits as i64 - 1 - e10);
        let ten = BigInt::from(10);
        let upper = num_traits::pow(ten.clone(), digits);
        let lower = num_traits::pow(ten.clone(), digits - 1);
        while scaled >= upper {
            e10 += 1;
            scaled = a.scaled_decimal(digits as i64 - 1 - e10);
        }
        while scaled < lower {
            e10 -= 1;
            scaled = a.scaled_decimal(digits as i64 - 1 - e10);
        }
        // rounding 9.99.. up can overflow one digit
        let mut s = scaled.to_string();
        if s.len() > digits {
            e10 += 1;
            s.truncate(digits);
        }
        let (head, tail) = s.split_at(1);
        if tail.is_empty() {
            format!("{sign}{head}e{e10}")
        } else {
            format!("{sign}{head}.{tail}e{e10}")
        }
    }

    /// round(|self| * 10^q) for a nonnegative value.
    fn scaled_decimal(&self, q: i64) -> BigInt {
        let mut num = self.man.clone();
        let mut den = BigInt::one();
        let p10 = num_traits::pow(BigInt::from(10), q.unsigned_abs() as usize);
        if q >= 0 {
            num *= p10;
        } else {
            den *= p10;
        }
        if self.exp >= 0 {
            num <<= self.exp as usize;
        } else {
            den <<= (-self.exp) as usize;
        }
        let (quo, rem) = num.div_rem(&den);
        if (rem << 1usize) >= den {
            quo + 1
        } else {
            quo
        }
    }

    pub fn cmp_value(&self, other: &Self) -> Ordering {
        let (d, _) = self.sub(other, u32::MAX);
        match d.man.sign() {
            Sign::Minus => Ordering::Less,
            Sign::NoSign => Ordering::Equal,
            Sign::Plus => Ordering::Greater,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f64_round_trip_is_exact() {
        for x in [1.0, -0.375, 1e-300, 6.02e23, f64::MIN_POSITIVE / 8.0] {
            assert_eq!(BigFloat::from_f64(x).to_f64(), x);
        }
    }

    #[test]
    fn division_error_bound_holds() {
        let one = BigFloat::from_int(1.into());
        let three = BigFloat::from_int(3.into());
        let (q, err) = one.div(&three, 100);
        let back = q.mul(&three, 400).0;
        let (diff, _) = back.sub(&one, 400);
        assert!(diff.mag_upper() <= 3.0 * err);
        assert!(err < 1e-29);
    }

    #[test]
    fn sqrt_of_two() {
        let (r, _) = BigFloat::from_int(2.into()).sqrt(200);
        assert_eq!(r.to_decimal(30), "1.41421356237309504880168872421e0");
    }

    #[test]
    fn decimal_formatting() {
        assert_eq!(BigFloat::from_f64(0.125).to_decimal(3), "1.25e-1");
        assert_eq!(BigFloat::from_f64(-1000.0).to_decimal(2), "-1.0e3");
        assert_eq!(BigFloat::from_f64(9.999).to_decimal(2), "1.0e1");
    }
}
