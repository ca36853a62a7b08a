use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use super::float::{ldexp, BigFloat};

/// Guard bits used inside transcendental kernels.
const GUARD: u32 = 32;

/// A real number known to lie in `[mid - rad, mid + rad]`.
///
/// Arithmetic is carried out on the midpoint at `prec` bits and every
/// rounding step is accounted for in `rad`, which is kept as an upward
/// rounded f64. An infinite radius means the value is unknown (for example
/// after dividing by a ball that contains zero).
#[derive(Clone, Debug)]
pub struct Real {
    mid: BigFloat,
    rad: f64,
    prec: u32,
}

#[inline]
fn up(x: f64) -> f64 {
    if x.is_nan() {
        f64::INFINITY
    } else {
        x.next_up()
    }
}

impl Real {
    pub fn zero(prec: u32) -> Self {
        Real { mid: BigFloat::zero(), rad: 0.0, prec }
    }

    pub fn one(prec: u32) -> Self {
        Self::from_i64(1, prec)
    }

    pub fn from_i64(n: i64, prec: u32) -> Self {
        Self::from_bigint(&BigInt::from(n), prec)
    }

    pub fn from_bigint(n: &BigInt, prec: u32) -> Self {
        let (mid, rad) = BigFloat::from_int(n.clone()).rounded(prec);
        Real { mid, rad, prec }
    }

    pub fn from_ratio(q: &BigRational, prec: u32) -> Self {
        let num = BigFloat::from_int(q.numer().clone());
        let den = BigFloat::from_int(q.denom().clone());
        let (mid, rad) = num.div(&den, prec);
        Real { mid, rad, prec }
    }

    pub fn from_frac(num: i64, den: i64, prec: u32) -> Self {
        Self::from_ratio(&BigRational::new(num.into(), den.into()), prec)
    }

    /// Exact value of an f64 (no rounding beyond `prec`).
    pub fn from_f64(x: f64, prec: u32) -> Self {
        let (mid, rad) = BigFloat::from_f64(x).rounded(prec);
        Real { mid, rad, prec }
    }

    pub fn from_parts(mid: BigFloat, rad: f64, prec: u32) -> Self {
        Real { mid, rad, prec }
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn mid(&self) -> &BigFloat {
        &self.mid
    }

    pub fn rad(&self) -> f64 {
        self.rad
    }

    pub fn is_finite(&self) -> bool {
        self.rad.is_finite()
    }

    /// Same value viewed at another working precision.
    pub fn with_prec(&self, prec: u32) -> Self {
        let (mid, e) = self.mid.clone().rounded(prec);
        Real { mid, rad: up(self.rad + e), prec }
    }

    /// Widen the radius by `err`.
    pub fn add_error(mut self, err: f64) -> Self {
        self.rad = up(self.rad + err.abs());
        self
    }

    pub fn mag_upper(&self) -> f64 {
        up(self.mid.mag_upper() + self.rad)
    }

    pub fn mag_lower(&self) -> f64 {
        (self.mid.mag_lower() - self.rad).next_down().max(0.0)
    }

    pub fn to_f64(&self) -> f64 {
        self.mid.to_f64()
    }

    pub fn is_positive(&self) -> bool {
        !self.mid.is_negative() && self.mid.mag_lower() > self.rad
    }

    pub fn is_negative(&self) -> bool {
        self.mid.is_negative() && self.mid.mag_lower() > self.rad
    }

    pub fn contains_zero(&self) -> bool {
        !self.is_positive() && !self.is_negative()
    }

    /// True when `x` lies inside the ball.
    pub fn contains_f64(&self, x: f64) -> bool {
        let d = BigFloat::from_f64(x).sub(&self.mid, u32::MAX).0;
        d.mag_lower() <= self.rad
    }

    /// True when the rational `q` lies inside the ball.
    pub fn contains_ratio(&self, q: &BigRational) -> bool {
        let exact = Real::from_ratio(q, self.prec.max(64) + 64);
        let d = self.sub(&exact);
        d.mid.mag_lower() <= d.rad
    }

    /// True when the balls intersect.
    pub fn overlaps(&self, other: &Real) -> bool {
        let d = self.mid.sub(&other.mid, u32::MAX).0;
        d.mag_lower() <= up(self.rad + other.rad)
    }

    pub fn neg(&self) -> Self {
        Real { mid: self.mid.neg(), rad: self.rad, prec: self.prec }
    }

    pub fn abs(&self) -> Self {
        Real { mid: self.mid.abs(), rad: self.rad, prec: self.prec }
    }

    fn prec_with(&self, other: &Real) -> u32 {
        self.prec.max(other.prec)
    }

    pub fn add(&self, other: &Real) -> Self {
        let prec = self.prec_with(other);
        let (mid, e) = self.mid.add(&other.mid, prec);
        Real { mid, rad: up(up(self.rad + other.rad) + e), prec }
    }

    pub fn sub(&self, other: &Real) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Real) -> Self {
        let prec = self.prec_with(other);
        let (mid, e) = self.mid.mul(&other.mid, prec);
        let a = self.mid.mag_upper();
        let b = other.mid.mag_upper();
        let rad = up(up(a * other.rad) + up(b * self.rad));
        let rad = up(rad + up(self.rad * other.rad));
        Real { mid, rad: up(rad + e), prec }
    }

    pub fn mul_i64(&self, k: i64) -> Self {
        self.mul(&Real::from_i64(k, self.prec))
    }

    pub fn mul_pow2(&self, k: i64) -> Self {
        Real { mid: self.mid.mul_pow2(k), rad: ldexp(self.rad, k).next_up(), prec: self.prec }
    }

    pub fn sqr(&self) -> Self {
        self.mul(self)
    }

    pub fn recip(&self) -> Self {
        Real::one(self.prec).div(self)
    }

    pub fn div(&self, other: &Real) -> Self {
        let prec = self.prec_with(other);
        let lo = other.mag_lower();
        if lo <= 0.0 {
            return Real { mid: BigFloat::zero(), rad: f64::INFINITY, prec };
        }
        let (mid, e) = self.mid.div(&other.mid, prec);
        // |a/b - ma/mb| <= (ra + rb |ma/mb|) / (|mb| - rb), arranged so that
        // large operands do not overflow the f64 bound
        let ratio = up(self.mid.mag_upper() / other.mid.mag_lower().next_down());
        let num = up(self.rad + up(other.rad * ratio));
        let rad = if num == 0.0 { 0.0 } else { up(num / lo) };
        Real { mid, rad: up(rad + e), prec }
    }

    pub fn div_i64(&self, k: i64) -> Self {
        self.div(&Real::from_i64(k, self.prec))
    }

    pub fn powi(&self, n: u32) -> Self {
        let mut result = Real::one(self.prec);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = result.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.sqr();
            }
        }
        result
    }

    pub fn sqrt(&self) -> Self {
        let prec = self.prec;
        if self.mid.is_negative() || self.mid.is_zero() {
            return Real { mid: BigFloat::zero(), rad: f64::INFINITY, prec };
        }
        let (mid, e) = self.mid.sqrt(prec);
        let lo = self.mag_lower();
        // |sqrt(x) - sqrt(m)| <= r / (sqrt(m - r) + sqrt(m))
        let rad = if self.rad == 0.0 {
            0.0
        } else if lo <= 0.0 {
            f64::INFINITY
        } else {
            up(self.rad / lo.sqrt().next_down())
        };
        Real { mid, rad: up(rad + e), prec }
    }

    /// exp(x). The midpoint is reduced by multiples of ln 2 and a power of
    /// two, then summed as a Taylor series with an explicit tail bound.
    pub fn exp(&self) -> Self {
        let prec = self.prec;
        if !self.is_finite() {
            return Real { mid: BigFloat::zero(), rad: f64::INFINITY, prec };
        }
        let wp = prec + GUARD;
        let x = Real { mid: self.mid.clone(), rad: 0.0, prec: wp };
        let approx = self.mid.to_f64();
        if approx.abs() > 1e15 {
            return Real { mid: BigFloat::zero(), rad: f64::INFINITY, prec };
        }
        let n = (approx / std::f64::consts::LN_2).round() as i64;
        let t = x.sub(&ln2(wp).mul_i64(n));
        const SCALE: i64 = 16;
        let t = t.mul_pow2(-SCALE);
        // Taylor series of exp(t) with |t| < 2^-16
        let mut sum = Real::one(wp);
        let mut term = Real::one(wp);
        let tmag = t.mag_upper();
        let mut k = 1i64;
        loop {
            term = term.mul(&t).div_i64(k);
            sum = sum.add(&term);
            let bound = term.mag_upper() * tmag;
            if bound < ldexp(1.0, -(wp as i64) - 4) {
                // remaining tail <= 2 |t|^(k+1)/(k+1)!
                sum = sum.add_error(2.0 * bound);
                break;
            }
            k += 1;
        }
        for _ in 0..SCALE {
            sum = sum.sqr();
        }
        let mut result = sum.mul_pow2(n).with_prec(prec);
        if self.rad > 0.0 {
            let spread = up(result.mag_upper() * up(self.rad.exp_m1()));
            result = result.add_error(spread);
        }
        result
    }

    /// Natural logarithm of a positive ball.
    pub fn ln(&self) -> Self {
        let prec = self.prec;
        if !self.is_positive() || !self.is_finite() {
            return Real { mid: BigFloat::zero(), rad: f64::INFINITY, prec };
        }
        let wp = prec + GUARD;
        // mid = y * 2^k with y in [1/sqrt2, sqrt2)
        let mut k = self.mid.top() - 1;
        let y_f = ldexp(self.mid.to_f64(), -k);
        if y_f > std::f64::consts::SQRT_2 {
            k += 1;
        }
        let y = Real { mid: self.mid.mul_pow2(-k), rad: 0.0, prec: wp };
        let one = Real::one(wp);
        let z = y.sub(&one).div(&y.add(&one));
        let atanh = atanh_series(&z, wp);
        let mut result = atanh.mul_pow2(1).add(&ln2(wp).mul_i64(k)).with_prec(prec);
        if self.rad > 0.0 {
            let lo = self.mag_lower();
            result = result.add_error(up(self.rad / lo));
        }
        result
    }

    /// x^y for positive x.
    pub fn pow(&self, y: &Real) -> Self {
        self.ln().mul(y).exp()
    }

    /// Decimal string with `digits` significant digits of the midpoint.
    pub fn to_decimal(&self, digits: usize) -> String {
        self.mid.to_decimal(digits)
    }

    /// Decimal string limited to the digits the radius certifies.
    pub fn to_certified_decimal(&self, max_digits: usize) -> String {
        let m = self.mid.mag_upper();
        if m == 0.0 {
            return "0".to_string();
        }
        let digits = if self.rad == 0.0 {
            max_digits
        } else {
            let rel = self.rad / m;
            ((-rel.log10()).floor().max(1.0) as usize).min(max_digits)
        };
        self.mid.to_decimal(digits)
    }

    /// Absolute radius relative to magnitude, or the radius itself near 0.
    pub fn rel_accuracy(&self) -> f64 {
        let m = self.mid.mag_lower();
        if m == 0.0 {
            self.rad
        } else {
            self.rad / m
        }
    }

    pub fn floor_int(&self) -> BigInt {
        self.mid.floor_int()
    }

    /// Lower endpoint as f64 (rounded down).
    pub fn lower_f64(&self) -> f64 {
        (self.mid.to_f64() - self.rad).next_down()
    }

    /// Upper endpoint as f64 (rounded up).
    pub fn upper_f64(&self) -> f64 {
        (self.mid.to_f64() + self.rad).next_up()
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(20);
        write!(f, "{} +/- {:.1e}", self.to_decimal(digits), self.rad)
    }
}

/// atanh(z) for a small ball z, as a power series with tail bound.
fn atanh_series(z: &Real, wp: u32) -> Real {
    let z2 = z.sqr();
    let zmag = z.mag_upper();
    let z2mag = z2.mag_upper();
    debug_assert!(z2mag < 0.5);
    let mut power = z.clone();
    let mut sum = z.clone();
    let mut k = 1i64;
    loop {
        power = power.mul(&z2);
        let term = power.div_i64(2 * k + 1);
        sum = sum.add(&term);
        let next = power.mag_upper() * z2mag;
        if next < ldexp(zmag.max(1e-300), -(wp as i64) - 4) || next == 0.0 {
            // geometric tail sum_{j>k} z^(2j+1)/(2j+1) <= next / (1 - z^2)
            sum = sum.add_error(up(next / (1.0 - z2mag)));
            break;
        }
        k += 1;
    }
    sum
}

/// atan(1/m) for an integer m >= 2.
fn atan_inv(m: i64, wp: u32) -> Real {
    let x = Real::one(wp).div_i64(m);
    let x2 = x.sqr();
    let x2mag = x2.mag_upper();
    let mut power = x.clone();
    let mut sum = x.clone();
    let mut k = 1i64;
    loop {
        power = power.mul(&x2);
        let term = power.div_i64(2 * k + 1);
        if k % 2 == 1 {
            sum = sum.sub(&term);
        } else {
            sum = sum.add(&term);
        }
        let next = power.mag_upper() * x2mag;
        if next < ldexp(1.0, -(wp as i64) - 8) {
            sum = sum.add_error(next);
            break;
        }
        k += 1;
    }
    sum
}

thread_local! {
    static LN2_CACHE: RefCell<HashMap<u32, Real>> = RefCell::new(HashMap::new());
    static PI_CACHE: RefCell<HashMap<u32, Real>> = RefCell::new(HashMap::new());
}

/// ln 2 = 2 atanh(1/3), cached per precision.
pub fn ln2(prec: u32) -> Real {
    if let Some(v) = LN2_CACHE.with(|c| c.borrow().get(&prec).cloned()) {
        return v;
    }
    let wp = prec + GUARD;
    let third = Real::one(wp).div_i64(3);
    let v = atanh_series(&third, wp).mul_pow2(1).with_prec(prec);
    LN2_CACHE.with(|c| c.borrow_mut().insert(prec, v.clone()));
    v
}

/// pi by Machin's formula, cached per precision.
pub fn pi(prec: u32) -> Real {
    if let Some(v) = PI_CACHE.with(|c| c.borrow().get(&prec).cloned()) {
        return v;
    }
    let wp = prec + GUARD;
    let v = atan_inv(5, wp).mul_i64(16).sub(&atan_inv(239, wp).mul_i64(4)).with_prec(prec);
    PI_CACHE.with(|c| c.borrow_mut().insert(prec, v.clone()));
    v
}

/// ln of a positive integer.
pub fn ln_int(n: u64, prec: u32) -> Real {
    Real::from_bigint(&BigInt::from(n), prec + 8).ln().with_prec(prec)
}

/// Nearest f64 to a rational, tolerant of huge numerators and denominators.
pub(crate) fn ratio_to_f64(q: &BigRational) -> f64 {
    let n = q.numer().to_f64().unwrap_or(f64::NAN);
    let d = q.denom().to_f64().unwrap_or(f64::NAN);
    if n.is_finite() && d.is_finite() && d != 0.0 {
        n / d
    } else {
        Real::from_ratio(q, 64).to_f64()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 256;

    #[test]
    fn ln2_digits() {
        // ln 2 = 0.693147180559945309417232121458176568075500134360255254120680...
        let v = ln2(P);
        assert!(v.rad() < 1e-75);
        assert_eq!(
            v.to_decimal(50),
            "6.9314718055994530941723212145817656807550013436026e-1"
        );
    }

    #[test]
    fn pi_digits() {
        let v = pi(P);
        assert!(v.rad() < 1e-75);
        assert_eq!(
            v.to_decimal(50),
            "3.1415926535897932384626433832795028841971693993751e0"
        );
    }

    #[test]
    fn exp_ln_inverse() {
        for &x in &[0.5, 1.0, 2.5, 10.0, 1234.5, 1e-5] {
            let r = Real::from_f64(x, P);
            let back = r.ln().exp();
            assert!(back.overlaps(&r), "x = {x}: {back}");
            assert!(back.rad() < 1e-60 * x.max(1.0));
        }
    }

    #[test]
    fn exp_one_is_e() {
        let e = Real::one(P).exp();
        assert_eq!(
            e.to_decimal(40),
            "2.718281828459045235360287471352662497757e0"
        );
        assert!(e.rad() < 1e-70);
    }

    #[test]
    fn division_by_ball_containing_zero_is_unknown() {
        let z = Real::zero(64).add_error(1e-3);
        assert!(!Real::one(64).div(&z).is_finite());
    }

    #[test]
    fn radius_tracks_input_error() {
        let x = Real::from_f64(2.0, 128).add_error(1e-10);
        let y = x.ln();
        assert!(y.rad() >= 0.5e-10);
        assert!(y.contains_f64(2f64.ln()));
    }
}
