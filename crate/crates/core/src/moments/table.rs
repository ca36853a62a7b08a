use std::cmp::Ordering;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{domain, Result};
use crate::real::Real;

pub(crate) fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// Polynomial in σ, coefficients from the constant term up.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly(pub Vec<BigRational>);

impl Poly {
    pub fn from_ints(c: &[i64]) -> Self {
        Poly(c.iter().map(|&v| q(v, 1)).collect())
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.0.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_real(&self, x: &Real) -> Real {
        let prec = x.prec();
        self.0
            .iter()
            .rev()
            .fold(Real::zero(prec), |acc, c| acc.mul(x).add(&Real::from_ratio(c, prec)))
    }

    /// p(j·x) as a polynomial in x.
    pub fn scaled(&self, j: i64) -> Poly {
        let mut f = q(1, 1);
        let mut out = Vec::with_capacity(self.0.len());
        for c in &self.0 {
            out.push(c * &f);
            f *= q(j, 1);
        }
        Poly(out)
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = vec![BigRational::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly(out)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        let z = BigRational::zero();
        Poly((0..n).map(|i| self.0.get(i).unwrap_or(&z) + other.0.get(i).unwrap_or(&z)).collect())
    }

    pub fn scale(&self, s: &BigRational) -> Poly {
        Poly(self.0.iter().map(|c| c * s).collect())
    }

    pub fn trimmed(mut self) -> Poly {
        while self.0.len() > 1 && self.0.last().is_some_and(Zero::is_zero) {
            self.0.pop();
        }
        self
    }
}

/// Segment boundary: a rational, or the root of a quadratic inside a
/// rational bracket where the quadratic changes sign.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Endpoint {
    Rational(BigRational),
    QuadraticRoot { poly: Poly, lo: BigRational, hi: BigRational },
}

impl Endpoint {
    fn quadratic_root(poly: Poly, lo: BigRational, hi: BigRational) -> Self {
        // shrink the bracket below 10^-12
        let (mut lo, mut hi) = (lo, hi);
        let s_lo = poly.eval(&lo).signum();
        let tol = q(1, 1_000_000_000_000);
        while &hi - &lo > tol {
            let mid = (&lo + &hi) / q(2, 1);
            if poly.eval(&mid).signum() == s_lo {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Endpoint::QuadraticRoot { poly, lo, hi }
    }

    /// Exact comparison of the endpoint with σ.
    pub fn cmp_rational(&self, sigma: &BigRational) -> Ordering {
        match self {
            Endpoint::Rational(e) => e.cmp(sigma),
            Endpoint::QuadraticRoot { poly, lo, hi } => {
                if sigma <= lo {
                    return Ordering::Greater;
                }
                if sigma >= hi {
                    return Ordering::Less;
                }
                let s = poly.eval(sigma);
                if s.is_zero() {
                    Ordering::Equal
                } else if s.signum() == poly.eval(lo).signum() {
                    Ordering::Greater
                } else {
                    Ordering::Less
                }
            }
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Endpoint::Rational(e) => super::ratio_f64(e),
            Endpoint::QuadraticRoot { lo, hi, .. } => (super::ratio_f64(lo) + super::ratio_f64(hi)) / 2.0,
        }
    }
}

/// m(σ) ≥ num(σ)/den(σ) on [lo, hi).
#[derive(Clone, Debug)]
pub struct Segment {
    pub lo: Endpoint,
    pub hi: Endpoint,
    pub num: Poly,
    pub den: Poly,
}

impl Segment {
    pub fn eval(&self, sigma: &BigRational) -> BigRational {
        self.num.eval(sigma) / self.den.eval(sigma)
    }

    pub fn eval_real(&self, sigma: &Real) -> Real {
        self.num.eval_real(sigma).div(&self.den.eval_real(sigma))
    }
}

/// Contiguous piecewise rational bound.
#[derive(Clone, Debug)]
pub struct PiecewiseRationalBound {
    pub segments: Vec<Segment>,
}

impl PiecewiseRationalBound {
    /// Index of the segment whose half-open interval [lo, hi) holds σ.
    pub fn segment_index(&self, sigma: &BigRational) -> Option<usize> {
        self.segments.iter().position(|s| {
            s.lo.cmp_rational(sigma) != Ordering::Greater && s.hi.cmp_rational(sigma) == Ordering::Greater
        })
    }

    pub fn segment_index_f64(&self, sigma: f64) -> Option<usize> {
        self.segments.iter().position(|s| s.lo.to_f64() <= sigma && sigma < s.hi.to_f64())
    }

    pub fn eval(&self, sigma: &BigRational) -> Result<BigRational> {
        match self.segment_index(sigma) {
            Some(i) => Ok(self.segments[i].eval(sigma)),
            None => domain(format!("σ = {sigma} outside the table range")),
        }
    }

    pub fn eval_real(&self, sigma: &Real) -> Result<(usize, Real)> {
        let s = sigma.to_f64();
        match self.segment_index_f64(s) {
            Some(i) => Ok((i, self.segments[i].eval_real(sigma))),
            None => domain(format!("σ = {s} outside the table range")),
        }
    }
}

fn rational_segment(lo: BigRational, hi: BigRational, num: &[i64], den: &[i64]) -> Segment {
    Segment { lo: Endpoint::Rational(lo), hi: Endpoint::Rational(hi), num: Poly::from_ints(num), den: Poly::from_ints(den) }
}

/// Crossing of 98/(31-32σ) and (24σ-9)/((4σ-1)(1-σ)): 376σ² - 542σ + 181 = 0.
pub fn last_breakpoint() -> Endpoint {
    Endpoint::quadratic_root(Poly::from_ints(&[181, -542, 376]), q(9, 10), q(23, 25))
}

/// Ivić's piecewise lower bound for m(σ) on [1/2, 1).
pub fn moment_table() -> PiecewiseRationalBound {
    let star = last_breakpoint();
    let mut segs = vec![
        rational_segment(q(1, 2), q(5, 8), &[4], &[3, -4]),
        rational_segment(q(5, 8), q(35, 54), &[10], &[5, -6]),
        rational_segment(q(35, 54), q(41, 60), &[19], &[6, -6]),
        rational_segment(q(41, 60), q(3, 4), &[2112], &[859, -948]),
        rational_segment(q(3, 4), q(5, 6), &[12408], &[4537, -4890]),
        rational_segment(q(5, 6), q(7, 8), &[4324], &[1031, -1044]),
    ];
    segs.push(Segment {
        lo: Endpoint::Rational(q(7, 8)),
        hi: star.clone(),
        num: Poly::from_ints(&[98]),
        den: Poly::from_ints(&[31, -32]),
    });
    segs.push(Segment {
        lo: star,
        hi: Endpoint::Rational(q(1, 1)),
        num: Poly::from_ints(&[-9, 24]),
        den: Poly::from_ints(&[-1, 5, -4]),
    });
    PiecewiseRationalBound { segments: segs }
}

/// Table value of m(σ) for σ in [1/2, 1).
pub fn m_table(sigma: &BigRational) -> Result<BigRational> {
    if *sigma >= q(1, 1) {
        return domain(format!("m_table needs σ < 1, got {sigma}"));
    }
    moment_table().eval(sigma)
}

#[derive(Clone, Debug, Serialize)]
pub struct MomentRequirement {
    pub sigma: String,
    pub value: String,
    pub required: String,
    pub pass: bool,
}

/// m(1/2) ≥ 4, m(2/3) ≥ 8 and m(5/6) ≥ 16 from the table.
pub fn moment_requirements() -> Result<Vec<MomentRequirement>> {
    [(q(1, 2), 4), (q(2, 3), 8), (q(5, 6), 16)]
        .into_iter()
        .map(|(s, need)| {
            let v = m_table(&s)?;
            Ok(MomentRequirement {
                sigma: s.to_string(),
                value: v.to_string(),
                required: need.to_string(),
                pass: v >= q(need, 1),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_values() {
        assert_eq!(m_table(&q(1, 2)).unwrap(), q(4, 1));
        assert_eq!(m_table(&q(7, 8)).unwrap(), q(98, 3));
        assert_eq!(m_table(&q(5, 8)).unwrap(), q(8, 1));
        assert_eq!(m_table(&q(2, 3)).unwrap(), q(19, 2));
        assert_eq!(m_table(&q(5, 6)).unwrap(), q(12408, 462));
        assert!(m_table(&q(1, 1)).is_err());
        assert!(m_table(&q(2, 5)).is_err());
    }

    #[test]
    fn continuity_at_breakpoints() {
        let t = moment_table();
        let shared = [(q(5, 8), q(8, 1)), (q(35, 54), q(9, 1)), (q(41, 60), q(10, 1)), (q(3, 4), q(2112, 148)), (q(5, 6), q(12408, 462))];
        for (i, (b, v)) in shared.iter().enumerate() {
            assert_eq!(t.segments[i].eval(b), *v);
            assert_eq!(t.segments[i + 1].eval(b), *v);
        }
        // the table jumps down at 7/8
        let left = t.segments[5].eval(&q(7, 8));
        let right = t.segments[6].eval(&q(7, 8));
        assert_eq!(left, q(4324 * 8, 940));
        assert!(right < left);
    }

    #[test]
    fn last_breakpoint_is_the_crossing() {
        let t = moment_table();
        let Endpoint::QuadraticRoot { lo, hi, .. } = last_breakpoint() else { panic!() };
        assert!(&hi - &lo <= q(1, 1_000_000_000_000));
        let x = super::super::ratio_f64(&lo);
        assert!((x - 0.91591).abs() < 1e-5);
        // segment 7 below the root, segment 8 above
        assert_eq!(t.segment_index(&lo), Some(6));
        assert_eq!(t.segment_index(&hi), Some(7));
        let d = t.segments[6].eval(&lo) - t.segments[7].eval(&lo);
        assert!(super::super::ratio_f64(&d).abs() < 1e-6);
    }

    #[test]
    fn nondecreasing_apart_from_the_jump() {
        let mut prev = m_table(&q(500, 1000)).unwrap();
        for i in 501..=950 {
            let s = q(i, 1000);
            let v = m_table(&s).unwrap();
            if i != 875 {
                assert!(v >= prev, "σ = {s}");
            }
            prev = v;
        }
    }

    #[test]
    fn gate_requirements() {
        let r = moment_requirements().unwrap();
        assert!(r.iter().all(|x| x.pass));
        assert_eq!(r[1].value, "19/2");
    }
}
