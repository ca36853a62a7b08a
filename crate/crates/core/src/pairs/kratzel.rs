use num_rational::BigRational;
use serde::Serialize;

use super::pair::{q, ExponentPair};
use crate::error::{domain, Error, Result};

/// Which first factor to use on the right of condition 3b: (2l - 2k - 1),
/// or the degenerate (2l - 2l - 1).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub enum C3bReading {
    /// (2l - 2k - 1)
    #[default]
    Corrected,
    /// (2l - 2l - 1) = -1, kept for audit.
    Literal,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KratzelReport {
    pub c1: bool,
    pub c2: bool,
    pub c3a: bool,
    pub c3b: bool,
    pub pass: bool,
    pub reading: C3bReading,
}

impl KratzelReport {
    fn first_failure(&self) -> Option<&'static str> {
        if !self.c1 {
            Some("condition 1")
        } else if !self.c2 {
            Some("condition 2")
        } else if !(self.c3a || self.c3b) {
            Some("conditions 3a and 3b")
        } else {
            None
        }
    }
}

fn check_exponents(a: &[u32; 4]) -> Result<()> {
    if a[0] == 0 || a.windows(2).any(|w| w[0] > w[1]) {
        return domain(format!("exponents must be positive and nondecreasing, got {a:?}"));
    }
    Ok(())
}

/// Hypotheses of Krätzel's four-dimensional divisor estimate.
pub fn kratzel_check(a: &[u32; 4], p: &ExponentPair, reading: C3bReading) -> Result<KratzelReport> {
    check_exponents(a)?;
    let r = |x: u32| BigRational::from_integer(x.into());
    let (a1, a2, a3, a4) = (r(a[0]), r(a[1]), r(a[2]), r(a[3]));
    let big_a = &a1 + &a2 + &a3 + &a4;
    let (k, l) = (&p.k, &p.l);
    let one = q(1, 1);
    let two = q(2, 1);
    let kl = k + l;

    let c1 = (&kl + &two) * &a4 < &kl * &a1 + &big_a;
    let c2 = &two * (&kl + &one) * &a1 <= (&two * k + &one) * (&a2 + &a3);
    let c3a = l * &a1 <= k * &a2 && (&kl + &one) * &a1 >= k * (&a2 + &a3);
    let factor = match reading {
        C3bReading::Corrected => &two * l - &two * k - &one,
        C3bReading::Literal => -one.clone(),
    };
    let c3b = l * &a1 >= k * &a2
        && (l - k) * (&two * k + &one) * &a3
            <= factor * (&kl + &one) * &a1 + (&two * k * (k - l + &one) + &one) * &a2;
    Ok(KratzelReport { c1, c2, c3a, c3b, pass: c1 && c2 && (c3a || c3b), reading })
}

/// The error exponent (k+l+2)/((k+l) a₁ + A₄) when the hypotheses hold.
pub fn kratzel_exponent(a: &[u32; 4], p: &ExponentPair, reading: C3bReading) -> Result<BigRational> {
    let report = kratzel_check(a, p, reading)?;
    if let Some(fail) = report.first_failure() {
        return Err(Error::Domain(format!("Krätzel hypotheses fail for {a:?}: {fail}")));
    }
    let e = kratzel_formula(a, p);
    debug_assert!(e < q(1, a[3] as i64));
    Ok(e)
}

/// (k+l+2)/((k+l) a₁ + A₄) without checking the hypotheses.
pub fn kratzel_formula(a: &[u32; 4], p: &ExponentPair) -> BigRational {
    let kl = &p.k + &p.l;
    let sum: u32 = a.iter().sum();
    (&kl + q(2, 1)) / (&kl * BigRational::from_integer(a[0].into()) + BigRational::from_integer(sum.into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pairs::Seed;

    #[test]
    fn known_instances() {
        let h = Seed::H2005.pair();
        let r = kratzel_check(&[1, 3, 5, 5], &h, C3bReading::Corrected).unwrap();
        assert!(r.pass && r.c3b && !r.c3a);
        let r = kratzel_check(&[2, 3, 3, 4], &h, C3bReading::Corrected).unwrap();
        assert!(r.pass);
        assert_eq!(kratzel_exponent(&[1, 3, 5, 5], &h, C3bReading::Corrected).unwrap(), q(1153, 6073));
        assert_eq!(kratzel_exponent(&[2, 3, 3, 4], &h, C3bReading::Corrected).unwrap(), q(1153, 5586));
        let e = q(1153, 6073);
        assert!(q(1, 6) < e && e < q(1, 5));
        let e = q(1153, 5586);
        assert!(q(1, 5) < e && e < q(1, 4));
    }

    #[test]
    fn literal_reading_rejects_first_instance() {
        let h = Seed::H2005.pair();
        let r = kratzel_check(&[1, 3, 5, 5], &h, C3bReading::Literal).unwrap();
        assert!(!r.c3b && !r.pass);
        assert!(kratzel_exponent(&[1, 3, 5, 5], &h, C3bReading::Literal).is_err());
    }

    #[test]
    fn condition_one_violated() {
        for seed in Seed::ALL {
            let r = kratzel_check(&[1, 1, 1, 100], &seed.pair(), C3bReading::Corrected).unwrap();
            assert!(!r.c1 && !r.pass);
        }
    }

    #[test]
    fn trivial_pair_is_weaker() {
        let t = Seed::Trivial.pair();
        // condition 1 holds with equality for (0, 1), so the estimate itself is refused
        let r = kratzel_check(&[1, 3, 5, 5], &t, C3bReading::Corrected).unwrap();
        assert!(!r.c1 && r.c2 && r.c3b);
        assert!(kratzel_exponent(&[1, 3, 5, 5], &t, C3bReading::Corrected).is_err());
        let e = kratzel_formula(&[1, 3, 5, 5], &t);
        assert_eq!(e, q(1, 5));
        assert!(e >= q(1153, 6073));
    }

    #[test]
    fn rejects_unsorted() {
        assert!(kratzel_check(&[3, 1, 5, 5], &Seed::H2005.pair(), C3bReading::Corrected).is_err());
    }
}
