use num_rational::BigRational;

use super::em::zeta_regular_jet_at_one;
use crate::error::{domain, Result};
use crate::real::{Jet, Real};

/// Coefficients of (s - point)^k for k = min_order .. min_order + len - 1.
#[derive(Clone, Debug)]
pub struct LaurentSeries {
    point: BigRational,
    min_order: i32,
    coeffs: Vec<Real>,
}

impl LaurentSeries {
    pub fn new(point: BigRational, min_order: i32, coeffs: Vec<Real>) -> Result<Self> {
        if coeffs.is_empty() {
            return domain("Laurent series needs at least one coefficient");
        }
        if min_order < 0 && coeffs[0].contains_zero() {
            return domain("leading pole coefficient is not certified nonzero");
        }
        Ok(LaurentSeries { point, min_order, coeffs })
    }

    pub fn from_jet(point: BigRational, jet: &Jet) -> Self {
        LaurentSeries { point, min_order: 0, coeffs: jet.coeffs().to_vec() }
    }

    pub fn point(&self) -> &BigRational {
        &self.point
    }

    pub fn min_order(&self) -> i32 {
        self.min_order
    }

    /// Highest order with a known coefficient.
    pub fn max_order(&self) -> i32 {
        self.min_order + self.coeffs.len() as i32 - 1
    }

    pub fn coeffs(&self) -> &[Real] {
        &self.coeffs
    }

    /// Coefficient of (s - point)^k; zero below the minimal order and
    /// `None` above the truncation.
    pub fn coeff(&self, k: i32) -> Option<Real> {
        let prec = self.coeffs[0].prec();
        if k < self.min_order {
            Some(Real::zero(prec))
        } else if k > self.max_order() {
            None
        } else {
            Some(self.coeffs[(k - self.min_order) as usize].clone())
        }
    }

    pub fn residue(&self) -> Option<Real> {
        self.coeff(-1)
    }

    fn check_point(&self, other: &Self) {
        assert_eq!(self.point, other.point, "Laurent series at different points");
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_point(other);
        let n = self.coeffs.len().min(other.coeffs.len());
        let prec = self.coeffs[0].prec().max(other.coeffs[0].prec());
        let mut c = vec![Real::zero(prec); n];
        for i in 0..n {
            for j in 0..n - i {
                c[i + j] = c[i + j].add(&self.coeffs[i].mul(&other.coeffs[j]));
            }
        }
        LaurentSeries { point: self.point.clone(), min_order: self.min_order + other.min_order, coeffs: c }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_point(other);
        let lo = self.min_order.min(other.min_order);
        let hi = self.max_order().min(other.max_order());
        let coeffs = (lo..=hi)
            .map(|k| self.coeff(k).unwrap().add(&other.coeff(k).unwrap()))
            .collect();
        LaurentSeries { point: self.point.clone(), min_order: lo, coeffs }
    }

    pub fn scale(&self, v: &Real) -> Self {
        LaurentSeries {
            point: self.point.clone(),
            min_order: self.min_order,
            coeffs: self.coeffs.iter().map(|c| c.mul(v)).collect(),
        }
    }

    pub fn powi(&self, e: u32) -> Self {
        let prec = self.coeffs[0].prec();
        let mut one = vec![Real::zero(prec); self.coeffs.len()];
        one[0] = Real::one(prec);
        let mut out = LaurentSeries { point: self.point.clone(), min_order: 0, coeffs: one };
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }
}

/// Laurent expansion of ζ(a s) at s = 1/a through (s - 1/a)^k:
/// 1/(a h) + Σ_n (-1)^n γ_n a^n h^n / n!.
pub fn zeta_laurent(a: u32, k: usize, prec: u32) -> Result<LaurentSeries> {
    if a == 0 {
        return domain("multiplier a must be >= 1");
    }
    if k > 5 {
        return domain(format!("Laurent order {k} above the supported 5"));
    }
    let jet = zeta_regular_jet_at_one(k + 1, prec)?;
    let ar = Real::from_i64(a as i64, prec);
    let scaled = jet.rescale(&ar);
    let mut coeffs = Vec::with_capacity(k + 2);
    coeffs.push(Real::one(prec).div(&ar));
    coeffs.extend(scaled.coeffs().iter().cloned());
    LaurentSeries::new(BigRational::new(1.into(), a.into()), -1, coeffs)
}

/// Jet of x^s/s style factors at a rational point: 1/s.
pub fn recip_s_jet(point: &BigRational, len: usize, prec: u32) -> Jet {
    Jet::variable(Real::from_ratio(point, prec), len).recip()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::real::ratio_to_f64;
    use proptest::prelude::*;

    const P: u32 = 128;

    #[test]
    fn residues_and_constant_term() {
        let z1 = zeta_laurent(1, 3, P).unwrap();
        assert!(z1.residue().unwrap().contains_f64(1.0));
        let z5 = zeta_laurent(5, 3, P).unwrap();
        assert!(z5.residue().unwrap().contains_ratio(&BigRational::new(1.into(), 5.into())));
        for a in 1..=7 {
            let z = zeta_laurent(a, 2, P).unwrap();
            assert!(z.coeff(0).unwrap().to_decimal(10).starts_with("5.772156649"));
        }
        assert!(zeta_laurent(2, 6, P).is_err());
    }

    #[test]
    fn square_has_double_pole() {
        let z = zeta_laurent(5, 3, P).unwrap().powi(2);
        assert_eq!(z.min_order(), -2);
        assert!(z.coeff(-2).unwrap().contains_ratio(&BigRational::new(1.into(), 25.into())));
        // h^-1 coefficient: 2 γ_0 / 5
        let expect = 2.0 * 0.5772156649015329 / 5.0;
        assert!((z.residue().unwrap().to_f64() - expect).abs() < 1e-15);
    }

    fn series(vals: &[f64], m: i32) -> LaurentSeries {
        LaurentSeries {
            point: BigRational::new(1.into(), 3.into()),
            min_order: m,
            coeffs: vals.iter().map(|v| Real::from_f64(*v, P)).collect(),
        }
    }

    proptest! {
        #[test]
        fn residue_is_linear(a in proptest::collection::vec(-10.0f64..10.0, 4),
                             b in proptest::collection::vec(-10.0f64..10.0, 4),
                             ma in -3i32..1, mb in -3i32..1) {
            let x = series(&a, ma);
            let y = series(&b, mb);
            let sum = x.add(&y).residue().unwrap();
            let parts = x.residue().unwrap().add(&y.residue().unwrap());
            prop_assert!(sum.overlaps(&parts));
        }
    }

    #[test]
    fn helpers() {
        let j = recip_s_jet(&BigRational::new(1.into(), 2.into()), 3, P);
        assert_eq!(ratio_to_f64(&BigRational::new(1.into(), 4.into())), 0.25);
        // 1/(1/2 + h) = 2 - 4h + 8h^2
        assert!(j.coeff(2).contains_f64(8.0));
    }
}
