//! Euler-Maclaurin evaluation of ζ and its derivatives at real points.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::bernoulli::bernoulli_even;
use crate::error::{domain, Error, Result};
use crate::real::{ln_int, Jet, Real};

const GUARD: u32 = 24;
const MAX_DEPTH: usize = 4000;

/// Taylor jet of ζ(s0 + h) with `len` coefficients.
pub fn zeta_jet(s0: &Real, len: usize, prec: u32) -> Result<Jet> {
    let d = s0.sub(&Real::one(s0.prec()));
    if d.contains_zero() || d.mag_upper() < 1e-6 {
        return domain(format!("ζ has a pole at s = 1 (got s ≈ {})", s0.to_f64()));
    }
    em_jet(s0, len, prec, false)
}

/// Taylor jet of ζ(1 + h) - 1/h with `len` coefficients; coefficient n is
/// (-1)^n γ_n / n!.
pub fn zeta_regular_jet_at_one(len: usize, prec: u32) -> Result<Jet> {
    em_jet(&Real::one(prec + GUARD), len, prec, true)
}

/// ζ(σ) for a rational σ ≠ 1.
pub fn zeta_real(sigma: &BigRational, prec: u32) -> Result<Real> {
    let s = Real::from_ratio(sigma, prec + GUARD);
    Ok(zeta_jet(&s, 1, prec)?.value().clone())
}

/// ζ at a real ball, e.g. an f64 input.
pub fn zeta_at(s: &Real, prec: u32) -> Result<Real> {
    Ok(zeta_jet(s, 1, prec)?.value().clone())
}

/// Upper bound for ln |R_M| (Backlund) over the disk |s - s0| <= rho.
fn log_remainder(s_abs: f64, sigma: f64, rho: f64, n: f64, m: usize) -> f64 {
    let lo_sigma = sigma - rho;
    let q = lo_sigma + 2.0 * m as f64 + 1.0;
    if q <= 0.0 {
        return f64::INFINITY;
    }
    let mut acc = 0.0;
    for j in 0..=(2 * m + 1) {
        acc += (s_abs + rho + j as f64).ln();
    }
    // |B_2k|/(2k)! = 2 ζ(2k)/(2π)^(2k) <= (π²/3)/(2π)^(2k)
    let k2 = (2 * m + 2) as f64;
    acc += (std::f64::consts::PI.powi(2) / 3.0).ln() - k2 * (2.0 * std::f64::consts::PI).ln();
    acc - q * n.ln() - q.ln()
}

fn em_jet(s0: &Real, len: usize, prec: u32, regular: bool) -> Result<Jet> {
    assert!(len >= 1);
    let sigma = s0.to_f64();
    let s_abs = sigma.abs();
    let wp = prec + GUARD + 2 * len as u32;
    let rho = if len > 1 { 0.5 } else { 0.0 };
    let target = -((wp as f64) * std::f64::consts::LN_2) - (len as f64) * 0.7;
    let base_n = ((wp as f64) * std::f64::consts::LN_2 / (2.0 * std::f64::consts::PI) * 1.1) as usize + 10;
    let n_terms = base_n.max(s_abs.ceil() as usize + len + 10);
    let n_f = n_terms as f64;
    let mut m = 1;
    while log_remainder(s_abs, sigma, rho, n_f, m) + (len as f64 - 1.0) * (2.0f64).ln() > target {
        m += 1;
        if m > MAX_DEPTH {
            return Err(Error::Precision(format!(
                "Euler-Maclaurin depth above {MAX_DEPTH} required at s = {sigma}"
            )));
        }
    }
    let s = s0.with_prec(wp);
    let one = Real::one(wp);
    let var = Jet::variable(s.clone(), len);
    let mut sum = Jet::zero(len, wp);
    for n in 1..n_terms {
        let ln_n = ln_int(n as u64, wp);
        let v = ln_n.mul(&s).neg().exp();
        sum = sum.add(&Jet::exp_linear(&v, &ln_n.neg(), len));
    }
    let ln_big = ln_int(n_terms as u64, wp);
    let n_pow = ln_big.mul(&s).neg().exp(); // N^{-s0}
    let n_jet = Jet::exp_linear(&n_pow, &ln_big.neg(), len); // N^{-s}
    let n_real = Real::from_i64(n_terms as i64, wp);
    if regular {
        // (N^{1-s} - 1)/(s - 1) at s = 1 + h: sum_{k>=1} (-ln N)^k h^(k-1) / k!
        let mut c = Vec::with_capacity(len);
        let mut t = one.clone();
        for k in 1..=len {
            t = t.mul(&ln_big.neg()).div_i64(k as i64);
            c.push(t.clone());
        }
        sum = sum.add(&Jet::new(c));
    } else {
        let lead = n_jet.scale(&n_real).div(&var.add_scalar(&one.neg()));
        sum = sum.add(&lead);
    }
    sum = sum.add(&n_jet.scale(&one.mul_pow2(-1)));
    let bern = bernoulli_even(m);
    // term j is B_2j/(2j)! times P_j = s (s+1) ... (s+2j-2) N^{1-2j}; P_j is
    // built by its ratio and the Bernoulli factor is reduced exactly, so no
    // intermediate leaves the f64 range of the radii
    let mut pj = var.scale(&n_real.recip());
    let n_inv2 = n_real.sqr().recip();
    let mut fact = BigInt::from(2); // (2j)!
    for (j, b) in bern.iter().enumerate().skip(1) {
        if j > 1 {
            let a = var.add_scalar(&Real::from_i64(2 * j as i64 - 3, wp));
            let b2 = var.add_scalar(&Real::from_i64(2 * j as i64 - 2, wp));
            pj = pj.mul(&a).mul(&b2).scale(&n_inv2);
            fact *= (2 * j - 1) * (2 * j);
        }
        let coef = Real::from_ratio(&(b / BigRational::from_integer(fact.clone())), wp);
        sum = sum.add(&pj.mul(&n_jet).scale(&coef));
    }
    let bound = log_remainder(s_abs, sigma, rho, n_f, m).exp();
    let errs: Vec<f64> = (0..len).map(|i| if i == 0 { bound } else { bound / rho.powi(i as i32) }).collect();
    let out = sum.add_errors(&errs);
    Ok(Jet::new(out.coeffs().iter().map(|c| c.with_prec(prec)).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::real::pi;

    const P: u32 = 160;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn even_values() {
        let pi = pi(P);
        let z2 = zeta_real(&q(2, 1), P).unwrap();
        assert!(z2.overlaps(&pi.powi(2).div_i64(6)));
        assert!(z2.rad() < 1e-40);
        assert_eq!(z2.to_decimal(30), pi.powi(2).div_i64(6).to_decimal(30));
        let z4 = zeta_real(&q(4, 1), P).unwrap();
        assert!(z4.overlaps(&pi.powi(4).div_i64(90)));
        let z6 = zeta_real(&q(6, 1), P).unwrap();
        assert!(z6.overlaps(&pi.powi(6).div_i64(945)));
    }

    #[test]
    fn negative_one() {
        let z = zeta_real(&q(-1, 1), P).unwrap();
        assert!(z.contains_ratio(&q(-1, 12)));
        assert!(z.rad() < 1e-40);
    }

    /// η(1/2) = (1 - √2) ζ(1/2) from the alternating series, accelerated by
    /// repeated averaging of partial sums.
    #[test]
    fn half_against_alternating_series() {
        let n = 40;
        let mut partial = Vec::with_capacity(n);
        let mut acc = 0.0f64;
        for k in 1..=n {
            let t = 1.0 / (k as f64).sqrt();
            acc += if k % 2 == 1 { t } else { -t };
            partial.push(acc);
        }
        while partial.len() > 1 {
            partial = partial.windows(2).map(|w| (w[0] + w[1]) / 2.0).collect();
        }
        let zeta_half = partial[0] / (1.0 - 2f64.sqrt());
        let z = zeta_real(&q(1, 2), P).unwrap();
        assert!((z.to_f64() - zeta_half).abs() < 1e-10, "{} vs {zeta_half}", z.to_f64());
        assert!(z.to_decimal(11).starts_with("-1.4603545088"));
    }

    #[test]
    fn pole_is_rejected() {
        assert!(zeta_real(&q(1, 1), P).is_err());
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let s = Real::from_ratio(&q(4, 3), P);
        let jet = zeta_jet(&s, 4, P).unwrap();
        let h = 1e-5;
        let f = |x: f64| zeta_at(&Real::from_f64(x, P), P).unwrap().to_f64();
        let fd = (f(4.0 / 3.0 + h) - f(4.0 / 3.0 - h)) / (2.0 * h);
        assert!((jet.derivative(1).to_f64() - fd).abs() < 1e-6);
        assert!(jet.max_rad() < 1e-35);
    }

    #[test]
    fn zeta_prime_at_two() {
        let jet = zeta_jet(&Real::from_i64(2, P), 2, P).unwrap();
        assert!(jet.derivative(1).to_decimal(20).starts_with("-9.375482543158437537"));
    }
}
