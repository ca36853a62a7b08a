use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use super::power::PowerSeriesQ;
use crate::arith::{carmichael_small, primes_up_to, sieve_values, FunctionId, SieveConfig};
use crate::error::{domain, Error, Result};

/// Π_j ζ^{e_j}(a_j s), stored as (a_j, e_j) with strictly increasing a_j.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZetaProductSpec {
    factors: Vec<(u32, u32)>,
}

impl ZetaProductSpec {
    pub fn new(factors: Vec<(u32, u32)>) -> Result<Self> {
        if factors.is_empty() {
            return domain("empty zeta product");
        }
        for w in factors.windows(2) {
            if w[0].0 >= w[1].0 {
                return domain("multipliers must be strictly increasing");
            }
        }
        if factors.iter().any(|&(a, e)| a == 0 || e == 0) {
            return domain("multipliers and exponents must be >= 1");
        }
        Ok(ZetaProductSpec { factors })
    }

    /// The product Z_r paired with λ⁽ᵉ⁾_r.
    pub fn for_r(r: u32) -> Result<Self> {
        let f = match r {
            1 => vec![(1, 1), (3, 1), (5, 2)],
            2 => vec![(2, 1), (3, 2), (4, 1), (5, 2)],
            3 => vec![(3, 2), (4, 2), (5, 4)],
            4 => vec![(4, 2), (5, 4), (6, 2), (7, 6)],
            _ => return domain(format!("r must be in 1..4, got {r}")),
        };
        Self::new(f)
    }

    /// The product used for a function family (φ⁽ᵉ⁾ shares Z_1).
    pub fn for_function(id: &FunctionId) -> Result<Self> {
        match id {
            FunctionId::ExpCarmichael(r) => Self::for_r(*r),
            FunctionId::ExpTotient => Self::for_r(1),
            other => domain(format!("no zeta factorization registered for {other}")),
        }
    }

    pub fn factors(&self) -> &[(u32, u32)] {
        &self.factors
    }

    /// Each a_j repeated e_j times: the exponent list of the matching τ.
    pub fn tau_exponents(&self) -> Vec<u32> {
        self.factors.iter().flat_map(|&(a, e)| std::iter::repeat_n(a, e as usize)).collect()
    }
}

/// Required vanishing order of the local factor of G for each family.
pub fn required_vanishing(id: &FunctionId) -> Result<usize> {
    match id {
        FunctionId::ExpCarmichael(1) | FunctionId::ExpTotient => Ok(8),
        FunctionId::ExpCarmichael(2) | FunctionId::ExpCarmichael(3) => Ok(6),
        FunctionId::ExpCarmichael(4) => Ok(8),
        other => domain(format!("no series certification for {other}")),
    }
}

/// 1 + Σ_{a≥1} f(p^a) x^a for an exponential-type function, through x^K.
pub fn local_factor(id: &FunctionId, k: usize) -> Result<PowerSeriesQ> {
    if k > 64 {
        return domain(format!("order {k} exceeds 64"));
    }
    let t = id.local_table(k as u32)?;
    Ok(PowerSeriesQ::new(t.iter().map(|&v| BigInt::from(v).into()).collect(), k))
}

/// 1 + Σ_{a≥r} λ(a) x^a through x^K.
pub fn local_factor_l(r: u32, k: usize) -> Result<PowerSeriesQ> {
    local_factor(&FunctionId::exp_carmichael(r)?, k)
}

/// Π_j (1 - x^{a_j})^{-e_j} through x^K.
pub fn local_factor_z(spec: &ZetaProductSpec, k: usize) -> PowerSeriesQ {
    local_factor_z_inverse(spec, k).inv().expect("constant term is 1")
}

/// Π_j (1 - x^{a_j})^{e_j}, a polynomial.
pub fn local_factor_z_inverse(spec: &ZetaProductSpec, k: usize) -> PowerSeriesQ {
    let mut out = PowerSeriesQ::one(k);
    for &(a, e) in spec.factors() {
        out = out.mul(&PowerSeriesQ::one_minus_monomial(a as usize, k).powi(e));
    }
    out
}

/// Local factor of G = L / Z through x^K.
pub fn local_factor_g(id: &FunctionId, k: usize) -> Result<PowerSeriesQ> {
    let spec = ZetaProductSpec::for_function(id)?;
    Ok(local_factor(id, k)?.mul(&local_factor_z_inverse(&spec, k)))
}

#[derive(Clone, Debug, Serialize)]
pub struct VanishingReport {
    pub function: String,
    /// First positive index with a nonzero coefficient (None if all vanish
    /// through the truncation order).
    pub v: Option<usize>,
    pub required: usize,
    pub order: usize,
    pub pass: bool,
}

/// First nonzero positive index of L/Z, checked against the required order.
pub fn vanishing_report(id: &FunctionId, k: usize) -> Result<VanishingReport> {
    let spec = ZetaProductSpec::for_function(id)?;
    let l = local_factor(id, k)?;
    let g = l.div(&local_factor_z(&spec, k))?;
    let v = g.first_nonzero_positive();
    let required = required_vanishing(id)?;
    Ok(VanishingReport {
        function: id.to_string(),
        v,
        required,
        order: k,
        pass: v.is_none_or(|v| v >= required),
    })
}

/// Certifies the vanishing order for λ⁽ᵉ⁾_r at K = 32; a defect is an error.
pub fn verify_vanishing(r: u32) -> Result<VanishingReport> {
    let rep = vanishing_report(&FunctionId::exp_carmichael(r)?, 32)?;
    if !rep.pass {
        return Err(Error::Certification(format!(
            "local factor for r = {r} vanishes only to order {:?}, need {}",
            rep.v, rep.required
        )));
    }
    Ok(rep)
}

pub const G_COEFFICIENT_LIMIT: usize = 1_000_000;

/// Dirichlet coefficients g(1..=n) of G, by multiplicative lift of the
/// local factors.
pub fn g_coefficients(id: &FunctionId, n: usize) -> Result<Vec<BigInt>> {
    g_coefficients_with_limit(id, n, G_COEFFICIENT_LIMIT)
}

pub fn g_coefficients_with_limit(id: &FunctionId, n: usize, limit: usize) -> Result<Vec<BigInt>> {
    if n > limit {
        return Err(Error::Capacity(format!("g coefficients requested to {n}, limit {limit}")));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let kmax = (usize::BITS - n.leading_zeros()) as usize; // 2^kmax > n
    let local = local_factor_g(id, kmax.max(1))?
        .to_integers()
        .ok_or_else(|| Error::Certification("non-integral local coefficient".into()))?;
    let v = (1..local.len()).find(|&i| !local[i].is_zero()).unwrap_or(local.len());
    let mut entries: Vec<(u64, BigInt)> = vec![(1, BigInt::one())];
    let pmax = (n as f64).powf(1.0 / v as f64).floor() as u64 + 1;
    for p in primes_up_to(pmax) {
        let mut powers = Vec::new();
        let mut pa = 1u64;
        for (a, g) in local.iter().enumerate().skip(1) {
            pa = match pa.checked_mul(p) {
                Some(x) if x <= n as u64 => x,
                _ => break,
            };
            if a >= v && !g.is_zero() {
                powers.push((pa, g.clone()));
            }
        }
        if powers.is_empty() {
            continue;
        }
        let base = entries.len();
        for i in 0..base {
            let (m, val) = entries[i].clone();
            for (pa, g) in &powers {
                if m * pa <= n as u64 {
                    entries.push((m * pa, &val * g));
                }
            }
        }
    }
    let mut out = vec![BigInt::zero(); n];
    for (m, val) in entries {
        out[m as usize - 1] = val;
    }
    Ok(out)
}

/// Dirichlet coefficients of Z: τ(a_1..a_1, a_2.., ...; n) for n = 1..=n.
pub fn z_coefficients(spec: &ZetaProductSpec, n: usize) -> Result<Vec<BigInt>> {
    let id = FunctionId::tau(spec.tau_exponents())?;
    Ok(sieve_values(&id, 1, n as u64 + 1, &SieveConfig::default())?
        .into_iter()
        .map(BigInt::from)
        .collect())
}

/// Least-squares slope of log Σ_{m≤x}|g(m)| against log x over a log grid.
pub fn g_growth_exponent(g: &[BigInt], points: usize) -> f64 {
    let n = g.len();
    let mut partial = Vec::with_capacity(n);
    let mut acc = 0f64;
    for v in g {
        acc += v.to_f64().unwrap_or(f64::INFINITY).abs();
        partial.push(acc);
    }
    let lo = (n as f64).ln() / 2.0;
    let hi = (n as f64).ln();
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for i in 0..points {
        let x = (lo + (hi - lo) * i as f64 / (points - 1) as f64).exp().floor() as usize;
        let x = x.clamp(1, n);
        xs.push((x as f64).ln());
        ys.push(partial[x - 1].ln());
    }
    let mx = xs.iter().sum::<f64>() / points as f64;
    let my = ys.iter().sum::<f64>() / points as f64;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// λ(a) for a = 1..=k, as used by the local factors.
pub fn carmichael_of_exponents(k: u32) -> Vec<u64> {
    (1..=k).map(carmichael_small).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::dirichlet_convolve;

    #[test]
    fn local_l_examples() {
        assert_eq!(local_factor_l(1, 7).unwrap(), PowerSeriesQ::from_ints(&[1, 1, 1, 2, 2, 4, 2, 6], 7));
        assert_eq!(local_factor_l(4, 4).unwrap(), PowerSeriesQ::from_ints(&[1, 0, 0, 0, 2], 4));
        assert_eq!(local_factor_l(2, 1).unwrap(), PowerSeriesQ::one(1));
        assert!(local_factor_l(5, 4).is_err());
        assert!(local_factor_l(1, 65).is_err());
    }

    #[test]
    fn local_z_examples() {
        let zeta = ZetaProductSpec::new(vec![(1, 1)]).unwrap();
        assert_eq!(local_factor_z(&zeta, 3), PowerSeriesQ::from_ints(&[1, 1, 1, 1], 3));
        let z1 = ZetaProductSpec::for_r(1).unwrap();
        assert_eq!(local_factor_z(&z1, 5), PowerSeriesQ::from_ints(&[1, 1, 1, 2, 2, 4], 5));
        assert_eq!(local_factor_z(&z1, 5), local_factor_l(1, 5).unwrap());
        let z4 = ZetaProductSpec::for_r(4).unwrap();
        assert_eq!(local_factor_z(&z4, 3), PowerSeriesQ::one(3));
        assert!(ZetaProductSpec::new(vec![(3, 1), (1, 1)]).is_err());
    }

    #[test]
    fn vanishing_orders() {
        for (r, want) in [(2, 6), (3, 6), (4, 8)] {
            assert_eq!(verify_vanishing(r).unwrap().v, Some(want));
        }
        // L_1 has 2x^6 (λ(6) = 2) while 1/((1-x)(1-x^3)(1-x^5)^2) has 5x^6
        let rep = vanishing_report(&FunctionId::ExpCarmichael(1), 32).unwrap();
        assert_eq!(rep.v, Some(6));
        assert!(!rep.pass);
        assert!(matches!(verify_vanishing(1), Err(Error::Certification(_))));
        let g = local_factor_g(&FunctionId::ExpCarmichael(1), 8).unwrap();
        assert_eq!(g, PowerSeriesQ::from_ints(&[1, 0, 0, 0, 0, 0, -3, 4, -6], 8));
        let h = vanishing_report(&FunctionId::ExpTotient, 32).unwrap();
        assert_eq!(h.v, Some(6));
    }

    #[test]
    fn division_round_trip() {
        for r in 1..=4 {
            let spec = ZetaProductSpec::for_r(r).unwrap();
            let l = local_factor_l(r, 32).unwrap();
            let z = local_factor_z(&spec, 32);
            assert_eq!(l.div(&z).unwrap().mul(&z), l);
        }
    }

    #[test]
    fn g_local_vanishing() {
        let g1 = g_coefficients(&FunctionId::ExpCarmichael(1), 5000).unwrap();
        for p in [2usize, 3, 5] {
            let mut pa = p;
            for _ in 1..=5 {
                assert!(g1[pa - 1].is_zero());
                pa *= p;
            }
        }
        assert_eq!(g1[63], BigInt::from(-3));
        assert_eq!(g1[127], BigInt::from(4));
        let g3 = g_coefficients(&FunctionId::ExpCarmichael(3), 5000).unwrap();
        for a in 1..=5 {
            assert!(g3[3usize.pow(a) - 1].is_zero());
        }
        let g4 = g_coefficients(&FunctionId::ExpCarmichael(4), 5000).unwrap();
        assert!(g4[..255].iter().skip(1).all(|v| v.is_zero()));
        assert_eq!(g4[255], BigInt::from(-1));
    }

    #[test]
    fn z_times_g_is_l() {
        let n = 10_000;
        for id in [1, 2, 3, 4].map(FunctionId::ExpCarmichael).into_iter().chain([FunctionId::ExpTotient]) {
            let spec = ZetaProductSpec::for_function(&id).unwrap();
            let z = z_coefficients(&spec, n).unwrap();
            let g = g_coefficients(&id, n).unwrap();
            let l = dirichlet_convolve(&z, &g).unwrap();
            let direct = sieve_values(&id, 1, n as u64 + 1, &SieveConfig::default()).unwrap();
            for (i, (a, b)) in l.iter().zip(direct).enumerate() {
                assert_eq!(*a, BigInt::from(b), "{id} at n = {}", i + 1);
            }
        }
    }

    #[test]
    fn growth_fit_on_power_law() {
        let g: Vec<BigInt> = (1..=10_000u32).map(|n| if n.is_power_of_two() { BigInt::from(n) } else { BigInt::zero() }).collect();
        // partial sums are about 2x on powers of two; the fitted slope is near 1
        let slope = g_growth_exponent(&g, 12);
        assert!((slope - 1.0).abs() < 0.1, "{slope}");
    }

    #[test]
    fn capacity_limit() {
        assert!(g_coefficients_with_limit(&FunctionId::ExpCarmichael(1), 11, 10).is_err());
    }
}
