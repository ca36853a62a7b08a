//! Evaluation of G(s) = Π_p G_p(p^{-s}) and its s-derivatives at real s.
//!
//! Primes p ≤ P are handled directly from the local series. For p > P the
//! local factor is written as Π_k (1 - y^k)^{-h_k} with integer h_k, so the
//! tail becomes Σ_k h_k log ζ_{>P}(k s), where ζ_{>P} drops the Euler
//! factors at p ≤ P. Terms with k beyond the computed range are bounded by
//! a Cauchy estimate of the local logarithm.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::local::ZetaProductSpec;
use crate::arith::{primes_up_to, FunctionId};
use crate::error::{domain, Error, Result};
use crate::real::{ln_int, ratio_to_f64, Jet, Real};
use crate::zeta::zeta_jet;

#[derive(Clone, Debug)]
pub struct GEvalConfig {
    pub prec: u32,
    /// Primes up to this cutoff are treated exactly.
    pub cutoff: u64,
    /// Largest acceptable radius of any returned derivative.
    pub tolerance: f64,
    /// Required distance of s from the abscissa of absolute convergence.
    pub margin: BigRational,
}

impl Default for GEvalConfig {
    fn default() -> Self {
        GEvalConfig {
            prec: 256,
            cutoff: 1000,
            tolerance: 1e-30,
            margin: BigRational::new(1.into(), 100.into()),
        }
    }
}

/// Taylor jet of G at s with certified radii.
#[derive(Clone, Debug)]
pub struct GEvaluation {
    pub function: FunctionId,
    pub s: BigRational,
    pub jet: Jet,
    pub cutoff: u64,
    /// Number of h_k terms handled explicitly in the tail.
    pub terms: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct GRecord {
    pub s: String,
    pub d: usize,
    pub value: String,
    pub tail_bound: String,
    pub cutoff: u64,
}

impl GEvaluation {
    /// G^{(d)}(s).
    pub fn derivative(&self, d: usize) -> Real {
        self.jet.derivative(d)
    }

    pub fn record(&self, d: usize) -> GRecord {
        let v = self.derivative(d);
        GRecord {
            s: self.s.to_string(),
            d,
            value: v.to_certified_decimal(40),
            tail_bound: format!("{:.3e}", v.rad()),
            cutoff: self.cutoff,
        }
    }
}

/// Vanishing order v of the local factor of G; the Euler product converges
/// absolutely for σ > 1/v.
pub fn g_vanishing_order(id: &FunctionId) -> Result<usize> {
    let g = local_g_integers(id, 32)?;
    Ok((1..g.len()).find(|&i| !g[i].is_zero()).unwrap_or(33))
}

/// Exact local coefficients of G through x^k.
fn local_g_integers(id: &FunctionId, k: usize) -> Result<Vec<BigInt>> {
    let spec = ZetaProductSpec::for_function(id)?;
    let table = id.local_table(k as u32)?;
    let mut g: Vec<BigInt> = table.iter().map(|&v| BigInt::from(v)).collect();
    for &(a, e) in spec.factors() {
        for _ in 0..e {
            // multiply by (1 - x^a)
            for i in (a as usize..=k).rev() {
                let t = g[i - a as usize].clone();
                g[i] -= t;
            }
        }
    }
    Ok(g)
}

fn mobius(n: usize) -> i32 {
    let f = crate::arith::factorize(n as u64).expect("n >= 1");
    if f.exponents().any(|a| a > 1) {
        0
    } else if f.factors().len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Integers h_k (k = 0..=kmax, h_0 unused) with G_loc(y) = Π_k (1 - y^k)^{-h_k}.
fn product_exponents(g: &[BigInt]) -> Vec<BigInt> {
    let kmax = g.len() - 1;
    // c_k = k ℓ_k where log G_loc = Σ ℓ_k y^k
    let mut c = vec![BigInt::zero(); kmax + 1];
    for k in 1..=kmax {
        let mut acc = &g[k] * BigInt::from(k);
        for j in 1..k {
            if !c[j].is_zero() && !g[k - j].is_zero() {
                acc -= &c[j] * &g[k - j];
            }
        }
        c[k] = acc;
    }
    let mut h = vec![BigInt::zero(); kmax + 1];
    for k in 1..=kmax {
        let mut acc = BigInt::zero();
        for d in 1..=k {
            if k % d == 0 && !c[d].is_zero() {
                let m = mobius(k / d);
                if m != 0 {
                    acc += &c[d] * BigInt::from(m);
                }
            }
        }
        let (q, r) = acc.div_rem(&BigInt::from(k));
        debug_assert!(r.is_zero(), "h_{k} not integral");
        h[k] = q;
    }
    h
}

/// Bound B' and radius R with |h_k| <= B' R^{-k} for all k, from
/// |log G_loc| <= B_0 on |y| = R. The returned list covers a grid of R.
fn cauchy_candidates(id: &FunctionId) -> Result<Vec<(f64, f64)>> {
    let spec = ZetaProductSpec::for_function(id)?;
    let table = id.local_table(64)?;
    let first = (1..table.len()).find(|&a| table[a] != 0).unwrap_or(1) as f64;
    let mut out = Vec::new();
    for i in 5..98 {
        let r = i as f64 / 100.0;
        // Σ_{a≥first} a R^a, using f(a) <= a
        let ql = r.powf(first) * (first - (first - 1.0) * r) / (1.0 - r).powi(2);
        if ql >= 1.0 {
            continue;
        }
        let mut b0 = -(1.0 - ql).ln();
        for &(a, e) in spec.factors() {
            b0 += e as f64 * -(1.0 - r.powi(a as i32)).ln();
        }
        let bp = b0 * (1.0 + 1.0 / (1.0 - r)) * 1.001;
        out.push((bp, r));
    }
    Ok(out)
}

/// Σ_{n>P} n^{-u} / (1 - P^{-u}) for real u > 1, an upper bound for
/// Σ_{p>P} p^{-u}/(1 - p^{-u}).
fn tail_sum(p: f64, u: f64) -> f64 {
    if u <= 1.0 {
        return f64::INFINITY;
    }
    let pu = p.powf(-u);
    (p.powf(1.0 - u) / (u - 1.0)) / (1.0 - pu) * 1.0001
}

/// Σ_{n≥n0} n^{-u}, u > 1.
fn sum_from(n0: f64, u: f64) -> f64 {
    (n0.powf(-u) + n0.powf(1.0 - u) / (u - 1.0)) * 1.0001
}

fn bits_of(x: &BigInt) -> u32 {
    x.bits() as u32
}

/// Jet of log G_p at s0 for one prime, computed from the local series.
fn direct_factor(id: &FunctionId, spec: &ZetaProductSpec, table: &[u64], p: u64, s0: &Real, len: usize, wp: u32) -> Jet {
    let lnp = ln_int(p, wp);
    let y0 = lnp.mul(s0).neg().exp();
    let y0f = y0.upper_f64().min(1.0 - 1e-12);
    let eps = crate::real::BigFloat::from_f64(1.0).mul_pow2(-(wp as i64) - 8).to_f64();
    let mut moments = vec![Real::zero(wp); len];
    let mut ya = Real::one(wp);
    let mut a = 0usize;
    let mut tail = vec![0.0f64; len];
    loop {
        a += 1;
        ya = ya.mul(&y0);
        let fa = if a < table.len() { table[a] } else { lambda_or_phi(id, a) };
        if fa != 0 {
            let mut t = ya.mul_i64(fa as i64);
            for m in moments.iter_mut() {
                *m = m.add(&t);
                t = t.mul_i64(a as i64);
            }
        }
        // bound Σ_{b>a} b^{i+1} y^b for the largest i
        let b = (a + 1) as f64;
        let ratio = ((b + 1.0) / b).powi(len as i32) * y0f;
        if ratio < 1.0 {
            let first = b.powi(len as i32) * y0f.powf(b);
            let bound = first / (1.0 - ratio);
            if bound < eps {
                for (i, t) in tail.iter_mut().enumerate() {
                    *t = b.powi(i as i32 + 1) * y0f.powf(b) / (1.0 - ((b + 1.0) / b).powi(i as i32 + 1) * y0f);
                }
                break;
            }
        }
    }
    // L jet: coefficient i = (-ln p)^i / i! * M_i
    let mut c = Vec::with_capacity(len);
    let mut scale = Real::one(wp);
    let lnpf = lnp.upper_f64();
    let mut scale_f = 1.0f64;
    for i in 0..len {
        if i > 0 {
            scale = scale.mul(&lnp.neg()).div_i64(i as i64);
            scale_f *= lnpf / i as f64;
        }
        let mut v = moments[i].mul(&scale).add_error(tail[i] * scale_f * 1.0001);
        if i == 0 {
            v = v.add(&Real::one(wp));
        }
        c.push(v);
    }
    let mut g = Jet::new(c);
    for &(a, e) in spec.factors() {
        let ya = Jet::exp_linear(&y0.powi(a), &lnp.mul_i64(-(a as i64)), len);
        let f = Jet::constant(Real::one(wp), len).sub(&ya);
        g = g.mul(&f.powi(e));
    }
    g.ln()
}

fn lambda_or_phi(id: &FunctionId, a: usize) -> u64 {
    id.local_table(a as u32).map(|t| t[a]).unwrap_or(0)
}

/// Jet of G at the rational point s (Taylor coefficients in h = s - s0).
pub fn evaluate_g_jet(id: &FunctionId, s: &BigRational, len: usize, cfg: &GEvalConfig) -> Result<GEvaluation> {
    if len == 0 || len > 8 {
        return domain(format!("derivative count {len} outside 1..8"));
    }
    if cfg.cutoff < 2 {
        return domain("cutoff must be at least 2");
    }
    let v = g_vanishing_order(id)?;
    let abscissa = BigRational::new(BigInt::one(), BigInt::from(v));
    if s <= &(&abscissa + &cfg.margin) {
        return domain(format!(
            "s = {s} is not above the abscissa 1/{v} plus margin {}",
            cfg.margin
        ));
    }
    let spec = ZetaProductSpec::for_function(id)?;
    let sf = ratio_to_f64(s);
    let af = 1.0 / v as f64;
    let rho = ((sf - af) / 2.0).min(0.25);
    let sig = sf - rho;
    let pf = cfg.cutoff as f64;
    let ymax = pf.powf(-sig);
    let cauchy_factor = rho.powi(-(len as i32 - 1)).max(1.0);
    let budget = cfg.tolerance / 8.0;

    // remainder beyond K, minimized over R
    let cands = cauchy_candidates(id)?;
    let remainder = |k: usize| -> f64 {
        let mut best = f64::INFINITY;
        for &(bp, r) in &cands {
            let q = ymax / r;
            if q >= 1.0 {
                continue;
            }
            let u = (k + 1) as f64 * sig;
            if u <= 1.0 {
                continue;
            }
            let m = bp / (1.0 - pf.powf(-u)) * pf / (u - 1.0) * q.powi(k as i32 + 1) / (1.0 - q);
            best = best.min(m);
        }
        best * cauchy_factor
    };
    let mut kmax = v.max((1.0 / sig).ceil() as usize + 1);
    while remainder(kmax) > budget {
        kmax += 16;
        if kmax > 4000 {
            let needed = cands
                .iter()
                .map(|&(_, r)| r.powf(-1.0 / sig))
                .fold(f64::INFINITY, f64::min);
            return Err(Error::Precision(format!(
                "tail bound above tolerance at cutoff {}; raise the cutoff well beyond {:.0}",
                cfg.cutoff, needed
            )));
        }
    }
    let g_loc = local_g_integers(id, kmax)?;
    let h = product_exponents(&g_loc);
    let hmax_bits = h.iter().map(bits_of).max().unwrap_or(0);
    let wp = cfg.prec + 32 + 4 * len as u32;
    let s0 = Real::from_ratio(s, wp + hmax_bits + 16);
    let table = id.local_table(64)?;

    let primes = primes_up_to(cfg.cutoff);
    let direct: Vec<Jet> = primes
        .par_iter()
        .map(|&p| direct_factor(id, &spec, &table, p, &s0.with_prec(wp), len, wp))
        .collect();
    let mut log_g = Jet::zero(len, wp);
    for j in &direct {
        log_g = log_g.add(j);
    }

    // middle range v ≤ k ≤ kmax: exact h_k, ζ computed or term bounded
    let per_term = budget / kmax as f64;
    let work: Vec<usize> = (v..=kmax)
        .filter(|&k| !h[k].is_zero())
        .collect();
    let results: Vec<(Option<Jet>, f64)> = work
        .par_iter()
        .map(|&k| {
            let hk = h[k].abs().to_f64().unwrap_or(f64::INFINITY);
            let u = k as f64 * sig;
            let bound = hk * tail_sum(pf, u) * cauchy_factor;
            if bound <= per_term {
                return (None, bound);
            }
            let wk = wp + bits_of(&h[k]) + 8;
            (Some(tail_term(&h[k], k, &s0.with_prec(wk + 16), &primes, len, wk, sig, per_term / hk.max(1.0), rho)), 0.0)
        })
        .collect();
    let mut skipped = 0.0f64;
    let mut computed = 0usize;
    for (j, b) in results {
        match j {
            Some(j) => {
                computed += 1;
                log_g = log_g.add(&Jet::new(j.coeffs().iter().map(|c| c.with_prec(wp)).collect()));
            }
            None => skipped += b,
        }
    }
    let rem = remainder(kmax);
    let errs: Vec<f64> = (0..len).map(|i| (skipped + rem) / cauchy_factor * rho.powi(-(i as i32))).collect();
    let log_g = log_g.add_errors(&errs);
    let jet = log_g.exp();
    let jet = Jet::new(jet.coeffs().iter().map(|c| c.with_prec(cfg.prec)).collect());
    let eval = GEvaluation { function: id.clone(), s: s.clone(), jet, cutoff: cfg.cutoff, terms: computed };
    let worst = (0..len).map(|d| eval.derivative(d).rad()).fold(0.0, f64::max);
    if !(worst <= cfg.tolerance) {
        return Err(Error::Precision(format!(
            "G radius {worst:.2e} exceeds tolerance {:.1e} at cutoff {}; try cutoff {}",
            cfg.tolerance,
            cfg.cutoff,
            cfg.cutoff * 4
        )));
    }
    Ok(eval)
}

/// h_k · log ζ_{>P}(k (s0 + h)) as a jet, with skipped primes bounded.
#[allow(clippy::too_many_arguments)]
fn tail_term(hk: &BigInt, k: usize, s0: &Real, primes: &[u64], len: usize, wk: u32, sig: f64, abs_budget: f64, rho: f64) -> Jet {
    let u0 = s0.mul_i64(k as i64);
    let kr = Real::from_i64(k as i64, wk);
    let mut acc = zeta_jet(&u0, len, wk).expect("k s0 > 1").ln().rescale(&kr);
    let u = k as f64 * sig;
    let cf = rho.powi(-(len as i32 - 1)).max(1.0);
    let mut cut = primes.len();
    for (i, &p) in primes.iter().enumerate() {
        if sum_from(p as f64, u) * 1.01 * cf <= abs_budget / 4.0 {
            cut = i;
            break;
        }
    }
    for &p in &primes[..cut] {
        let lnp = ln_int(p, wk);
        let z0 = lnp.mul(&u0).neg().exp();
        let z = Jet::exp_linear(&z0, &lnp.mul_i64(-(k as i64)), len);
        // log ζ_{>P} = log ζ + Σ_{p≤P} log(1 - p^{-u})
        acc = acc.add(&Jet::constant(Real::one(wk), len).sub(&z).ln());
    }
    let mut skipped = 0.0;
    if cut < primes.len() {
        skipped = sum_from(primes[cut] as f64, u) * 1.01;
    }
    let errs: Vec<f64> = (0..len).map(|i| skipped * rho.powi(-(i as i32))).collect();
    acc.add_errors(&errs).scale(&Real::from_bigint(hk, wk))
}

/// G^{(d)}(s) as a JSON-ready record.
pub fn evaluate_g(id: &FunctionId, s: &BigRational, d: usize, cfg: &GEvalConfig) -> Result<GRecord> {
    Ok(evaluate_g_jet(id, s, d + 1, cfg)?.record(d))
}
