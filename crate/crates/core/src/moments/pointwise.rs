use std::sync::Mutex;

use num_rational::BigRational;
use serde::Serialize;

use super::ratio_f64;
use super::table::{m_table, q};
use crate::error::{domain, Error, Result};
use crate::pairs::{mu_bound, optimize_fractional, pairs_to_depth, FractionalObjective, LinearConstraint, SearchOptions, Seed};

/// Grid step of the memo used inside root finding.
pub const POINTWISE_GRID: i64 = 10_000;

/// Pointwise lower bounds for m(σ), σ ≥ 5/8, from exponent pairs of
/// bounded depth.
#[derive(Debug)]
pub struct PointwiseModel {
    depth: usize,
    /// (k, l) of every reachable pair, as f64.
    pairs: Vec<(f64, f64)>,
    hull: Mutex<Vec<f64>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PointwiseValue {
    pub sigma: String,
    pub mu: String,
    pub m1: String,
    pub m2: Option<String>,
    pub two_f: f64,
    pub theta: f64,
    /// True when the constraint α₂ ≤ 1 changed the m₂ optimum.
    pub alpha2_binding: bool,
    pub value: f64,
}

impl PointwiseModel {
    pub fn new(depth: usize) -> Result<Self> {
        if depth > 12 {
            return domain(format!("search depth {depth} above the limit 12"));
        }
        let pairs = pairs_to_depth(depth, &Seed::ALL)
            .iter()
            .map(|p| (ratio_f64(&p.k), ratio_f64(&p.l)))
            .collect();
        Ok(PointwiseModel { depth, pairs, hull: Mutex::new(Vec::new()) })
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// c(θ) = min over pairs of (k + l - min(θ, l - k))/2: the exponent
    /// pair bound inf_{l-k ≥ θ} (k+l-θ)/2 made nonincreasing by taking
    /// the running minimum from the left.
    pub fn c_envelope(&self, theta: f64) -> f64 {
        self.pairs
            .iter()
            .filter(|(k, l)| l >= k)
            .map(|(k, l)| (k + l - theta.min(l - k)) / 2.0)
            .fold(f64::INFINITY, f64::min)
    }

    /// Root of 2c(θ) + 1 + θ - 2(1 + c(θ))σ = 0 on [0, 1].
    pub fn theta(&self, sigma: f64) -> Result<f64> {
        let g = |t: f64| {
            let c = self.c_envelope(t);
            2.0 * c + 1.0 + t - 2.0 * (1.0 + c) * sigma
        };
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        let (glo, ghi) = (g(lo), g(hi));
        if !(glo <= 0.0 && ghi >= 0.0) {
            return Err(Error::Bracket(format!(
                "θ equation at σ = {sigma} does not change sign on [0, 1]: c(0) = {}, c(1) = {}, values {glo}, {ghi}",
                self.c_envelope(0.0),
                self.c_envelope(1.0)
            )));
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if g(mid) <= 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo < 1e-15 {
                break;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// min(m₁, m₂, 2f(σ)).
    pub fn evaluate(&self, sigma: &BigRational) -> Result<PointwiseValue> {
        self.bound(sigma, true)
    }

    fn bound(&self, sigma: &BigRational, record_binding: bool) -> Result<PointwiseValue> {
        if *sigma < q(5, 8) || *sigma >= q(1, 1) {
            return domain(format!("pointwise bound needs 5/8 ≤ σ < 1, got {sigma}"));
        }
        let mu = mu_bound(sigma, self.depth)?
            .optimum()
            .map(|o| o.value.clone())
            .ok_or_else(|| Error::Domain(format!("no exponent pair with l - k ≥ {sigma} at depth {}", self.depth)))?;
        let one = q(1, 1);
        let two = q(2, 1);
        let four = q(4, 1);
        let s = sigma;
        let alpha1 = (&four - &four * s) / (&one + &two * s);
        let beta1 = -q(12, 1) / (&one + &two * s);
        let m1 = (&one - alpha1) / &mu - beta1;

        let eight = q(8, 1);
        let obj = FractionalObjective::new([
            &four * s - &two + &eight * &mu,
            &eight * s - q(6, 1) + &eight * &mu,
            &two * s - &one + &four * &mu,
            &two * &mu,
            &mu * (&four * s - &two),
            &mu * (&two * s - &one),
        ])?;
        let alpha2 = LinearConstraint::new(&four * s - &two, &eight * s - q(6, 1), &two * s - &one);
        let opts = SearchOptions::new(self.depth);
        let m2 = optimize_fractional(&obj, std::slice::from_ref(&alpha2), &opts)?.optimum().map(|o| o.value.clone());
        let alpha2_binding = record_binding && {
            let free = optimize_fractional(&obj, &[], &opts)?.optimum().map(|o| o.value.clone());
            m2 != free
        };

        let sf = ratio_f64(s);
        let theta = self.theta(sf)?;
        let c = self.c_envelope(theta);
        let two_f = 4.0 * (1.0 + c) / c;

        let mut value = ratio_f64(&m1).min(two_f);
        if let Some(m2) = &m2 {
            value = value.min(ratio_f64(m2));
        }
        Ok(PointwiseValue {
            sigma: s.to_string(),
            mu: mu.to_string(),
            m1: m1.to_string(),
            m2: m2.map(|v| v.to_string()),
            two_f,
            theta,
            alpha2_binding,
            value,
        })
    }

    /// Running maximum of the grid bound from 5/8 up to grid index `i`,
    /// extended on demand. Grid points where the θ equation has no root
    /// contribute nothing.
    fn hull_at(&self, i: i64) -> Result<f64> {
        let base = 5 * POINTWISE_GRID / 8;
        if i < base {
            return Ok(0.0);
        }
        if i >= POINTWISE_GRID {
            return domain("pointwise grid ends below σ = 1");
        }
        let mut hull = self.hull.lock().expect("hull lock");
        while hull.len() as i64 <= i - base {
            let j = base + hull.len() as i64;
            let v = match self.bound(&q(j, POINTWISE_GRID), false) {
                Ok(v) => v.value,
                Err(Error::Bracket(_)) => 0.0,
                Err(e) => return Err(e),
            };
            let prev = hull.last().copied().unwrap_or(0.0);
            hull.push(prev.max(v));
        }
        Ok(hull[(i - base) as usize])
    }

    /// Monotone interpolation of the grid bound: linear between the running
    /// maxima at neighbouring grid points. Valid because m(σ) is
    /// nondecreasing while the single-point bound is not.
    pub fn interpolated(&self, sigma: f64) -> Result<f64> {
        let x = sigma * POINTWISE_GRID as f64;
        let i = x.floor() as i64;
        let t = x - i as f64;
        let a = self.hull_at(i)?;
        let v = if t == 0.0 { a } else { a + t * (self.hull_at(i + 1)? - a) };
        if v <= 0.0 {
            return Err(Error::Bracket(format!("no pointwise bound up to σ = {sigma}")));
        }
        Ok(v)
    }
}

/// The pointwise bound min(m₁, m₂, 2f) at a single rational σ.
pub fn pointwise_m(sigma: &BigRational, depth: usize) -> Result<PointwiseValue> {
    PointwiseModel::new(depth)?.evaluate(sigma)
}

/// max(table, pointwise) at a rational point, the table alone below 5/8
/// or where the θ equation has no root.
pub fn combined_m(model: &PointwiseModel, sigma: &BigRational) -> Result<f64> {
    let t = ratio_f64(&m_table(sigma)?);
    if *sigma < q(5, 8) {
        return Ok(t);
    }
    match model.interpolated(ratio_f64(sigma)) {
        Ok(p) => Ok(t.max(p)),
        Err(Error::Bracket(_)) => Ok(t),
        Err(e) => Err(e),
    }
}
