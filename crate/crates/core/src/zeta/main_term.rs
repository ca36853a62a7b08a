use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use super::em::zeta_jet;
use super::laurent::{recip_s_jet, zeta_laurent};
use crate::arith::{sieve_values, summatory, FunctionId, SieveConfig};
use crate::error::{domain, Error, Result};
use crate::real::{ratio_to_f64, Jet, Real};
use crate::series::{evaluate_g_jet, GEvalConfig, ZetaProductSpec};

/// x^{exponent} · Σ_k log_poly[k] (log x)^k.
#[derive(Clone, Debug)]
pub struct MainTermPiece {
    pub exponent: BigRational,
    pub log_poly: Vec<Real>,
}

impl MainTermPiece {
    pub fn degree(&self) -> usize {
        self.log_poly.len() - 1
    }
}

#[derive(Clone, Debug)]
pub struct MainTerm {
    pub function: FunctionId,
    /// Pieces in strictly decreasing order of exponent.
    pub pieces: Vec<MainTermPiece>,
}

#[derive(Serialize)]
struct PieceJson {
    exponent: String,
    log_poly: Vec<String>,
}

impl MainTerm {
    pub fn exponents(&self) -> Vec<BigRational> {
        self.pieces.iter().map(|p| p.exponent.clone()).collect()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.pieces.iter().map(MainTermPiece::degree).collect()
    }

    /// M(x) as a ball.
    pub fn eval(&self, x: &Real) -> Real {
        let prec = x.prec();
        let lx = x.ln();
        let mut total = Real::zero(prec);
        for piece in &self.pieces {
            let mut poly = Real::zero(prec);
            for c in piece.log_poly.iter().rev() {
                poly = poly.mul(&lx).add(&c.with_prec(prec));
            }
            let xe = lx.mul(&Real::from_ratio(&piece.exponent, prec)).exp();
            total = total.add(&poly.mul(&xe));
        }
        total
    }

    pub fn to_json(&self) -> serde_json::Value {
        let v: Vec<PieceJson> = self
            .pieces
            .iter()
            .map(|p| PieceJson {
                exponent: p.exponent.to_string(),
                log_poly: p.log_poly.iter().map(|c| c.to_certified_decimal(30)).collect(),
            })
            .collect();
        serde_json::to_value(v).expect("plain strings")
    }
}

/// The proven error exponent; poles at or below it are not part of the
/// main term.
pub fn error_exponent_bound(id: &FunctionId) -> Result<BigRational> {
    let q = |n: i64, d: i64| BigRational::new(n.into(), d.into());
    Ok(match id {
        FunctionId::ExpCarmichael(1) | FunctionId::ExpTotient => q(1153, 6073),
        FunctionId::ExpCarmichael(2) => q(1153, 5586),
        FunctionId::ExpCarmichael(3) => q(1, 6),
        FunctionId::ExpCarmichael(4) => q(1591066, 12296785),
        other => return domain(format!("no main term for {other}")),
    })
}

/// Residues of Z(s) G(s) x^s / s at the poles of Z above the error exponent.
pub fn main_term(id: &FunctionId, cfg: &GEvalConfig) -> Result<MainTerm> {
    let spec = ZetaProductSpec::for_function(id)?;
    let bound = error_exponent_bound(id)?;
    let prec = cfg.prec;
    let mut pieces = Vec::new();
    for &(a, e) in spec.factors() {
        let s0 = BigRational::new(BigInt::from(1), BigInt::from(a));
        if s0 <= bound {
            continue;
        }
        let len = e as usize;
        // (s - s0) ζ(a s) as a jet, raised to e
        let laurent = zeta_laurent(a, len.saturating_sub(2), prec)?;
        let shifted = Jet::new(laurent.coeffs()[..len].to_vec());
        let mut phi = shifted.powi(e);
        for &(b, f) in spec.factors() {
            if b == a {
                continue;
            }
            let pt = Real::from_ratio(&(BigRational::from_integer(b.into()) * &s0), prec);
            let z = zeta_jet(&pt, len, prec)?.rescale(&Real::from_i64(b as i64, prec));
            phi = phi.mul(&z.powi(f));
        }
        let g = evaluate_g_jet(id, &s0, len, cfg)?;
        phi = phi.mul(&g.jet).mul(&recip_s_jet(&s0, len, prec));
        // residue = Σ_k phi_{e-1-k} (log x)^k / k!
        let mut poly = Vec::with_capacity(len);
        let mut fact = 1i64;
        for k in 0..len {
            if k > 0 {
                fact *= k as i64;
            }
            poly.push(phi.coeff(len - 1 - k).div_i64(fact));
        }
        pieces.push(MainTermPiece { exponent: s0, log_poly: poly });
    }
    pieces.sort_by(|p, q| q.exponent.cmp(&p.exponent));
    Ok(MainTerm { function: id.clone(), pieces })
}

#[derive(Clone, Debug)]
pub struct ResidualPoint {
    pub x: u64,
    pub exact: BigUint,
    pub main: Real,
    pub residual: Real,
}

/// S(x) - M(x) on the given grid.
pub fn residual(id: &FunctionId, mt: &MainTerm, grid: &[u64], prec: u32, sieve: &SieveConfig) -> Result<Vec<ResidualPoint>> {
    if grid.is_empty() {
        return Ok(Vec::new());
    }
    let xmax = *grid.iter().max().expect("nonempty");
    let table = summatory(id, xmax, grid, sieve)?;
    let out: Vec<ResidualPoint> = grid
        .par_iter()
        .map(|&x| {
            let exact = table.value_at(x).expect("checkpoint present").clone();
            let main = mt.eval(&Real::from_i64(x as i64, prec));
            let residual = Real::from_bigint(&BigInt::from(exact.clone()), prec).sub(&main);
            ResidualPoint { x, exact, main, residual }
        })
        .collect();
    Ok(out)
}

pub fn residual_csv(points: &[ResidualPoint]) -> String {
    let mut s = String::from("x,S,M,residual\n");
    for p in points {
        s.push_str(&format!("{},{},{},{}\n", p.x, p.exact, p.main.to_decimal(25), p.residual.to_decimal(25)));
    }
    s
}

/// Integer grid of `per_decade` log-spaced points per decade from 10^lo to 10^hi.
pub fn log_grid(lo: u32, hi: u32, per_decade: u32) -> Vec<u64> {
    let n = (hi - lo) * per_decade;
    let mut g: Vec<u64> = (0..=n)
        .map(|i| 10f64.powf(lo as f64 + i as f64 / per_decade as f64).round() as u64)
        .collect();
    g.dedup();
    g
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Fit {
    pub slope: f64,
    pub intercept: f64,
    /// Coefficient of determination.
    pub r_squared: f64,
}

/// Least-squares fit of log|r| against log x, zero residuals dropped.
pub fn fit_exponent(points: &[(f64, f64)]) -> Result<Fit> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(_, r)| *r != 0.0)
        .map(|&(x, r)| (x.ln(), r.abs().ln()))
        .collect();
    if pts.is_empty() {
        return Err(Error::Domain("degenerate fit: every residual is zero".into()));
    }
    if pts.len() < 8 {
        return domain(format!("fit needs at least 8 nonzero points, got {}", pts.len()));
    }
    let (lo, hi) = pts.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), p| (a.min(p.0), b.max(p.0)));
    if hi - lo < 2.0 * std::f64::consts::LN_10 - 1e-9 {
        return domain("fit grid must span at least two decades");
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r_squared = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Ok(Fit { slope, intercept, r_squared })
}

/// max |r|/x^theta over the top decade of the grid divided by the same
/// quantity over the bottom decade.
pub fn decade_ratio(points: &[(f64, f64)], theta: f64) -> Result<f64> {
    if points.is_empty() {
        return domain("empty residual list");
    }
    let lo = points.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let hi = points.iter().map(|p| p.0).fold(0.0, f64::max);
    if hi < lo * 100.0 {
        return domain("grid must span at least two decades");
    }
    let peak = |a: f64, b: f64| {
        points
            .iter()
            .filter(|p| p.0 >= a && p.0 <= b)
            .map(|p| p.1.abs() / p.0.powf(theta))
            .fold(0.0, f64::max)
    };
    let bottom = peak(lo, lo * 10.0);
    if bottom.is_zero() {
        return domain("bottom decade has only zero residuals");
    }
    Ok(peak(hi / 10.0, hi) / bottom)
}

/// For each block (g[i-1], g[i]] of the grid, the integer x in the block
/// where |S(x) - M(x)| is largest, with its certified residual. Every
/// integer up to the last grid point is visited.
pub fn residual_envelope(id: &FunctionId, mt: &MainTerm, grid: &[u64], prec: u32, sieve: &SieveConfig) -> Result<Vec<ResidualPoint>> {
    if grid.len() < 2 || grid.windows(2).any(|w| w[0] >= w[1]) || grid[0] == 0 {
        return domain("envelope grid must be strictly increasing, start at 1 or above and have two points");
    }
    let pieces: Vec<(f64, Vec<f64>)> = mt
        .pieces
        .iter()
        .map(|p| (ratio_to_f64(&p.exponent), p.log_poly.iter().map(Real::to_f64).collect()))
        .collect();
    let mf = |x: f64| -> f64 {
        let l = x.ln();
        pieces.iter().map(|(e, c)| c.iter().rev().fold(0.0, |a, v| a * l + v) * x.powf(*e)).sum()
    };
    let last = *grid.last().expect("two points");
    let mut best: Vec<(u64, f64)> = vec![(0, -1.0); grid.len() - 1];
    let mut total = 0u128;
    let chunk = 1u64 << 20;
    let mut lo = 1u64;
    while lo <= last {
        let hi = (lo + chunk).min(last + 1);
        let vals = sieve_values(id, lo, hi, sieve)?;
        for (i, v) in vals.iter().enumerate() {
            total += *v as u128;
            let x = lo + i as u64;
            if x <= grid[0] {
                continue;
            }
            let b = grid.partition_point(|&g| g < x) - 1;
            let r = (total as f64 - mf(x as f64)).abs();
            if r > best[b].1 {
                best[b] = (x, r);
            }
        }
        lo = hi;
    }
    let xs: Vec<u64> = best.iter().map(|b| b.0).collect();
    residual(id, mt, &xs, prec, sieve)
}

/// (x, residual) pairs as f64 for fitting.
pub fn residual_f64(points: &[ResidualPoint]) -> Vec<(f64, f64)> {
    points.iter().map(|p| (p.x as f64, p.residual.to_f64())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zeta::zeta_real;

    fn cfg() -> GEvalConfig {
        GEvalConfig { prec: 160, tolerance: 1e-25, ..Default::default() }
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn structure_r1_r2() {
        let m1 = main_term(&FunctionId::ExpCarmichael(1), &cfg()).unwrap();
        assert_eq!(m1.exponents(), vec![q(1, 1), q(1, 3), q(1, 5)]);
        assert_eq!(m1.degrees(), vec![0, 0, 1]);
        let m2 = main_term(&FunctionId::ExpCarmichael(2), &cfg()).unwrap();
        assert_eq!(m2.exponents(), vec![q(1, 2), q(1, 3), q(1, 4)]);
        assert_eq!(m2.degrees(), vec![0, 1, 0]);
    }

    #[test]
    fn leading_constant_r1() {
        // c_11 = ζ(3) ζ(5)^2 G_1(1)
        let c = cfg();
        let m1 = main_term(&FunctionId::ExpCarmichael(1), &c).unwrap();
        let g = evaluate_g_jet(&FunctionId::ExpCarmichael(1), &q(1, 1), 1, &c).unwrap();
        let z3 = zeta_real(&q(3, 1), c.prec).unwrap();
        let z5 = zeta_real(&q(5, 1), c.prec).unwrap();
        let want = z3.mul(&z5).mul(&z5).mul(g.jet.value());
        let got = &m1.pieces[0].log_poly[0];
        assert!(got.overlaps(&want));
        assert!(got.rad() < 1e-20);
    }

    #[test]
    fn json_shape() {
        let m = main_term(&FunctionId::ExpCarmichael(2), &cfg()).unwrap();
        let j = m.to_json();
        assert_eq!(j[0]["exponent"], "1/2");
        assert_eq!(j[1]["log_poly"].as_array().unwrap().len(), 2);
    }

    #[test]
    fn phi_e_shares_r1_structure() {
        let m = main_term(&FunctionId::ExpTotient, &cfg()).unwrap();
        assert_eq!(m.degrees(), vec![0, 0, 1]);
    }

    #[test]
    fn residual_at_one_is_finite() {
        let id = FunctionId::ExpCarmichael(2);
        let m = main_term(&id, &cfg()).unwrap();
        let r = residual(&id, &m, &[1], 160, &SieveConfig::default()).unwrap();
        assert!(r[0].residual.is_finite());
        assert_eq!(r[0].exact, BigUint::from(1u32));
    }

    #[test]
    fn envelope_picks_block_maxima() {
        let id = FunctionId::ExpCarmichael(2);
        let m = main_term(&id, &cfg()).unwrap();
        let grid = [100u64, 1000, 3000];
        let env = residual_envelope(&id, &m, &grid, 160, &SieveConfig::default()).unwrap();
        let all = residual(&id, &m, &(101..=3000).collect::<Vec<_>>(), 160, &SieveConfig::default()).unwrap();
        for (i, e) in env.iter().enumerate() {
            let block = all.iter().filter(|p| p.x > grid[i] && p.x <= grid[i + 1]);
            let peak = block.map(|p| p.residual.to_f64().abs()).fold(0.0, f64::max);
            assert!((e.residual.to_f64().abs() - peak).abs() < 1e-9);
        }
    }

    #[test]
    fn fit_on_exact_power() {
        let pts: Vec<(f64, f64)> = log_grid(4, 7, 10).iter().map(|&x| (x as f64, (x as f64).powf(0.2))).collect();
        let f = fit_exponent(&pts).unwrap();
        assert!((f.slope - 0.2).abs() < 1e-6);
    }

    #[test]
    fn fit_on_power_times_log() {
        // the log factor adds about 1 / log x to the local slope
        let pts: Vec<(f64, f64)> = log_grid(4, 7, 10)
            .iter()
            .map(|&x| (x as f64, (x as f64).powf(0.2) * (x as f64).ln()))
            .collect();
        let f = fit_exponent(&pts).unwrap();
        let lo = 0.2 + 1.0 / (1e7f64).ln();
        let hi = 0.2 + 1.0 / (1e4f64).ln();
        assert!(f.slope > lo && f.slope < hi, "{}", f.slope);
    }

    #[test]
    fn fit_rejects_bad_input() {
        let zeros: Vec<(f64, f64)> = log_grid(4, 7, 10).iter().map(|&x| (x as f64, 0.0)).collect();
        assert!(fit_exponent(&zeros).is_err());
        let short: Vec<(f64, f64)> = (1..20).map(|i| (1000.0 + i as f64, 1.0)).collect();
        assert!(fit_exponent(&short).is_err());
    }

    #[test]
    fn decade_ratio_detects_decay() {
        let pts: Vec<(f64, f64)> = log_grid(4, 7, 10).iter().map(|&x| (x as f64, (x as f64).powf(0.2))).collect();
        assert!(decade_ratio(&pts, 0.25).unwrap() < 1.0);
        assert!(decade_ratio(&pts, 0.1).unwrap() > 1.0);
    }
}
