use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::mu::{contour_threshold_value, MuModel};
use super::pointwise::{PointwiseModel, POINTWISE_GRID};
use super::ratio_f64;
use super::table::{m_table, moment_table, q, Poly};
use crate::arith::factorize;
use crate::error::{domain, Error, Result};
use crate::real::Real;
use crate::series::ZetaProductSpec;

/// (multiplier, weight): the deficit is Σ w/m(jC) - 1.
pub const HOLDER_TERMS: [(i64, i64); 4] = [(4, 2), (5, 4), (6, 2), (7, 6)];

pub enum MomentModel {
    Table,
    /// max(table, pointwise bound at this depth) for σ ≥ 5/8.
    Pointwise(PointwiseModel),
}

impl MomentModel {
    pub fn pointwise(depth: usize) -> Result<Self> {
        Ok(MomentModel::Pointwise(PointwiseModel::new(depth)?))
    }

    pub fn name(&self) -> String {
        match self {
            MomentModel::Table => "table".into(),
            MomentModel::Pointwise(p) => format!("pointwise-depth-{}", p.depth()),
        }
    }

    /// 1/m(σ) and the label of the piece that produced it.
    fn inverse_m(&self, sigma: &BigRational) -> Result<(f64, String)> {
        if *sigma >= q(1, 1) {
            // m(σ) → ∞ as σ → 1
            return Ok((0.0, "limit".into()));
        }
        let idx = moment_table().segment_index(sigma);
        let table = m_table(sigma)?;
        let label = format!("seg{}", idx.map_or(0, |i| i + 1));
        match self {
            MomentModel::Table => Ok((ratio_f64(&(q(1, 1) / table)), label)),
            MomentModel::Pointwise(p) => {
                let t = ratio_f64(&table);
                if *sigma < q(5, 8) {
                    return Ok((1.0 / t, label));
                }
                let sf = ratio_f64(sigma);
                if sf >= 1.0 - 1.0 / POINTWISE_GRID as f64 {
                    return Ok((1.0 / t, label));
                }
                match p.interpolated(sf) {
                    Ok(v) if v > t => Ok((1.0 / v, "pointwise".into())),
                    Ok(_) | Err(Error::Bracket(_)) => Ok((1.0 / t, label)),
                    Err(e) => Err(e),
                }
            }
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct HolderTerm {
    pub sigma: f64,
    pub weight: i64,
    pub m: f64,
    pub source: String,
    /// Hölder exponent m/w; must be at least 1.
    pub q: f64,
    pub q_ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct HolderReport {
    #[serde(rename = "C")]
    pub c: f64,
    pub deficit: f64,
    pub terms: Vec<HolderTerm>,
}

fn check_c(c: &BigRational) -> Result<()> {
    if q(4, 1) * c < q(1, 2) || q(7, 1) * c > q(1, 1) {
        return domain(format!("C = {} outside [1/8, 1/7]", ratio_f64(c)));
    }
    Ok(())
}

fn to_rational(c: f64) -> Result<BigRational> {
    BigRational::from_f64(c).ok_or_else(|| Error::Domain(format!("C = {c} is not finite")))
}

/// Σ w/m(jC) - 1 over the four Hölder terms.
pub fn holder_deficit(c: f64, model: &MomentModel) -> Result<HolderReport> {
    let cr = to_rational(c)?;
    check_c(&cr)?;
    let mut deficit = -1.0;
    let mut terms = Vec::with_capacity(4);
    for (j, w) in HOLDER_TERMS {
        let sigma = q(j, 1) * &cr;
        let (inv, source) = model.inverse_m(&sigma)?;
        deficit += w as f64 * inv;
        let m = if inv == 0.0 { f64::INFINITY } else { 1.0 / inv };
        terms.push(HolderTerm { sigma: ratio_f64(&sigma), weight: w, m, source, q: m / w as f64, q_ok: m >= w as f64 });
    }
    Ok(HolderReport { c, deficit, terms })
}

/// (u ± √v)/w with w > 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticSurd {
    pub u: BigInt,
    pub minus: bool,
    pub v: BigInt,
    pub w: BigInt,
}

impl QuadraticSurd {
    pub fn to_real(&self, prec: u32) -> Real {
        let r = Real::from_bigint(&self.v, prec).sqrt();
        let u = Real::from_bigint(&self.u, prec);
        let top = if self.minus { u.sub(&r) } else { u.add(&r) };
        top.div(&Real::from_bigint(&self.w, prec))
    }
}

impl fmt::Display for QuadraticSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = if self.minus { '-' } else { '+' };
        write!(f, "({} {op} sqrt({}))/{}", self.u, self.v, self.w)
    }
}

fn integer_coefficients(p: &Poly) -> Vec<BigInt> {
    let lcm = p.0.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p.0.iter().map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    let sign = if ints.last().is_some_and(Signed::is_negative) { -BigInt::one() } else { BigInt::one() };
    ints.iter().map(|c| c / &g * &sign).collect()
}

/// Roots of a c0 + c1 x + c2 x² in lowest (u ± √v)/w form.
pub fn quadratic_roots(p: &Poly) -> Result<[QuadraticSurd; 2]> {
    let c = integer_coefficients(&p.clone().trimmed());
    if c.len() != 3 {
        return domain(format!("expected a quadratic, got degree {}", c.len() as i64 - 1));
    }
    let disc = &c[1] * &c[1] - BigInt::from(4) * &c[2] * &c[0];
    if disc.is_negative() {
        return domain("quadratic has no real roots");
    }
    let (mut u, mut w, mut v) = (-&c[1], BigInt::from(2) * &c[2], disc);
    let g = u.gcd(&w);
    if let Some(g) = g.to_u64().filter(|g| *g > 1) {
        for &(p, e) in factorize(g)?.factors() {
            let p = BigInt::from(p);
            let p2 = &p * &p;
            for _ in 0..e {
                if (&v % &p2).is_zero() {
                    u /= &p;
                    w /= &p;
                    v /= &p2;
                } else {
                    break;
                }
            }
        }
    }
    Ok([
        QuadraticSurd { u: u.clone(), minus: true, v: v.clone(), w: w.clone() },
        QuadraticSurd { u, minus: false, v, w },
    ])
}

/// Numerator of the table deficit when jC lies in the given segments.
fn deficit_numerator(segments: &[usize; 4]) -> Poly {
    let table = moment_table();
    let parts: Vec<(Poly, Poly, i64)> = HOLDER_TERMS
        .iter()
        .zip(segments)
        .map(|(&(j, w), &i)| {
            let s = &table.segments[i];
            (s.num.scaled(j), s.den.scaled(j), w)
        })
        .collect();
    let all = parts.iter().fold(Poly::from_ints(&[1]), |acc, (n, _, _)| acc.mul(n));
    let mut out = all.scale(&q(-1, 1));
    for (k, (_, den, w)) in parts.iter().enumerate() {
        let mut t = den.scale(&q(*w, 1));
        for (i, (n, _, _)) in parts.iter().enumerate() {
            if i != k {
                t = t.mul(n);
            }
        }
        out = out.add(&t);
    }
    out.trimmed()
}

#[derive(Clone, Debug, Serialize)]
pub struct C4Report {
    pub model: String,
    #[serde(rename = "C")]
    pub c: f64,
    pub closed_form: Option<String>,
    pub closed_form_match: Option<bool>,
    pub contour_threshold: String,
    /// The root is at least the contour threshold.
    pub threshold_ok: bool,
    pub active_segments: Vec<String>,
    #[serde(rename = "deficit_at_C")]
    pub deficit_at_c: f64,
}

/// Root of the Hölder deficit on [1/8, 1/7].
pub fn solve_c4(model: &MomentModel) -> Result<C4Report> {
    let f = |c: f64| holder_deficit(c, model).map(|r| r.deficit);
    let (mut lo, mut hi) = (0.125f64, 1.0 / 7.0);
    let (flo, fhi) = (f(lo)?, f(hi)?);
    if !(flo > 0.0 && fhi < 0.0) {
        return Err(Error::Bracket(format!("deficit does not change sign on [1/8, 1/7]: {flo}, {fhi}")));
    }
    while hi - lo > 1e-15 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let c = 0.5 * (lo + hi);
    // monotone near the root
    let mut prev = f64::INFINITY;
    for i in 0..=20 {
        let t = c - 1e-3 + i as f64 * 1e-4;
        let v = f(t)?;
        if v >= prev {
            return Err(Error::Certification(format!("deficit not decreasing near C = {c}")));
        }
        prev = v;
    }
    let report = holder_deficit(c, model)?;
    let active_segments: Vec<String> = report.terms.iter().map(|t| t.source.clone()).collect();

    let (closed_form, closed_form_match) = match model {
        MomentModel::Table => {
            let segs: Vec<usize> = HOLDER_TERMS
                .iter()
                .map(|&(j, _)| {
                    moment_table()
                        .segment_index_f64(j as f64 * c)
                        .ok_or_else(|| Error::Domain("σ outside the table".into()))
                })
                .collect::<Result<_>>()?;
            let segs: [usize; 4] = segs.try_into().expect("four terms");
            let roots = quadratic_roots(&deficit_numerator(&segs))?;
            let chosen = roots.into_iter().find(|r| {
                let x = r.to_real(128).to_f64();
                (0.125..=1.0 / 7.0).contains(&x)
            });
            match chosen {
                Some(r) => {
                    let x = r.to_real(128).to_f64();
                    (Some(r.to_string()), Some((x - c).abs() < 1e-9))
                }
                None => (None, Some(false)),
            }
        }
        MomentModel::Pointwise(_) => (None, None),
    };

    let spec = ZetaProductSpec::for_r(4)?;
    let threshold = contour_threshold_value(&spec, &q(1, 8), &q(1, 7), MuModel::Refined)?;
    let (contour_threshold, threshold_ok) = match threshold {
        Some(t) => {
            let ok = to_rational(c)? >= t;
            (t.to_string(), ok)
        }
        None => ("1/8".into(), true),
    };
    Ok(C4Report {
        model: model.name(),
        c,
        closed_form,
        closed_form_match,
        contour_threshold,
        threshold_ok,
        active_segments,
        deficit_at_c: report.deficit,
    })
}
