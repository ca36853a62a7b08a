use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::table::q;
use crate::error::{domain, Error, Result};
use crate::series::ZetaProductSpec;

/// μ(1/2) ≤ 32/205.
pub fn mu_half() -> BigRational {
    q(32, 205)
}

/// μ(3/5) ≤ 1409/12170.
pub fn mu_three_fifths() -> BigRational {
    q(1409, 12170)
}

/// Which interpolation of μ between its anchors to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum MuModel {
    /// 2μ(1/2)(1-σ) on [1/2, 1].
    Convexity,
    /// The line through μ(1/2) and μ(3/5) on [1/2, 3/5], then 5μ(3/5)(1-σ)/2.
    Refined,
}

impl MuModel {
    fn breakpoints(self) -> Vec<BigRational> {
        match self {
            MuModel::Convexity => vec![q(1, 2), q(1, 1)],
            MuModel::Refined => vec![q(1, 2), q(3, 5), q(1, 1)],
        }
    }
}

/// Upper bound μ̂(σ) for the order of ζ on the line σ.
pub fn mu_hat(sigma: &BigRational, model: MuModel) -> Result<BigRational> {
    if sigma.is_negative() {
        return domain(format!("μ̂ needs σ ≥ 0, got {sigma}"));
    }
    let m12 = mu_half();
    let one = q(1, 1);
    if *sigma >= one {
        return Ok(BigRational::zero());
    }
    if *sigma <= q(1, 2) {
        return Ok(q(1, 2) - (&one - q(2, 1) * &m12) * sigma);
    }
    Ok(match model {
        MuModel::Convexity => q(2, 1) * m12 * (one - sigma),
        MuModel::Refined => {
            let m35 = mu_three_fifths();
            if *sigma <= q(3, 5) {
                q(10, 1) * (&m35 - &m12) * sigma + (q(6, 1) * &m12 - q(5, 1) * &m35)
            } else {
                q(5, 2) * m35 * (one - sigma)
            }
        }
    })
}

/// α(σ) = Σ e_j μ̂(a_j σ), so that Z(σ + it) ≪ |t|^{α(σ)+ε}.
pub fn alpha_exponent(spec: &ZetaProductSpec, sigma: &BigRational, model: MuModel) -> Result<BigRational> {
    if !sigma.is_positive() {
        return domain(format!("α needs σ > 0, got {sigma}"));
    }
    let mut total = BigRational::zero();
    for &(a, e) in spec.factors() {
        let arg = BigRational::from_integer(a.into()) * sigma;
        total += mu_hat(&arg, model)? * BigRational::from_integer(e.into());
    }
    Ok(total)
}

/// α(σ) = slope·σ + intercept on [lo, hi].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffinePiece {
    pub lo: BigRational,
    pub hi: BigRational,
    pub slope: BigRational,
    pub intercept: BigRational,
}

impl AffinePiece {
    pub fn at(&self, s: &BigRational) -> BigRational {
        &self.slope * s + &self.intercept
    }
}

/// Affine pieces of α on [lo, hi], split where some a_j σ crosses a
/// breakpoint of the μ̂ model.
pub fn alpha_pieces(spec: &ZetaProductSpec, lo: &BigRational, hi: &BigRational, model: MuModel) -> Result<Vec<AffinePiece>> {
    if lo >= hi {
        return domain(format!("empty interval [{lo}, {hi}]"));
    }
    let mut cuts = vec![lo.clone(), hi.clone()];
    for &(a, _) in spec.factors() {
        for b in model.breakpoints() {
            let s = b / BigRational::from_integer(a.into());
            if &s > lo && &s < hi {
                cuts.push(s);
            }
        }
    }
    cuts.sort();
    cuts.dedup();
    cuts.windows(2)
        .map(|w| {
            let (a0, a1) = (alpha_exponent(spec, &w[0], model)?, alpha_exponent(spec, &w[1], model)?);
            let slope = (&a1 - &a0) / (&w[1] - &w[0]);
            let intercept = &a0 - &slope * &w[0];
            Ok(AffinePiece { lo: w[0].clone(), hi: w[1].clone(), slope, intercept })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum ContourThreshold {
    /// Least admissible C.
    At(String),
    /// Every C down to the floor is admissible.
    Unconstrained { floor: String },
}

/// Least C ≥ floor with sup_{σ ∈ [C, σ_hi]} (α(σ) + σ - 1) ≤ C, for α
/// given by affine pieces covering [floor, σ_hi] in increasing order.
/// Requires α + σ - 1 nonincreasing, so the condition reduces to α(C) ≤ 1.
pub fn threshold_from_pieces(pieces: &[AffinePiece]) -> Result<(Option<BigRational>, BigRational)> {
    if pieces.is_empty() {
        return domain("no pieces");
    }
    let one = q(1, 1);
    for p in pieces {
        if p.slope > -one.clone() {
            return Err(Error::Domain(format!(
                "α + σ - 1 increases on [{}, {}] (slope of α is {}); threshold refused",
                p.lo, p.hi, p.slope
            )));
        }
    }
    let floor = pieces[0].lo.clone();
    let top = pieces.last().expect("nonempty");
    if top.at(&top.hi) > one {
        return Err(Error::Domain(format!("α({}) > 1: no admissible C below σ_hi", top.hi)));
    }
    for p in pieces.iter().rev() {
        if p.at(&p.lo) > one {
            // α(C) = 1 inside this piece
            return Ok((Some((&one - &p.intercept) / &p.slope), floor));
        }
    }
    Ok((None, floor))
}

pub fn contour_threshold(spec: &ZetaProductSpec, floor: &BigRational, sigma_hi: &BigRational, model: MuModel) -> Result<ContourThreshold> {
    let pieces = alpha_pieces(spec, floor, sigma_hi, model)?;
    Ok(match threshold_from_pieces(&pieces)? {
        (Some(c), _) => ContourThreshold::At(c.to_string()),
        (None, f) => ContourThreshold::Unconstrained { floor: f.to_string() },
    })
}

/// The exact threshold value, when one exists.
pub fn contour_threshold_value(spec: &ZetaProductSpec, floor: &BigRational, sigma_hi: &BigRational, model: MuModel) -> Result<Option<BigRational>> {
    let pieces = alpha_pieces(spec, floor, sigma_hi, model)?;
    Ok(threshold_from_pieces(&pieces)?.0)
}
