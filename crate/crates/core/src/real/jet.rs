use super::Real;

/// Truncated Taylor expansion `c[0] + c[1] h + ... + c[n-1] h^(n-1)`.
///
/// Coefficients are Taylor coefficients (`f^(k)(s0) / k!`), not raw
/// derivatives. All operations truncate to the shorter operand.
#[derive(Clone, Debug)]
pub struct Jet {
    c: Vec<Real>,
}

impl Jet {
    pub fn new(c: Vec<Real>) -> Self {
        assert!(!c.is_empty(), "a jet needs at least one coefficient");
        Jet { c }
    }

    pub fn constant(v: Real, len: usize) -> Self {
        let prec = v.prec();
        let mut c = vec![Real::zero(prec); len];
        c[0] = v;
        Jet { c }
    }

    pub fn zero(len: usize, prec: u32) -> Self {
        Jet { c: vec![Real::zero(prec); len] }
    }

    /// The identity `s0 + h`.
    pub fn variable(s0: Real, len: usize) -> Self {
        let prec = s0.prec();
        let mut j = Self::constant(s0, len);
        if len > 1 {
            j.c[1] = Real::one(prec);
        }
        j
    }

    /// `v * exp(rate * h)`, i.e. coefficients `v rate^k / k!`.
    pub fn exp_linear(v: &Real, rate: &Real, len: usize) -> Self {
        let mut c = Vec::with_capacity(len);
        let mut cur = v.clone();
        for k in 0..len {
            if k > 0 {
                cur = cur.mul(rate).div_i64(k as i64);
            }
            c.push(cur.clone());
        }
        Jet { c }
    }

    pub fn len(&self) -> usize {
        self.c.len()
    }

    pub fn is_empty(&self) -> bool {
        self.c.is_empty()
    }

    pub fn prec(&self) -> u32 {
        self.c[0].prec()
    }

    pub fn coeffs(&self) -> &[Real] {
        &self.c
    }

    pub fn coeff(&self, k: usize) -> &Real {
        &self.c[k]
    }

    pub fn value(&self) -> &Real {
        &self.c[0]
    }

    /// k-th derivative, `k! * c[k]`.
    pub fn derivative(&self, k: usize) -> Real {
        let mut v = self.c[k].clone();
        for i in 2..=k {
            v = v.mul_i64(i as i64);
        }
        v
    }

    pub fn truncated(&self, len: usize) -> Self {
        Jet { c: self.c[..len.min(self.c.len())].to_vec() }
    }

    pub fn add(&self, other: &Jet) -> Self {
        let n = self.len().min(other.len());
        Jet { c: (0..n).map(|k| self.c[k].add(&other.c[k])).collect() }
    }

    pub fn sub(&self, other: &Jet) -> Self {
        let n = self.len().min(other.len());
        Jet { c: (0..n).map(|k| self.c[k].sub(&other.c[k])).collect() }
    }

    pub fn neg(&self) -> Self {
        Jet { c: self.c.iter().map(Real::neg).collect() }
    }

    pub fn scale(&self, v: &Real) -> Self {
        Jet { c: self.c.iter().map(|x| x.mul(v)).collect() }
    }

    pub fn scale_i64(&self, k: i64) -> Self {
        Jet { c: self.c.iter().map(|x| x.mul_i64(k)).collect() }
    }

    pub fn add_scalar(&self, v: &Real) -> Self {
        let mut c = self.c.clone();
        c[0] = c[0].add(v);
        Jet { c }
    }

    /// Substitute `h -> factor * h`: coefficient k is multiplied by factor^k.
    pub fn rescale(&self, factor: &Real) -> Self {
        let mut p = Real::one(self.prec());
        let mut c = Vec::with_capacity(self.len());
        for (k, x) in self.c.iter().enumerate() {
            if k > 0 {
                p = p.mul(factor);
            }
            c.push(x.mul(&p));
        }
        Jet { c }
    }

    /// Widen every coefficient radius; `errs[k]` applies to coefficient k.
    pub fn add_errors(&self, errs: &[f64]) -> Self {
        Jet {
            c: self
                .c
                .iter()
                .enumerate()
                .map(|(k, x)| x.clone().add_error(errs.get(k).copied().unwrap_or(0.0)))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Jet) -> Self {
        let n = self.len().min(other.len());
        let prec = self.prec().max(other.prec());
        let mut c = vec![Real::zero(prec); n];
        for i in 0..n {
            for j in 0..n - i {
                c[i + j] = c[i + j].add(&self.c[i].mul(&other.c[j]));
            }
        }
        Jet { c }
    }

    pub fn powi(&self, e: u32) -> Self {
        let mut out = Jet::constant(Real::one(self.prec()), self.len());
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    pub fn recip(&self) -> Self {
        let n = self.len();
        let inv0 = self.c[0].recip();
        let mut out: Vec<Real> = Vec::with_capacity(n);
        out.push(inv0.clone());
        for k in 1..n {
            let mut acc = Real::zero(self.prec());
            for j in 1..=k {
                acc = acc.add(&self.c[j].mul(&out[k - j]));
            }
            out.push(acc.mul(&inv0).neg());
        }
        Jet { c: out }
    }

    pub fn div(&self, other: &Jet) -> Self {
        self.mul(&other.recip())
    }

    /// exp of a jet: `f' = g' f`.
    pub fn exp(&self) -> Self {
        let n = self.len();
        let mut f: Vec<Real> = Vec::with_capacity(n);
        f.push(self.c[0].exp());
        for k in 1..n {
            let mut acc = Real::zero(self.prec());
            for j in 1..=k {
                acc = acc.add(&self.c[j].mul(&f[k - j]).mul_i64(j as i64));
            }
            f.push(acc.div_i64(k as i64));
        }
        Jet { c: f }
    }

    /// ln of a jet with positive constant term: `g' = f' / f`.
    pub fn ln(&self) -> Self {
        let n = self.len();
        let inv0 = self.c[0].recip();
        let mut g: Vec<Real> = Vec::with_capacity(n);
        g.push(self.c[0].ln());
        for k in 1..n {
            let mut acc = self.c[k].mul_i64(k as i64);
            for j in 1..k {
                acc = acc.sub(&g[j].mul(&self.c[k - j]).mul_i64(j as i64));
            }
            g.push(acc.mul(&inv0).div_i64(k as i64));
        }
        Jet { c: g }
    }

    /// Largest coefficient radius.
    pub fn max_rad(&self) -> f64 {
        self.c.iter().map(Real::rad).fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 128;

    fn close(a: &Real, b: f64, tol: f64) -> bool {
        (a.to_f64() - b).abs() <= tol
    }

    #[test]
    fn exp_ln_round_trip() {
        let x = Jet::variable(Real::from_frac(3, 2, P), 5);
        let back = x.ln().exp();
        for k in 0..5 {
            assert!(back.coeff(k).overlaps(x.coeff(k)));
        }
    }

    #[test]
    fn recip_of_one_minus_h_is_geometric() {
        let j = Jet::new(vec![Real::one(P), Real::from_i64(-1, P), Real::zero(P), Real::zero(P)]);
        let r = j.recip();
        for k in 0..4 {
            assert!(close(r.coeff(k), 1.0, 1e-30));
        }
    }

    #[test]
    fn exp_linear_matches_exp_of_variable() {
        let rate = Real::from_f64(-0.75, P);
        let a = Jet::exp_linear(&Real::one(P), &rate, 6);
        let b = Jet::new(vec![Real::zero(P), rate.clone(), Real::zero(P), Real::zero(P), Real::zero(P), Real::zero(P)]).exp();
        for k in 0..6 {
            assert!(a.coeff(k).overlaps(b.coeff(k)));
        }
    }

    #[test]
    fn derivative_scales_by_factorial() {
        // x^3 at x = 2: third derivative 6
        let x = Jet::variable(Real::from_i64(2, P), 4);
        let cube = x.powi(3);
        assert!(close(&cube.derivative(3), 6.0, 1e-30));
        assert!(close(&cube.derivative(1), 12.0, 1e-30));
    }
}
