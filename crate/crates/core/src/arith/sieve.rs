use num_bigint::BigUint;
use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;

use super::functions::FunctionId;
use crate::error::{domain, Error, Result};

/// Sieve tuning. Results never depend on these values.
#[derive(Clone, Debug)]
pub struct SieveConfig {
    /// Largest number of entries held in one segment.
    pub memory_cap: usize,
    /// Segment length used in segmented mode.
    pub segment_len: usize,
    /// When false, the whole range is one segment and exceeding
    /// `memory_cap` is an error.
    pub segmented: bool,
}

impl Default for SieveConfig {
    fn default() -> Self {
        SieveConfig { memory_cap: 1 << 27, segment_len: 1 << 17, segmented: true }
    }
}

/// Exact partial sums S(x') of a nonnegative arithmetic function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SummatoryTable {
    pub function: FunctionId,
    pub checkpoints: Vec<(u64, BigUint)>,
}

#[derive(Serialize)]
struct Row {
    x: String,
    value: String,
}

impl SummatoryTable {
    pub fn value_at(&self, x: u64) -> Option<&BigUint> {
        self.checkpoints.iter().find(|(y, _)| *y == x).map(|(_, v)| v)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,value\n");
        for (x, v) in &self.checkpoints {
            out.push_str(&format!("{x},{v}\n"));
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<Row> = self
            .checkpoints
            .iter()
            .map(|(x, v)| Row { x: x.to_string(), value: v.to_string() })
            .collect();
        serde_json::json!({ "function": self.function.to_string(), "checkpoints": rows })
    }
}

/// Primes up to `n` by the sieve of Eratosthenes.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut comp = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !comp[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                comp[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Fully factors every integer of a segment with the base primes and folds
/// the local values into `val`.
struct Local<'a> {
    id: &'a FunctionId,
    table: Vec<u64>,
}

impl Local<'_> {
    fn value(&self, p: u64, a: u32) -> u64 {
        match self.id {
            FunctionId::Carmichael => {
                let phi = p.pow(a - 1) * (p - 1);
                if p == 2 && a > 2 {
                    phi / 2
                } else {
                    phi
                }
            }
            _ => self.table[a as usize],
        }
    }

    fn combine(&self, acc: u64, v: u64) -> u64 {
        match self.id {
            FunctionId::Carmichael => acc.lcm(&v),
            _ => acc * v,
        }
    }
}

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

fn segment(local: &Local, primes: &[u64], lo: u64, hi: u64) -> Vec<u64> {
    let len = (hi - lo) as usize;
    let mut rem: Vec<u64> = (lo..hi).collect();
    let mut val = vec![1u64; len];
    let limit = isqrt(hi - 1);
    for &p in primes {
        if p > limit {
            break;
        }
        let start = lo.div_ceil(p) * p;
        let mut m = start;
        while m < hi {
            let i = (m - lo) as usize;
            let mut a = 0u32;
            while rem[i].is_multiple_of(p) {
                rem[i] /= p;
                a += 1;
            }
            val[i] = local.combine(val[i], local.value(p, a));
            m += p;
        }
    }
    for i in 0..len {
        if rem[i] > 1 {
            val[i] = local.combine(val[i], local.value(rem[i], 1));
        }
    }
    val
}

fn local_for(id: &FunctionId) -> Result<Local<'_>> {
    id.validate()?;
    let table = if id.is_exponential() { id.local_table(64)? } else { Vec::new() };
    Ok(Local { id, table })
}

fn segments(lo: u64, hi: u64, cfg: &SieveConfig) -> Result<Vec<(u64, u64)>> {
    let total = hi - lo;
    if !cfg.segmented {
        if total > cfg.memory_cap as u64 {
            return Err(Error::Capacity(format!(
                "unsegmented sieve needs {total} entries, cap is {}",
                cfg.memory_cap
            )));
        }
        return Ok(vec![(lo, hi)]);
    }
    let step = cfg.segment_len.min(cfg.memory_cap).max(1) as u64;
    let mut out = Vec::new();
    let mut a = lo;
    while a < hi {
        let b = (a + step).min(hi);
        out.push((a, b));
        a = b;
    }
    Ok(out)
}

/// Values f(n) for `lo <= n < hi`, `lo >= 1`.
pub fn sieve_values(id: &FunctionId, lo: u64, hi: u64, cfg: &SieveConfig) -> Result<Vec<u64>> {
    if lo == 0 {
        return domain("sieve range must start at 1 or above");
    }
    if hi <= lo {
        return Ok(Vec::new());
    }
    let local = local_for(id)?;
    let primes = primes_up_to(isqrt(hi - 1));
    let parts: Vec<Vec<u64>> = segments(lo, hi, cfg)?
        .into_par_iter()
        .map(|(a, b)| segment(&local, &primes, a, b))
        .collect();
    Ok(parts.concat())
}

/// Exact S(x') = Σ_{n ≤ x'} f(n) at each checkpoint. An empty checkpoint
/// list means just `x`.
pub fn summatory(id: &FunctionId, x: u64, checkpoints: &[u64], cfg: &SieveConfig) -> Result<SummatoryTable> {
    if x == 0 {
        return domain("summatory needs x >= 1");
    }
    let mut cps: Vec<u64> = if checkpoints.is_empty() { vec![x] } else { checkpoints.to_vec() };
    cps.sort_unstable();
    cps.dedup();
    if cps[0] == 0 {
        return domain("checkpoints must be >= 1");
    }
    if *cps.last().unwrap() > x {
        return domain(format!("checkpoint {} exceeds x = {x}", cps.last().unwrap()));
    }
    let local = local_for(id)?;
    let primes = primes_up_to(isqrt(x));
    let segs = segments(1, x + 1, cfg)?;
    // per segment: its total and the partial sums at the checkpoints inside it
    let partials: Vec<(u128, Vec<(u64, u128)>)> = segs
        .into_par_iter()
        .map(|(a, b)| {
            let vals = segment(&local, &primes, a, b);
            let first = cps.partition_point(|&c| c < a);
            let mut inner = Vec::new();
            let mut acc = 0u128;
            let mut ci = first;
            for (i, v) in vals.iter().enumerate() {
                acc += *v as u128;
                let n = a + i as u64;
                while ci < cps.len() && cps[ci] == n {
                    inner.push((n, acc));
                    ci += 1;
                }
            }
            (acc, inner)
        })
        .collect();
    let mut base = BigUint::default();
    let mut out = Vec::with_capacity(cps.len());
    for (total, inner) in partials {
        for (n, part) in inner {
            out.push((n, &base + BigUint::from(part)));
        }
        base += BigUint::from(total);
    }
    Ok(SummatoryTable { function: id.clone(), checkpoints: out })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::factorize;

    fn brute(id: &FunctionId, x: u64) -> BigUint {
        (1..=x).map(|n| BigUint::from(id.eval(&factorize(n).unwrap()).unwrap())).sum()
    }

    #[test]
    fn small_sums() {
        let cfg = SieveConfig::default();
        let t = summatory(&FunctionId::ExpCarmichael(1), 1, &[], &cfg).unwrap();
        assert_eq!(t.checkpoints, vec![(1, BigUint::from(1u32))]);
        // 1 + λ(2) + λ(3) + λ(2) over n = 1, 4, 8, 9
        let t = summatory(&FunctionId::ExpCarmichael(2), 10, &[], &cfg).unwrap();
        assert_eq!(t.value_at(10), Some(&BigUint::from(5u32)));
        assert_eq!(brute(&FunctionId::ExpCarmichael(2), 10), BigUint::from(5u32));
    }

    #[test]
    fn segment_count_does_not_matter() {
        let id = FunctionId::ExpCarmichael(1);
        let cps = [1, 2, 100, 1023, 1024, 1025, 4999, 5000];
        let a = summatory(&id, 5000, &cps, &SieveConfig { segment_len: 7, ..Default::default() }).unwrap();
        let b = summatory(&id, 5000, &cps, &SieveConfig { segmented: false, ..Default::default() }).unwrap();
        assert_eq!(a, b);
        for (x, v) in &a.checkpoints {
            assert_eq!(*v, brute(&id, *x));
        }
    }

    #[test]
    fn tau_sum_matches_per_n() {
        let id = FunctionId::Tau(vec![1, 3, 5, 5]);
        let t = summatory(&id, 10_000, &[], &SieveConfig::default()).unwrap();
        assert_eq!(t.value_at(10_000).unwrap(), &brute(&id, 10_000));
    }

    #[test]
    fn carmichael_values_match() {
        let id = FunctionId::Carmichael;
        let v = sieve_values(&id, 1, 3000, &SieveConfig { segment_len: 100, ..Default::default() }).unwrap();
        for (i, x) in v.iter().enumerate() {
            assert_eq!(*x, id.eval_u64(i as u64 + 1).unwrap());
        }
    }

    #[test]
    fn capacity_error_when_unsegmented() {
        let cfg = SieveConfig { memory_cap: 100, segmented: false, ..Default::default() };
        assert!(matches!(
            summatory(&FunctionId::ExpTotient, 1000, &[], &cfg),
            Err(Error::Capacity(_))
        ));
    }

    #[test]
    fn checkpoint_validation() {
        let cfg = SieveConfig::default();
        assert!(summatory(&FunctionId::ExpTotient, 10, &[11], &cfg).is_err());
        assert!(summatory(&FunctionId::ExpTotient, 0, &[], &cfg).is_err());
    }

    #[test]
    fn csv_and_json() {
        let t = summatory(&FunctionId::ExpCarmichael(2), 10, &[1, 10], &SieveConfig::default()).unwrap();
        assert_eq!(t.to_csv(), "x,value\n1,1\n10,5\n");
        assert_eq!(t.to_json()["checkpoints"][1]["value"], "5");
    }
}
