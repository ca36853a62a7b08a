use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::Serialize;

use crate::error::{domain, Error, Result};

pub(crate) fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Seed {
    /// (0, 1)
    Trivial,
    /// Huxley's pair (32/205, 269/410), valid up to ε.
    H2005,
}

impl Seed {
    pub const ALL: [Seed; 2] = [Seed::Trivial, Seed::H2005];

    pub fn pair(self) -> ExponentPair {
        let (k, l, eps) = match self {
            Seed::Trivial => (q(0, 1), q(1, 1), false),
            Seed::H2005 => (q(32, 205), q(269, 410), true),
        };
        ExponentPair { k, l, word: String::new(), seed: self, eps }
    }
}

impl fmt::Display for Seed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Seed::Trivial => "trivial",
            Seed::H2005 => "H2005",
        })
    }
}

impl FromStr for Seed {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "trivial" | "T" => Ok(Seed::Trivial),
            "H2005" | "H" => Ok(Seed::H2005),
            _ => domain(format!("unknown seed '{s}' (expected trivial or H2005)")),
        }
    }
}

/// An exponent pair together with the word that produced it from its seed.
/// The word is applied right to left: "AB" means A(B(seed)).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentPair {
    pub k: BigRational,
    pub l: BigRational,
    pub word: String,
    pub seed: Seed,
    /// True when the pair descends from H2005 and so holds up to ε.
    pub eps: bool,
}

impl ExponentPair {
    /// True when 0 ≤ k ≤ 1/2 ≤ l ≤ 1.
    pub fn is_valid(&self) -> bool {
        in_region(&self.k, &self.l)
    }

    pub fn process_a(&self) -> ExponentPair {
        let (k, l) = map_a(&self.k, &self.l);
        ExponentPair { k, l, word: format!("A{}", self.word), seed: self.seed, eps: self.eps }
    }

    pub fn process_b(&self) -> Result<ExponentPair> {
        if self.l < q(1, 2) {
            return domain(format!("B needs l >= 1/2, got l = {}", self.l));
        }
        let (k, l) = map_b(&self.k, &self.l);
        Ok(ExponentPair { k, l, word: format!("B{}", self.word), seed: self.seed, eps: self.eps })
    }

    pub fn to_json(&self, value: &BigRational) -> serde_json::Value {
        serde_json::json!({
            "value": value.to_string(),
            "k": self.k.to_string(),
            "l": self.l.to_string(),
            "word": self.word,
            "seed": self.seed.to_string(),
            "eps": self.eps,
        })
    }
}

pub(crate) fn in_region(k: &BigRational, l: &BigRational) -> bool {
    let half = q(1, 2);
    !k.is_negative() && *k <= half && half <= *l && *l <= BigRational::one()
}

pub(crate) fn map_a(k: &BigRational, l: &BigRational) -> (BigRational, BigRational) {
    let two = q(2, 1);
    let den = &two * k + &two;
    (k / &den, (k + l + BigRational::one()) / den)
}

pub(crate) fn map_b(k: &BigRational, l: &BigRational) -> (BigRational, BigRational) {
    let half = q(1, 2);
    (l - &half, k + half)
}

/// Apply `word` right to left to the seed.
pub fn from_word(word: &str, seed: Seed) -> Result<ExponentPair> {
    apply_word(word, &seed.pair())
}

/// Apply `word` right to left to an arbitrary starting pair.
pub fn apply_word(word: &str, start: &ExponentPair) -> Result<ExponentPair> {
    let mut p = start.clone();
    for c in word.chars().rev() {
        p = match c {
            'A' => p.process_a(),
            'B' => p.process_b()?,
            other => return domain(format!("word letter '{other}' is not A or B")),
        };
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn chain_from_h2005() {
        let p = from_word("ABA", Seed::H2005).unwrap();
        assert_eq!((p.k.clone(), p.l.clone()), (q(269, 2434), q(1755, 2434)));
        assert!(p.eps);
        assert_eq!(p.word, "ABA");
        let h = from_word("", Seed::H2005).unwrap();
        assert_eq!((h.k, h.l), (q(32, 205), q(269, 410)));
    }

    #[test]
    fn small_cases() {
        let b = from_word("B", Seed::Trivial).unwrap();
        assert_eq!((b.k, b.l), (q(1, 2), q(1, 2)));
        assert!(!b.eps);
        let a = from_word("A", Seed::Trivial).unwrap();
        assert_eq!((a.k, a.l), (q(0, 1), q(1, 1)));
        let (k, l) = map_a(&q(1, 2), &q(1, 2));
        assert_eq!((k, l), (q(1, 6), q(2, 3)));
    }

    #[test]
    fn b_needs_large_l() {
        let bad = ExponentPair { k: q(0, 1), l: q(1, 3), word: String::new(), seed: Seed::Trivial, eps: false };
        assert!(bad.process_b().is_err());
        assert!(from_word("AC", Seed::Trivial).is_err());
    }

    fn all_words(depth: usize) -> Vec<String> {
        let mut out = vec![String::new()];
        let mut layer = vec![String::new()];
        for _ in 0..depth {
            let mut next = Vec::new();
            for w in &layer {
                next.push(format!("A{w}"));
                next.push(format!("B{w}"));
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }

    #[test]
    fn processes_preserve_validity_to_depth_6() {
        for seed in Seed::ALL {
            for w in all_words(6) {
                let p = from_word(&w, seed).unwrap();
                assert!(p.is_valid(), "{w} {seed}");
            }
        }
    }

    proptest! {
        #[test]
        fn b_is_an_involution(kn in 0i64..=50, ln in 50i64..=100) {
            let p = ExponentPair { k: q(kn, 100), l: q(ln, 100), word: String::new(), seed: Seed::Trivial, eps: false };
            let back = p.process_b().unwrap().process_b().unwrap();
            prop_assert_eq!((back.k, back.l), (p.k, p.l));
        }
    }
}
