use std::cmp::Ordering;

use num_rational::BigRational;
use num_traits::Signed;
use rayon::prelude::*;

use super::pair::{apply_word, in_region, map_a, map_b, q, ExponentPair, Seed};
use crate::error::{domain, Result};

type Point = (BigRational, BigRational);

/// (a k + b l + c) / (d k + e l + f).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FractionalObjective {
    pub a: BigRational,
    pub b: BigRational,
    pub c: BigRational,
    pub d: BigRational,
    pub e: BigRational,
    pub f: BigRational,
}

impl FractionalObjective {
    /// Rejects objectives whose denominator is not positive on the region
    /// 0 ≤ k ≤ 1/2 ≤ l ≤ 1 (checked at its corners).
    pub fn new(coeffs: [BigRational; 6]) -> Result<Self> {
        let [a, b, c, d, e, f] = coeffs;
        let obj = FractionalObjective { a, b, c, d, e, f };
        for (k, l) in region_corners() {
            if !obj.denominator(&k, &l).is_positive() {
                return domain(format!("objective denominator is not positive at ({k}, {l})"));
            }
        }
        Ok(obj)
    }

    pub fn from_ints(c: [i64; 6]) -> Result<Self> {
        Self::new(c.map(|v| q(v, 1)))
    }

    fn denominator(&self, k: &BigRational, l: &BigRational) -> BigRational {
        &self.d * k + &self.e * l + &self.f
    }

    pub fn eval(&self, k: &BigRational, l: &BigRational) -> BigRational {
        (&self.a * k + &self.b * l + &self.c) / self.denominator(k, l)
    }
}

/// u k + v l + w ≥ 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearConstraint {
    pub u: BigRational,
    pub v: BigRational,
    pub w: BigRational,
}

impl LinearConstraint {
    pub fn new(u: BigRational, v: BigRational, w: BigRational) -> Self {
        LinearConstraint { u, v, w }
    }

    fn value(&self, p: &Point) -> BigRational {
        &self.u * &p.0 + &self.v * &p.1 + &self.w
    }

    pub fn holds(&self, k: &BigRational, l: &BigRational) -> bool {
        !self.value(&(k.clone(), l.clone())).is_negative()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Optimum {
    pub value: BigRational,
    pub pair: ExponentPair,
}

impl Optimum {
    pub fn to_json(&self) -> serde_json::Value {
        self.pair.to_json(&self.value)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(Optimum),
    /// No reachable pair satisfies the constraints; the bound is the
    /// minimum over the whole constrained region, if that is nonempty.
    Infeasible { relaxation_bound: Option<BigRational> },
}

impl SearchOutcome {
    pub fn optimum(&self) -> Option<&Optimum> {
        match self {
            SearchOutcome::Found(o) => Some(o),
            SearchOutcome::Infeasible { .. } => None,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            SearchOutcome::Found(o) => o.to_json(),
            SearchOutcome::Infeasible { relaxation_bound } => serde_json::json!({
                "infeasible": true,
                "relaxation_bound": relaxation_bound.as_ref().map(|b| b.to_string()),
            }),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SearchOptions {
    /// Maximal word length.
    pub depth: usize,
    pub seeds: Vec<Seed>,
    /// Branch and bound when true, plain enumeration of every word otherwise.
    pub prune: bool,
}

impl SearchOptions {
    pub fn new(depth: usize) -> Self {
        SearchOptions { depth, seeds: Seed::ALL.to_vec(), prune: true }
    }
}

fn region_corners() -> Vec<Point> {
    vec![(q(0, 1), q(1, 2)), (q(1, 2), q(1, 2)), (q(1, 2), q(1, 1)), (q(0, 1), q(1, 1))]
}

/// Sutherland–Hodgman clip of a convex polygon against one half-plane.
fn clip(poly: &[Point], c: &LinearConstraint) -> Vec<Point> {
    let mut out = Vec::new();
    for i in 0..poly.len() {
        let p = &poly[i];
        let n = &poly[(i + 1) % poly.len()];
        let (vp, vn) = (c.value(p), c.value(n));
        let (inp, inn) = (!vp.is_negative(), !vn.is_negative());
        if inp {
            out.push(p.clone());
        }
        if inp != inn {
            let t = &vp / (&vp - &vn);
            out.push((&p.0 + &t * (&n.0 - &p.0), &p.1 + &t * (&n.1 - &p.1)));
        }
    }
    out
}

fn lower_bound(poly: &[Point], obj: &FractionalObjective, cons: &[LinearConstraint]) -> Option<BigRational> {
    let mut poly = poly.to_vec();
    for c in cons {
        poly = clip(&poly, c);
        if poly.is_empty() {
            return None;
        }
    }
    poly.iter().map(|(k, l)| obj.eval(k, l)).min()
}

fn better(a: &Optimum, b: &Optimum) -> bool {
    key_cmp(a, b) == Ordering::Less
}

fn key_cmp(a: &Optimum, b: &Optimum) -> Ordering {
    a.value
        .cmp(&b.value)
        .then(a.pair.word.len().cmp(&b.pair.word.len()))
        .then(a.pair.word.cmp(&b.pair.word))
        .then(a.pair.seed.cmp(&b.pair.seed))
}

/// All words with a fixed outer part U. Every descendant U(X(seed)) lies in
/// U(region), whose corners are the images of the region's corners.
#[derive(Clone)]
struct Node {
    word: String,
    corners: Vec<Point>,
    pairs: Vec<ExponentPair>,
}

fn apply_point(word: &str, p: &Point) -> Point {
    word.chars().rev().fold(p.clone(), |(k, l), c| if c == 'A' { map_a(&k, &l) } else { map_b(&k, &l) })
}

impl Node {
    fn root(seeds: &[Seed]) -> Node {
        Node { word: String::new(), corners: region_corners(), pairs: seeds.iter().map(|s| s.pair()).collect() }
    }

    /// Appends `letter` on the inner side of the word.
    fn child(&self, letter: char) -> Node {
        let mut word = self.word.clone();
        word.push(letter);
        let corners = region_corners().iter().map(|p| apply_point(&word, p)).collect();
        let pairs = self
            .pairs
            .iter()
            .map(|p| apply_word(&word, &p.seed.pair()).expect("valid pairs have l >= 1/2"))
            .collect();
        Node { word, corners, pairs }
    }
}

struct Problem<'a> {
    obj: &'a FractionalObjective,
    cons: &'a [LinearConstraint],
    prune: bool,
}

impl Problem<'_> {
    fn offer(&self, node: &Node, best: &mut Option<Optimum>) {
        for p in &node.pairs {
            if self.cons.iter().all(|c| c.holds(&p.k, &p.l)) {
                let cand = Optimum { value: self.obj.eval(&p.k, &p.l), pair: p.clone() };
                if best.as_ref().is_none_or(|b| better(&cand, b)) {
                    *best = Some(cand);
                }
            }
        }
    }

    fn letters(&self, node: &Node) -> &'static [char] {
        // BB is the identity, so such words never beat their reductions
        if self.prune && node.word.ends_with('B') {
            &['A']
        } else {
            &['A', 'B']
        }
    }

    fn explore(&self, node: &Node, left: usize, best: &mut Option<Optimum>) {
        if self.prune {
            match lower_bound(&node.corners, self.obj, self.cons) {
                None => return,
                Some(lb) => {
                    if best.as_ref().is_some_and(|b| lb > b.value) {
                        return;
                    }
                }
            }
        }
        self.offer(node, best);
        if left == 0 {
            return;
        }
        for &c in self.letters(node) {
            self.explore(&node.child(c), left - 1, best);
        }
    }
}

/// Minimum of the objective over all pairs W(seed) with |W| ≤ depth that
/// satisfy every constraint. Ties go to the shorter word, then the
/// lexicographically smaller word, then the seed order.
pub fn optimize_fractional(obj: &FractionalObjective, cons: &[LinearConstraint], opts: &SearchOptions) -> Result<SearchOutcome> {
    if opts.seeds.is_empty() {
        return domain("at least one seed is required");
    }
    let prob = Problem { obj, cons, prune: opts.prune };
    let root = Node::root(&opts.seeds);
    for p in &root.pairs {
        debug_assert!(in_region(&p.k, &p.l));
    }
    // expand a few levels sequentially, then search the subtrees in parallel
    let split = opts.depth.min(3);
    let mut best = None;
    let mut frontier = vec![root];
    for _ in 0..split {
        let mut next = Vec::new();
        for n in &frontier {
            prob.offer(n, &mut best);
            for &c in prob.letters(n) {
                next.push(n.child(c));
            }
        }
        frontier = next;
    }
    let left = opts.depth - split;
    let seed_best = best.clone();
    let results: Vec<Option<Optimum>> = frontier
        .par_iter()
        .map(|n| {
            let mut local = seed_best.clone();
            prob.explore(n, left, &mut local);
            local
        })
        .collect();
    for r in results.into_iter().flatten() {
        if best.as_ref().is_none_or(|b| better(&r, b)) {
            best = Some(r);
        }
    }
    Ok(match best {
        Some(o) => SearchOutcome::Found(o),
        None => SearchOutcome::Infeasible { relaxation_bound: lower_bound(&region_corners(), obj, cons) },
    })
}

/// Every pair W(seed) with |W| ≤ depth, skipping words that contain BB.
pub fn pairs_to_depth(depth: usize, seeds: &[Seed]) -> Vec<ExponentPair> {
    let mut out: Vec<ExponentPair> = seeds.iter().map(|s| s.pair()).collect();
    let mut layer = out.clone();
    for _ in 0..depth {
        let mut next = Vec::with_capacity(layer.len() * 2);
        for p in &layer {
            next.push(p.process_a());
            if !p.word.starts_with('B') {
                next.push(p.process_b().expect("valid pairs have l >= 1/2"));
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// μ(σ) ≤ (k + l - σ)/2 over pairs with l - k ≥ σ reachable within `depth`.
pub fn mu_bound(sigma: &BigRational, depth: usize) -> Result<SearchOutcome> {
    mu_bound_with(sigma, &SearchOptions::new(depth))
}

pub fn mu_bound_with(sigma: &BigRational, opts: &SearchOptions) -> Result<SearchOutcome> {
    if *sigma < q(1, 2) || *sigma > q(1, 1) {
        return domain(format!("σ = {sigma} outside [1/2, 1]"));
    }
    let one = q(1, 1);
    let obj = FractionalObjective::new([one.clone(), one.clone(), -sigma.clone(), q(0, 1), q(0, 1), q(2, 1)])?;
    let cons = [LinearConstraint::new(-one.clone(), one, -sigma.clone())];
    optimize_fractional(&obj, &cons, opts)
}

/// The minimal value, or `None` if no admissible pair is reachable.
pub fn mu_bound_value(sigma: &BigRational, depth: usize) -> Result<Option<BigRational>> {
    Ok(mu_bound(sigma, depth)?.optimum().map(|o| o.value.clone()))
}
