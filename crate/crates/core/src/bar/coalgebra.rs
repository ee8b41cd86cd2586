//! Deconcatenation, the comodule spanned by a chain, and the
//! non-principality witness on its final layer.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{BarChain, BarWord};
use crate::curve::CurvePoint;
use crate::cycle::{Context, Term};
use crate::divisor::is_principal;
use crate::error::Result;
use crate::formal::Lin;
use crate::linalg::SpanBasis;
use crate::FormalDivisor;

/// `sum c (left (x) right)` over pairs of words.
pub type Coproduct = Lin<(BarWord, BarWord)>;

/// Deconcatenation `psi[a_1|..|a_k] = sum_i [a_1|..|a_i] (x) [a_{i+1}|..|a_k]`.
/// All letters in `H^0` words have bar degree zero, so no Koszul signs occur.
pub fn comultiply(c: &BarChain) -> Coproduct {
    let mut out = Coproduct::new();
    for (w, q) in c {
        for i in 0..=w.len() {
            out.add((w[..i].to_vec(), w[i..].to_vec()), q.clone());
        }
    }
    out
}

/// `(psi (x) id) psi = (id (x) psi) psi`, compared on triples.
pub fn coassociative(c: &BarChain) -> bool {
    let psi = comultiply(c);
    let mut left: Lin<(BarWord, BarWord, BarWord)> = Lin::new();
    let mut right: Lin<(BarWord, BarWord, BarWord)> = Lin::new();
    for ((a, b), q) in &psi {
        for ((a1, a2), q1) in &comultiply(&BarChain::single(a.clone(), q.clone())) {
            left.add((a1.clone(), a2.clone(), b.clone()), q1.clone());
        }
        for ((b1, b2), q2) in &comultiply(&BarChain::single(b.clone(), q.clone())) {
            right.add((a.clone(), b1.clone(), b2.clone()), q2.clone());
        }
    }
    left == right
}

/// Collapsing either factor of `psi(c)` with the augmentation (the
/// coefficient of the empty word) returns `c`.
pub fn counital(c: &BarChain) -> bool {
    let psi = comultiply(c);
    let mut left = BarChain::new();
    let mut right = BarChain::new();
    for ((a, b), q) in &psi {
        if a.is_empty() {
            left.add(b.clone(), q.clone());
        }
        if b.is_empty() {
            right.add(a.clone(), q.clone());
        }
    }
    left == *c && right == *c
}

/// Left factors of `psi(c)` grouped by their right factor.
fn left_factors(c: &BarChain) -> BTreeMap<BarWord, BarChain> {
    let mut groups: BTreeMap<BarWord, BarChain> = BTreeMap::new();
    for ((a, b), q) in &comultiply(c) {
        groups.entry(b.clone()).or_default().add(a.clone(), q.clone());
    }
    groups.retain(|_, v| !v.is_zero());
    groups
}

/// The spanning set `{E, the left factors of psi(E), .., 1}` of the
/// comodule generated by a chain, with the closure check.
#[derive(Debug, Clone)]
pub struct ComoduleSpan {
    pub members: Vec<BarChain>,
    /// Longest word length of each member, the unit counting as zero.
    pub depths: Vec<usize>,
    pub closed: bool,
}

impl ComoduleSpan {
    /// Distinct member depths, deepest first.
    pub fn layers(&self) -> Vec<usize> {
        let s: BTreeSet<usize> = self.depths.iter().copied().collect();
        s.into_iter().rev().collect()
    }
}

pub fn comodule_span(c: &BarChain) -> ComoduleSpan {
    let mut basis = SpanBasis::new();
    let mut members: Vec<BarChain> = Vec::new();
    if basis.insert(c) {
        members.push(c.clone());
    }
    for (right, left) in left_factors(c) {
        if !right.is_empty() && basis.insert(&left) {
            members.push(left);
        }
    }
    let closed = members.iter().all(|m| left_factors(m).values().all(|l| basis.contains(l)));
    let depths = members.iter().map(|m| m.keys().map(Vec::len).max().unwrap_or(0)).collect();
    ComoduleSpan { members, depths, closed }
}

/// The point of a letter that is a single point of `E`.
fn point_of(t: &Term) -> Option<&CurvePoint> {
    (t.cycle.params == 0 && t.cycle.b() == 1 && t.cycle.c() == 0).then(|| &t.cycle.ecoords[0].constant)
}

/// Points `p` such that `psi(c)` has a nonzero term `(..) (x) [p]`.
pub fn middle_layer_points(c: &BarChain) -> Vec<CurvePoint> {
    let mut out = BTreeSet::new();
    for (right, _) in left_factors(c) {
        if let [t] = right.as_slice() {
            if let Some(p) = point_of(t) {
                out.insert(p.clone());
            }
        }
    }
    out.into_iter().collect()
}

/// `(b) - (-b)` is not principal because `2b != O`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessCertificate {
    pub point: CurvePoint,
    pub double: CurvePoint,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub nontrivial: bool,
    pub final_layer_words: usize,
    pub certificates: Vec<WitnessCertificate>,
}

/// Extracts the final layer (words made only of points) and certifies the
/// divisors `(b) - (-b)` that are not principal, for `b = +-b_j`.
pub fn nontriviality_witness(ctx: &Context, c: &BarChain) -> Result<WitnessReport> {
    let curve = ctx.curve();
    let mut points = BTreeSet::new();
    let mut final_words = 0;
    for (w, q) in c {
        if q.is_zero() || w.is_empty() {
            continue;
        }
        let pts: Option<Vec<&CurvePoint>> = w.iter().map(point_of).collect();
        if let Some(pts) = pts {
            final_words += 1;
            for p in pts {
                points.insert(curve.neg(p));
                points.insert(p.clone());
            }
        }
    }
    let mut certificates = Vec::new();
    for p in points {
        let d = FormalDivisor::from_terms([(p.clone(), crate::Q::one()), (curve.neg(&p), -crate::Q::one())]);
        if !is_principal(curve, &d)? {
            certificates.push(WitnessCertificate { double: curve.scalar_mul(2, &p)?, point: p });
        }
    }
    Ok(WitnessReport { nontrivial: !certificates.is_empty(), final_layer_words: final_words, certificates })
}
