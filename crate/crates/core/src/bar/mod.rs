//! Bar-complex words over decorated cycles: the total differential, the
//! chain `E(g_1..g_n)`, deconcatenation and the comodule it spans.

mod chain;
mod coalgebra;

use std::collections::HashMap;

use num_traits::{One, Zero};

pub use chain::{
    build_motive_chain, complete_to_cocycle, discharge_mu_nu, factorizations, kill_lifts, grading_coherence, is_mu_nu_letter, isotypic_chain, verify_cocycle, ChainLayer,
    CocycleCheck, Discharge, GradingCheck, MotiveChain,
};
pub use coalgebra::{
    coassociative, comodule_span, comultiply, counital, middle_layer_points, nontriviality_witness, Coproduct,
    ComoduleSpan, WitnessCertificate, WitnessReport,
};

use crate::cycle::{boundary_term, canonicalize_term, gl2_lower, gl2_raise, product_terms, Context, CycleSum, Term};
use crate::error::Result;
use crate::formal::Lin;
use crate::Q;

/// A tensor word `[a_1 | .. | a_k]` of canonical letters.
pub type BarWord = Vec<Term>;

/// A rational combination of bar words.
pub type BarChain = Lin<BarWord>;

/// `sum (|a_i| - 1)`; elements of `H^0` live in bar degree zero.
pub fn bar_degree(w: &[Term]) -> i64 {
    w.iter().map(|t| t.degree() - 1).sum()
}

fn signed(c: &Q, s: i64) -> Q {
    if s % 2 == 0 {
        c.clone()
    } else {
        -c.clone()
    }
}

/// Adds `coeff [prefix | s_1 | .. | s_m]`, expanded multilinearly.
fn expand_into(out: &mut BarChain, prefix: &mut BarWord, slots: &[&CycleSum], coeff: &Q) {
    let Some((first, rest)) = slots.split_first() else {
        out.add(prefix.clone(), coeff.clone());
        return;
    };
    for (t, c) in first.iter() {
        prefix.push(t.clone());
        expand_into(out, prefix, rest, &(coeff * c));
        prefix.pop();
    }
}

/// The chain of one word whose slots are sums of letters.
pub fn word_chain(slots: &[CycleSum]) -> BarChain {
    let mut out = BarChain::new();
    let refs: Vec<&CycleSum> = slots.iter().collect();
    expand_into(&mut out, &mut Vec::new(), &refs, &Q::one());
    out
}

/// Canonicalizes every letter, dropping words with a vanishing letter.
pub fn canonical_chain(ctx: &Context, c: &BarChain) -> Result<BarChain> {
    let mut out = BarChain::new();
    'words: for (w, coeff) in c {
        let mut word = Vec::with_capacity(w.len());
        let mut sign = 0;
        for t in w {
            let Some((k, s)) = canonicalize_term(ctx, t)? else { continue 'words };
            if s < 0 {
                sign += 1;
            }
            word.push(k);
        }
        out.add(word, signed(coeff, sign));
    }
    Ok(out)
}

/// Caches letter boundaries and products across differential evaluations.
#[derive(Default)]
pub struct DifferentialCache {
    boundaries: HashMap<Term, CycleSum>,
    products: HashMap<(Term, Term), Option<(Term, i64)>>,
}

impl DifferentialCache {
    pub fn new() -> DifferentialCache {
        DifferentialCache::default()
    }

    fn boundary(&mut self, ctx: &Context, t: &Term) -> Result<&CycleSum> {
        if !self.boundaries.contains_key(t) {
            let d = boundary_term(ctx, t)?;
            self.boundaries.insert(t.clone(), d);
        }
        Ok(&self.boundaries[t])
    }

    fn product(&mut self, ctx: &Context, a: &Term, b: &Term) -> Result<Option<(Term, i64)>> {
        let key = (a.clone(), b.clone());
        if let Some(hit) = self.products.get(&key) {
            return Ok(hit.clone());
        }
        let (t, s) = product_terms(a, b);
        let r = canonicalize_term(ctx, &t)?.map(|(k, s2)| (k, s * s2));
        self.products.insert(key, r.clone());
        Ok(r)
    }
}

/// The total differential
/// `D[a_1|..|a_k] = sum_i (-1)^{e_i + 1} [..|d a_i|..]
///                + sum_i (-1)^{e_i + |a_i| - 1} [..|a_i a_{i+1}|..]`
/// with `e_i = sum_{j<i} (|a_j| - 1)`. Words must have canonical letters.
pub fn bar_differential(ctx: &Context, c: &BarChain) -> Result<BarChain> {
    bar_differential_cached(ctx, c, &mut DifferentialCache::new())
}

pub fn bar_differential_cached(ctx: &Context, c: &BarChain, cache: &mut DifferentialCache) -> Result<BarChain> {
    let mut out = BarChain::new();
    for (w, coeff) in c {
        if coeff.is_zero() {
            continue;
        }
        let mut e = 0i64;
        for i in 0..w.len() {
            let d = cache.boundary(ctx, &w[i])?.clone();
            let mut prefix = w[..i].to_vec();
            let mut slots: Vec<CycleSum> = vec![d];
            slots.extend(w[i + 1..].iter().map(|t| CycleSum::single(t.clone(), Q::one())));
            let refs: Vec<&CycleSum> = slots.iter().collect();
            expand_into(&mut out, &mut prefix, &refs, &signed(coeff, e + 1));
            if i + 1 < w.len() {
                if let Some((p, s)) = cache.product(ctx, &w[i], &w[i + 1])? {
                    let mut word = w[..i].to_vec();
                    word.push(p);
                    word.extend_from_slice(&w[i + 2..]);
                    let sign = e + w[i].degree() - 1 + if s < 0 { 1 } else { 0 };
                    out.add(word, signed(coeff, sign));
                }
            }
            e += w[i].degree() - 1;
        }
    }
    Ok(out)
}

fn letter_op(ctx: &Context, c: &BarChain, raise: bool) -> Result<BarChain> {
    let mut out = BarChain::new();
    for (w, coeff) in c {
        for i in 0..w.len() {
            let single = CycleSum::single(w[i].clone(), Q::one());
            let moved = if raise { gl2_raise(ctx, &single)? } else { gl2_lower(ctx, &single)? };
            let mut slots: Vec<CycleSum> = w.iter().map(|t| CycleSum::single(t.clone(), Q::one())).collect();
            slots[i] = moved;
            let refs: Vec<&CycleSum> = slots.iter().collect();
            expand_into(&mut out, &mut Vec::new(), &refs, coeff);
        }
    }
    Ok(out)
}

/// `gl2` raising operator acting as a derivation over the letters.
pub fn chain_raise(ctx: &Context, c: &BarChain) -> Result<BarChain> {
    letter_op(ctx, c, true)
}

/// `gl2` lowering operator acting as a derivation over the letters.
pub fn chain_lower(ctx: &Context, c: &BarChain) -> Result<BarChain> {
    letter_op(ctx, c, false)
}

/// The weight `#e1 - #e2` summed over all letters.
pub fn word_weight(w: &[Term]) -> i64 {
    w.iter()
        .filter_map(|t| t.word.as_ref())
        .flat_map(|x| x.iter())
        .map(|&x| if x == 1 { 1 } else { -1 })
        .sum()
}

/// Total number of `h1(E)` factors across the letters.
pub fn word_rank(w: &[Term]) -> usize {
    w.iter().map(|t| t.cycle.b()).sum()
}

/// Human-readable form of a word.
pub fn render_word(ctx: &Context, w: &[Term]) -> String {
    format!("[{}]", w.iter().map(|t| t.render(ctx)).collect::<Vec<_>>().join(" | "))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::fixtures::generator_37a1;
    use crate::cycle::FunId;
    use crate::gl2::PureMotive;
    use crate::report::fixture_config;

    fn e1() -> (Context, Vec<FunId>, MotiveChain) {
        let cfg = fixture_config().validate().unwrap();
        let mut ctx = Context::new(cfg.curve.clone());
        let ids: Vec<FunId> = cfg.functions.iter().map(|f| ctx.register(f.clone()).unwrap()).collect();
        let mc = build_motive_chain(&mut ctx, &ids[..1], &[], &cfg.mode).unwrap();
        (ctx, ids, mc)
    }

    #[test]
    fn chain_is_a_cocycle_in_degree_zero() {
        let (ctx, _, mc) = e1();
        assert_eq!(mc.chain.len(), 27);
        assert!(verify_cocycle(&ctx, &mc.chain).unwrap().ok);
        assert!(mc.chain.keys().all(|w| bar_degree(w) == 0));
        assert!(mc.discharge.succeeded);
    }

    #[test]
    fn leading_term_alone_is_not_a_cocycle() {
        let (ctx, _, mc) = e1();
        let lead: BarChain = mc.chain.iter().filter(|(w, _)| w.len() == 1).map(|(w, c)| (w.clone(), c.clone())).collect();
        assert!(!lead.is_zero());
        assert!(!verify_cocycle(&ctx, &lead).unwrap().ok);
    }

    #[test]
    fn differential_squares_to_zero() {
        let (ctx, _, mc) = e1();
        let mut spread = BarChain::new();
        for (i, w) in mc.chain.keys().enumerate() {
            spread.add(w.clone(), Q::from_integer((i as i64 % 5 - 2).into()));
        }
        let mut cache = DifferentialCache::new();
        let d = bar_differential_cached(&ctx, &spread, &mut cache).unwrap();
        assert!(!d.is_zero());
        assert!(bar_differential_cached(&ctx, &d, &mut cache).unwrap().is_zero());
    }

    #[test]
    fn grading_is_sym1_twisted() {
        let (ctx, _, mc) = e1();
        let g = grading_coherence(&ctx, &mc.chain).unwrap();
        assert!(g.matches(&PureMotive::new(1, 1)));
        assert!(!g.matches(&PureMotive::new(1, 0)));
        assert!(chain_raise(&ctx, &mc.chain).unwrap().is_zero());
        assert!(!chain_lower(&ctx, &mc.chain).unwrap().is_zero());
    }

    #[test]
    fn coproduct_layers() {
        let (ctx, ids, mc) = e1();
        let c = &mc.chain;
        assert!(coassociative(c));
        assert!(counital(c));
        let span = comodule_span(c);
        assert!(span.closed);
        assert_eq!(span.layers(), vec![3, 2, 1, 0]);
        let support = ctx.spec(ids[0]).divisor(ctx.curve()).unwrap().support();
        for p in middle_layer_points(c) {
            assert!(support.contains(&p) || support.contains(&ctx.curve().neg(&p)), "{p}");
        }
    }

    #[test]
    fn witness_uses_doubling() {
        let (ctx, _, mc) = e1();
        let w = nontriviality_witness(&ctx, &mc.chain).unwrap();
        assert!(w.nontrivial);
        let p = generator_37a1();
        let cert = w.certificates.iter().find(|c| c.point == p).unwrap();
        assert_eq!(cert.double, ctx.curve().point_i64(1, 0).unwrap());
    }

    #[test]
    fn words_render_with_bars() {
        let (ctx, _, mc) = e1();
        let w = mc.chain.keys().find(|w| w.len() == 3).unwrap();
        let s = render_word(&ctx, w);
        assert!(s.starts_with('[') && s.ends_with(']'));
        assert_eq!(s.matches(" | ").count(), 2);
        assert_eq!(word_rank(w), 3);
    }
}
