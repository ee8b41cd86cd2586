//! Assembly of `E(g_1..g_n)`: the leading `eta` word, lower layers found by
//! factoring the degree-two letters of the differential, coefficients by an
//! exact linear solve.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{bar_differential, bar_differential_cached, chain_lower, chain_raise, render_word, word_rank, word_weight};
use super::{BarChain, BarWord, DifferentialCache};
use crate::curve::CurvePoint;
use crate::cycle::{
    build_family, canonicalize_term, decorate, Affine, Context, DecorationKind, FamilyKind, FamilySpec, FunId,
    FunctionMode, ParamCycle, QCoord, Term,
};
use crate::error::{structural, Result};
use crate::gl2::{casimir_eigenvalue, PureMotive};
use crate::linalg::solve;
use crate::scalar::rational_string;
use crate::Q;

/// Largest number of candidate words explored before giving up.
const CANDIDATE_LIMIT: usize = 50_000;

/// All ways to write a degree-two letter as a product `A . B` of two
/// degree-one letters (both orders), up to sign.
pub fn factorizations(ctx: &Context, t: &Term) -> Result<Vec<(Term, Term)>> {
    let z = &t.cycle;
    let b = z.b();
    // union-find over ecoord rows, joined through shared parameters and
    // through function coordinates whose arguments mix parameters
    let mut parent: Vec<usize> = (0..b).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        p[i] = r;
        r
    }
    let mut owner: Vec<Option<usize>> = vec![None; z.params];
    let join = |parent: &mut Vec<usize>, owner: &mut Vec<Option<usize>>, row: usize, a: &Affine| {
        for (k, &c) in a.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            match owner[k] {
                None => owner[k] = Some(row),
                Some(o) => {
                    let (ra, rb) = (find(parent, o), find(parent, row));
                    parent[ra] = rb;
                }
            }
        }
    };
    for (r, e) in z.ecoords.iter().enumerate() {
        join(&mut parent, &mut owner, r, e);
    }
    let mut fun_rows = Vec::new();
    for q in &z.qcoords {
        if let QCoord::Fun { args, .. } = q {
            let Some(first) = args.iter().flat_map(|a| a.coeffs.iter().enumerate()).find(|(_, &c)| c != 0).map(|(k, _)| k)
            else {
                return structural("function coordinate with constant arguments");
            };
            let row = owner[first].expect("every parameter appears in an E coordinate");
            for a in args {
                join(&mut parent, &mut owner, row, a);
            }
            fun_rows.push(Some(row));
        } else {
            fun_rows.push(None);
        }
    }
    let mut comps: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for r in 0..b {
        let root = find(&mut parent, r);
        comps.entry(root).or_default().push(r);
    }
    let comps: Vec<Vec<usize>> = comps.into_values().collect();
    let consts: Vec<usize> = (0..z.c()).filter(|&k| fun_rows[k].is_none()).collect();
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    for mask in 1u32..(1 << comps.len()) - 1 {
        let mut in_a = vec![false; b];
        for (ci, comp) in comps.iter().enumerate() {
            if mask >> ci & 1 == 1 {
                for &r in comp {
                    in_a[r] = true;
                }
            }
        }
        for cmask in 0u32..(1 << consts.len()) {
            let mut q_in_a = vec![false; z.c()];
            for (k, f) in fun_rows.iter().enumerate() {
                if let Some(r) = f {
                    q_in_a[k] = in_a[*r];
                }
            }
            for (i, &k) in consts.iter().enumerate() {
                q_in_a[k] = cmask >> i & 1 == 1;
            }
            let side = |want: bool| -> Option<Term> {
                let rows: Vec<usize> = (0..b).filter(|&r| in_a[r] == want).collect();
                let qs: Vec<usize> = (0..z.c()).filter(|&k| q_in_a[k] == want).collect();
                if rows.len() as i64 - qs.len() as i64 != 1 {
                    return None;
                }
                let used: Vec<usize> =
                    (0..z.params).filter(|&k| rows.iter().any(|&r| z.ecoords[r].coeffs[k] != 0)).collect();
                let restrict = |a: &Affine| Affine {
                    coeffs: used.iter().map(|&k| a.coeffs[k]).collect(),
                    constant: a.constant.clone(),
                };
                let cycle = ParamCycle {
                    params: used.len(),
                    ecoords: rows.iter().map(|&r| restrict(&z.ecoords[r])).collect(),
                    qcoords: qs
                        .iter()
                        .map(|&k| match &z.qcoords[k] {
                            QCoord::Fun { f, args } => QCoord::Fun { f: *f, args: args.iter().map(restrict).collect() },
                            c => c.clone(),
                        })
                        .collect(),
                };
                let word = t.word.as_ref().map(|w| rows.iter().map(|&r| w[r]).collect());
                Some(Term { cycle, word })
            };
            let (Some(a), Some(bt)) = (side(true), side(false)) else { continue };
            let (Some((a, _)), Some((bt, _))) = (canonicalize_term(ctx, &a)?, canonicalize_term(ctx, &bt)?) else {
                continue;
            };
            for pair in [(a.clone(), bt.clone()), (bt, a)] {
                if seen.insert(pair.clone()) {
                    out.push(pair);
                }
            }
        }
    }
    Ok(out)
}

/// Whether a letter is of `mu` or `nu` type: it has cube coordinates but
/// none of them is a multi-variable function.
pub fn is_mu_nu_letter(ctx: &Context, t: &Term) -> bool {
    t.cycle.c() > 0 && t.cycle.qcoords.iter().all(|q| ctx.spec(q.function()).arity() == 1)
}

/// Words of one length in a chain.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainLayer {
    pub length: usize,
    pub words: usize,
    pub mu_nu_words: usize,
}

/// Outcome of trying to remove the `mu`/`nu` letters with kill cycles.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Discharge {
    pub mu_nu_words_before: usize,
    pub mu_nu_words_after: usize,
    pub kill_words: usize,
    pub succeeded: bool,
}

/// `E(g_1..g_n)` (or `E^{a_1..a_r}`) with its construction data.
#[derive(Debug, Clone)]
pub struct MotiveChain {
    pub n: usize,
    pub r: usize,
    pub chain: BarChain,
    pub layers: Vec<ChainLayer>,
    pub candidates: usize,
    pub discharge: Discharge,
}

fn layers(ctx: &Context, c: &BarChain) -> Vec<ChainLayer> {
    let mut by_len: BTreeMap<usize, ChainLayer> = BTreeMap::new();
    for (w, _) in c {
        let l = by_len.entry(w.len()).or_insert(ChainLayer { length: w.len(), words: 0, mu_nu_words: 0 });
        l.words += 1;
        if w.iter().any(|t| is_mu_nu_letter(ctx, t)) {
            l.mu_nu_words += 1;
        }
    }
    by_len.into_values().collect()
}

fn mu_nu_count(ctx: &Context, c: &BarChain) -> usize {
    c.keys().filter(|w| w.iter().any(|t| is_mu_nu_letter(ctx, t))).count()
}

/// Candidate words: close the leading words under "take the differential,
/// factor its degree-two letter".
fn candidate_words(ctx: &Context, lead: &BarChain, cache: &mut DifferentialCache) -> Result<Vec<BarWord>> {
    let mut known: BTreeSet<BarWord> = lead.keys().cloned().collect();
    let mut queue: Vec<BarWord> = lead.keys().cloned().collect();
    let mut found = Vec::new();
    let mut factor_cache: BTreeMap<Term, Vec<(Term, Term)>> = BTreeMap::new();
    while let Some(w) = queue.pop() {
        let dw = bar_differential_cached(ctx, &BarChain::single(w, Q::from_integer(1.into())), cache)?;
        for (v, _) in &dw {
            let Some(i) = v.iter().position(|t| t.degree() == 2) else { continue };
            if !factor_cache.contains_key(&v[i]) {
                factor_cache.insert(v[i].clone(), factorizations(ctx, &v[i])?);
            }
            for (a, b) in &factor_cache[&v[i]] {
                let mut x = v[..i].to_vec();
                x.push(a.clone());
                x.push(b.clone());
                x.extend_from_slice(&v[i + 1..]);
                if known.insert(x.clone()) {
                    if known.len() > CANDIDATE_LIMIT {
                        return structural(format!("more than {CANDIDATE_LIMIT} candidate words"));
                    }
                    found.push(x.clone());
                    queue.push(x);
                }
            }
        }
    }
    found.sort();
    Ok(found)
}

/// Completes `lead` to a bar cocycle using words generated from it.
/// Returns the completed chain and the number of candidates.
pub fn complete_to_cocycle(ctx: &Context, lead: &BarChain) -> Result<(BarChain, usize)> {
    let mut cache = DifferentialCache::new();
    let cands = candidate_words(ctx, lead, &mut cache)?;
    let cols: Vec<BarChain> = cands
        .iter()
        .map(|w| bar_differential_cached(ctx, &BarChain::single(w.clone(), Q::from_integer(1.into())), &mut cache))
        .collect::<Result<_>>()?;
    let rhs = bar_differential_cached(ctx, lead, &mut cache)?.scaled(&Q::from_integer((-1).into()));
    let Some(x) = solve(&cols, &rhs) else {
        let residual: Vec<String> = rhs.keys().take(3).map(|w| render_word(ctx, w)).collect();
        return structural(format!(
            "no combination of {} candidate words cancels the differential of the leading term (e.g. {})",
            cands.len(),
            residual.join("; ")
        ));
    };
    let mut chain = lead.clone();
    for (w, c) in cands.iter().zip(x) {
        if !c.is_zero() {
            chain.add(w.clone(), c);
        }
    }
    Ok((chain, cands.len()))
}

/// Builds `E^{a_1..a_r}(g_1..g_n)`: leading term `[eta]`, lower layers
/// generated mechanically, coefficients solved exactly.
pub fn build_motive_chain(
    ctx: &mut Context,
    gs: &[FunId],
    points: &[CurvePoint],
    mode: &FunctionMode,
) -> Result<MotiveChain> {
    let x = build_family(ctx, &FamilySpec { kind: FamilyKind::X { points: points.to_vec() }, gs: gs.to_vec() }, mode)?;
    let eta = decorate(ctx, DecorationKind::Eta, &x)?;
    let mut lead = BarChain::new();
    for (t, c) in &eta {
        lead.add(vec![t.clone()], c.clone());
    }
    let (chain, candidates) = complete_to_cocycle(ctx, &lead)?;
    // the solve picks one solution; projecting onto the label of the
    // leading term keeps it a cocycle because D commutes with gl2
    let label = (x.b() - 2) as i64;
    let chain = isotypic_chain(ctx, &chain, label)?;
    let (discharged, discharge) = discharge_mu_nu(ctx, &chain, gs)?;
    let chain = if discharge.succeeded { isotypic_chain(ctx, &discharged, label)? } else { chain };
    Ok(MotiveChain { n: gs.len(), r: points.len(), layers: layers(ctx, &chain), chain, candidates, discharge })
}

fn chain_casimir(ctx: &Context, c: &BarChain) -> Result<BarChain> {
    let ef = chain_raise(ctx, &chain_lower(ctx, c)?)?;
    let fe = chain_lower(ctx, &chain_raise(ctx, c)?)?;
    let mut h2 = BarChain::new();
    for (w, q) in c {
        let h = word_weight(w);
        h2.add(w.clone(), q * Q::from_integer((h * h).into()) / Q::from_integer(2.into()));
    }
    Ok(ef.plus(&fe).plus(&h2))
}

/// Projection of a chain whose words all have `n + 2` factors of `h1(E)`
/// onto its `Sym^n` isotypic part.
pub fn isotypic_chain(ctx: &Context, c: &BarChain, n: i64) -> Result<BarChain> {
    let ranks: BTreeSet<usize> = c.keys().map(|w| word_rank(w)).collect();
    let Some(&top) = ranks.iter().next_back() else {
        return Ok(c.clone());
    };
    let target = casimir_eigenvalue(n);
    let mut out = c.clone();
    let mut k = top as i64;
    while k >= 0 {
        if k != n {
            let lam = casimir_eigenvalue(k);
            let denom = (&target - &lam).recip();
            out = chain_casimir(ctx, &out)?.minus(&out.scaled(&lam)).scaled(&denom);
        }
        k -= 2;
    }
    Ok(out)
}

const DISCHARGE_DEPTH: usize = 0;

/// Degree-zero letters whose boundary contains `t`: a new parameter `y`
/// is subtracted from one `E` coordinate (shifted by `q`) and `g(y)` is
/// appended, so the `y = q` face gives back `t`. The kill-cycle families
/// are of this form.
pub fn kill_lifts(ctx: &Context, t: &Term, gs: &[FunId]) -> Result<Vec<Term>> {
    let curve = ctx.curve();
    let z = &t.cycle;
    let d = z.params;
    let pad = |a: &Affine| {
        let mut coeffs = a.coeffs.clone();
        coeffs.push(0);
        Affine { coeffs, constant: a.constant.clone() }
    };
    let mut out = BTreeSet::new();
    for &g in gs {
        for q in ctx.spec(g).divisor(curve)?.support() {
            for r in 0..z.b() {
                let Ok(mut lifted) = z.map_affine(d + 1, |a| Ok(pad(a))) else { continue };
                lifted.ecoords[r].coeffs[d] = -1;
                lifted.ecoords[r].constant = curve.add(&lifted.ecoords[r].constant, &q)?;
                lifted.qcoords.push(QCoord::Fun { f: g, args: vec![Affine::param(d + 1, d)] });
                let k = Term { cycle: lifted, word: t.word.clone() };
                if let Ok(Some((k, _))) = canonicalize_term(ctx, &k) {
                    out.insert(k);
                }
            }
        }
    }
    Ok(out.into_iter().collect())
}

fn has_mu_nu(ctx: &Context, w: &[Term]) -> bool {
    w.iter().any(|t| is_mu_nu_letter(ctx, t))
}

/// Searches for `beta` in bar degree `-1`, built from kill lifts, such that
/// `c + D beta` has no `mu`/`nu` letters.
pub fn discharge_mu_nu(ctx: &Context, c: &BarChain, gs: &[FunId]) -> Result<(BarChain, Discharge)> {
    let before = mu_nu_count(ctx, c);
    if before == 0 {
        return Ok((c.clone(), Discharge { mu_nu_words_before: 0, mu_nu_words_after: 0, kill_words: 0, succeeded: true }));
    }
    let mut cache = DifferentialCache::new();
    let mut lift_cache: BTreeMap<Term, Vec<Term>> = BTreeMap::new();
    let mut factor_cache: BTreeMap<Term, Vec<(Term, Term)>> = BTreeMap::new();
    let mut seen: BTreeSet<BarWord> = BTreeSet::new();
    let mut queue: VecDeque<(BarWord, usize)> = c.keys().filter(|w| has_mu_nu(ctx, w)).map(|w| (w.clone(), 0)).collect();
    let mut betas: BTreeSet<BarWord> = BTreeSet::new();
    while let Some((u, depth)) = queue.pop_front() {
        if depth > DISCHARGE_DEPTH || !seen.insert(u.clone()) {
            continue;
        }
        let mut new = Vec::new();
        for i in 0..u.len() {
            match u[i].degree() {
                1 if is_mu_nu_letter(ctx, &u[i]) => {
                    if !lift_cache.contains_key(&u[i]) {
                        lift_cache.insert(u[i].clone(), kill_lifts(ctx, &u[i], gs)?);
                    }
                    for k in &lift_cache[&u[i]] {
                        let mut b = u.clone();
                        b[i] = k.clone();
                        new.push(b);
                    }
                }
                2 => {
                    if !factor_cache.contains_key(&u[i]) {
                        factor_cache.insert(u[i].clone(), factorizations(ctx, &u[i])?);
                    }
                    for (a, b) in &factor_cache[&u[i]] {
                        let mut x = u[..i].to_vec();
                        x.push(a.clone());
                        x.push(b.clone());
                        x.extend_from_slice(&u[i + 1..]);
                        if has_mu_nu(ctx, &x) {
                            new.push(x);
                        }
                    }
                }
                _ => {}
            }
        }
        for b in new {
            if betas.insert(b.clone()) {
                if betas.len() > CANDIDATE_LIMIT {
                    return structural(format!("more than {CANDIDATE_LIMIT} kill words"));
                }
                let db = bar_differential_cached(ctx, &BarChain::single(b, Q::from_integer(1.into())), &mut cache)?;
                queue.extend(db.keys().filter(|w| has_mu_nu(ctx, w) && !seen.contains(*w)).map(|w| (w.clone(), depth + 1)));
            }
        }
    }
    let betas: Vec<BarWord> = betas.into_iter().collect();
    let dbs: Vec<BarChain> = betas
        .iter()
        .map(|b| bar_differential_cached(ctx, &BarChain::single(b.clone(), Q::from_integer(1.into())), &mut cache))
        .collect::<Result<_>>()?;
    let restrict = |x: &BarChain| -> BarChain { x.iter().filter(|(w, _)| has_mu_nu(ctx, w)).map(|(w, q)| (w.clone(), q.clone())).collect() };
    let cols: Vec<BarChain> = dbs.iter().map(restrict).collect();
    let rhs = restrict(c).scaled(&Q::from_integer((-1).into()));
    let Some(y) = solve(&cols, &rhs) else {
        let d = Discharge { mu_nu_words_before: before, mu_nu_words_after: before, kill_words: betas.len(), succeeded: false };
        return Ok((c.clone(), d));
    };
    let mut out = c.clone();
    for (db, yi) in dbs.iter().zip(&y) {
        if !yi.is_zero() {
            out.add_scaled(db, yi);
        }
    }
    let after = mu_nu_count(ctx, &out);
    let used = y.iter().filter(|v| !v.is_zero()).count();
    Ok((out, Discharge { mu_nu_words_before: before, mu_nu_words_after: after, kill_words: used, succeeded: after == 0 }))
}

/// Result of a cocycle check with a sample of the residual.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CocycleCheck {
    pub ok: bool,
    pub residual_words: usize,
    pub sample: Vec<(String, String)>,
}

/// `D c = 0` after canonicalization.
pub fn verify_cocycle(ctx: &Context, c: &BarChain) -> Result<CocycleCheck> {
    let d = bar_differential(ctx, c)?;
    let sample = d.iter().take(5).map(|(w, q)| (render_word(ctx, w), rational_string(q))).collect();
    Ok(CocycleCheck { ok: d.is_zero(), residual_words: d.len(), sample })
}

/// Whether a chain carries the label `Sym^n h1(E)(-m)` as a `gl2`
/// representation: it is highest weight of weight `n`, the Casimir acts by
/// the `Sym^n` eigenvalue, and every word has `n + 2m` factors of `h1(E)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradingCheck {
    pub label: Option<PureMotive>,
    pub highest_weight: bool,
    pub weight: Option<i64>,
    pub casimir: bool,
    pub uniform_rank: bool,
}

impl GradingCheck {
    pub fn matches(&self, target: &PureMotive) -> bool {
        self.highest_weight && self.casimir && self.uniform_rank && self.label.as_ref() == Some(target)
    }
}

pub fn grading_coherence(ctx: &Context, c: &BarChain) -> Result<GradingCheck> {
    let weights: BTreeSet<i64> = c.keys().map(|w| word_weight(w)).collect();
    let ranks: BTreeSet<usize> = c.keys().map(|w| word_rank(w)).collect();
    let weight = (weights.len() == 1).then(|| *weights.iter().next().unwrap());
    let highest_weight = chain_raise(ctx, c)?.is_zero();
    let casimir = match weight {
        Some(n) if n >= 0 => {
            let ef = chain_raise(ctx, &chain_lower(ctx, c)?)?;
            let fe = chain_lower(ctx, &chain_raise(ctx, c)?)?;
            let h2 = Q::from_integer((n * n).into()) / Q::from_integer(2.into());
            let cv = ef.plus(&fe).plus(&c.scaled(&h2));
            cv == c.scaled(&casimir_eigenvalue(n))
        }
        _ => false,
    };
    let uniform_rank = ranks.len() == 1;
    let label = match (weight, ranks.iter().next()) {
        (Some(n), Some(&b)) if n >= 0 && uniform_rank && (b as i64 - n) % 2 == 0 => {
            Some(PureMotive::new(n as u32, (b as i64 - n) / 2))
        }
        _ => None,
    };
    Ok(GradingCheck { label, highest_weight, weight, casimir, uniform_rank })
}
