//! Decorated terms and their canonical forms.
//!
//! A term is a cycle `Z` in `E^b x (P^1 - {1})^c` together with an optional
//! basis tensor `w` in `h1^{(x) b}`. Decorated terms satisfy
//!
//! * `(sigma Z, sigma w) = sgn(sigma) (Z, w)` for `sigma` permuting the `E` factors,
//! * `(iota_k Z, w) = -(Z, w)` for `iota_k` negating the `k`-th `E` factor,
//! * `(tau Z, w) = chi(tau) (Z, w)` for `tau` in `(Z/2)^c x| S_c` acting on cube
//!   coordinates, with `chi` the sign character (transpositions and
//!   inversions `f -> 1/f` both act by `-1`).
//!
//! Undecorated terms satisfy the last two relations only.

use serde::{Deserialize, Serialize};

use super::param::{Affine, ParamCycle, QCoord};
use super::Context;
use crate::error::Result;
use crate::formal::Lin;
use crate::gl2::{casimir_eigenvalue, PureMotive, TensorWord};
use crate::symgroup::Permutation;
use crate::Q;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Term {
    pub cycle: ParamCycle,
    pub word: Option<TensorWord>,
}

impl Term {
    pub fn bare(cycle: ParamCycle) -> Term {
        Term { cycle, word: None }
    }

    pub fn decorated(cycle: ParamCycle, word: TensorWord) -> Term {
        Term { cycle, word: Some(word) }
    }

    pub fn degree(&self) -> i64 {
        self.cycle.degree()
    }

    pub fn render(&self, ctx: &Context) -> String {
        let z = ctx.render(&self.cycle);
        match &self.word {
            None => z,
            Some(w) => format!("{z}@{}", w.iter().map(|x| x.to_string()).collect::<String>()),
        }
    }
}

/// Exact linear combination of terms.
pub type CycleSum = Lin<Term>;

fn sort_sign<T: Ord>(items: &mut [T]) -> (i64, bool) {
    // insertion sort counting transpositions; reports equal neighbours
    let mut sign = 1;
    for i in 1..items.len() {
        let mut j = i;
        while j > 0 && items[j - 1] > items[j] {
            items.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    let dup = items.windows(2).any(|w| w[0] == w[1]);
    (sign, dup)
}

/// Sorts symmetric function arguments and the cube coordinates. `None`
/// when two cube coordinates coincide.
fn tidy(ctx: &Context, mut z: ParamCycle) -> Option<(ParamCycle, i64)> {
    for q in z.qcoords.iter_mut() {
        let f = q.function();
        if let Some(s) = ctx.symmetric_from(f) {
            match q {
                QCoord::Fun { args, .. } => args[s..].sort(),
                QCoord::Const { args, .. } => args[s..].sort(),
            }
        }
    }
    let (sign, dup) = sort_sign(&mut z.qcoords);
    if dup {
        None
    } else {
        Some((z, sign))
    }
}

fn orbit_candidates(b: usize, word: Option<&TensorWord>) -> Vec<Permutation> {
    match word {
        None => vec![Permutation::identity(b)],
        Some(w) => {
            let ones: Vec<usize> = (0..b).filter(|&i| w[i] == 1).collect();
            let twos: Vec<usize> = (0..b).filter(|&i| w[i] == 2).collect();
            Permutation::block_preserving(b, &[ones, twos])
        }
    }
}

/// Canonical representative of a term and the sign relating them, or
/// `None` if the relations force the term to vanish.
pub fn canonicalize_term(ctx: &Context, t: &Term) -> Result<Option<(Term, i64)>> {
    if let Some(hit) = ctx.memo.borrow().get(t) {
        return Ok(hit.clone());
    }
    let out = canonicalize_uncached(ctx, t)?;
    ctx.memo.borrow_mut().insert(t.clone(), out.clone());
    Ok(out)
}

fn canonicalize_uncached(ctx: &Context, t: &Term) -> Result<Option<(Term, i64)>> {
    let curve = ctx.curve();
    let b = t.cycle.b();
    let mut base = t.cycle.clone();
    let mut sign0 = 1;
    let word = match &t.word {
        None => None,
        Some(w) => {
            // move e1 factors to the front, keeping relative order
            let mut order: Vec<usize> = (0..b).collect();
            order.sort_by_key(|&i| w[i]);
            let mut image = vec![0; b];
            for (pos, &i) in order.iter().enumerate() {
                image[i] = pos;
            }
            let p = Permutation::from_images(image)?;
            sign0 = p.sign();
            base.ecoords = p.permute(&base.ecoords);
            Some(p.permute(w))
        }
    };
    let mut best: Option<(ParamCycle, i64)> = None;
    let mut clash = false;
    for tau in orbit_candidates(b, word.as_ref()) {
        let mut z = base.clone();
        z.ecoords = tau.permute(&base.ecoords);
        let (z, pivots) = z.normalized_with_pivots(curve)?;
        let d = z.params;
        // Negating a pivot coordinate is the reparametrization t_k -> -t_k,
        // so the (Z/2)^b orbit is column flips times free row flips.
        for mask in 0u32..(1 << d) {
            let mut sign = sign0 * tau.sign() * if mask.count_ones() % 2 == 1 { -1 } else { 1 };
            let flip = |a: &Affine| Affine {
                coeffs: a.coeffs.iter().enumerate().map(|(k, &c)| if mask >> k & 1 == 1 { -c } else { c }).collect(),
                constant: a.constant.clone(),
            };
            let mut cand = z.map_affine(d, |a| Ok(flip(a)))?;
            for (r, e) in cand.ecoords.iter_mut().enumerate() {
                if pivots.contains(&r) {
                    continue;
                }
                let neg = e.negated(curve);
                if neg == *e {
                    return Ok(None);
                }
                if neg < *e {
                    *e = neg;
                    sign = -sign;
                }
            }
            for &r in &pivots {
                cand.ecoords[r] = z.ecoords[r].clone();
            }
            let Some((cand, s)) = tidy(ctx, cand) else {
                return Ok(None);
            };
            let s = s * sign;
            match &best {
                Some((bz, bs)) if *bz == cand => {
                    if *bs != s {
                        clash = true;
                    }
                }
                Some((bz, _)) if *bz < cand => {}
                _ => {
                    best = Some((cand, s));
                    clash = false;
                }
            }
        }
    }
    if clash {
        return Ok(None);
    }
    let (z, s) = best.expect("orbit is nonempty");
    Ok(Some((Term { cycle: z, word }, s)))
}

/// Canonical form of a sum: every term replaced by its representative.
pub fn canonicalize(ctx: &Context, s: &CycleSum) -> Result<CycleSum> {
    let mut out = CycleSum::new();
    for (t, c) in s {
        if let Some((k, sign)) = canonicalize_term(ctx, t)? {
            out.add(k, if sign > 0 { c.clone() } else { -c.clone() });
        }
    }
    Ok(out)
}

fn word_op(ctx: &Context, s: &CycleSum, from: u8, to: u8) -> Result<CycleSum> {
    let mut out = CycleSum::new();
    for (t, c) in s {
        let Some(w) = &t.word else { continue };
        for k in 0..w.len() {
            if w[k] == from {
                let mut x = w.clone();
                x[k] = to;
                out.add(Term { cycle: t.cycle.clone(), word: Some(x) }, c.clone());
            }
        }
    }
    canonicalize(ctx, &out)
}

/// The raising operator of `gl2` on decorations.
pub fn gl2_raise(ctx: &Context, s: &CycleSum) -> Result<CycleSum> {
    word_op(ctx, s, 2, 1)
}

/// The lowering operator of `gl2` on decorations.
pub fn gl2_lower(ctx: &Context, s: &CycleSum) -> Result<CycleSum> {
    word_op(ctx, s, 1, 2)
}

fn gl2_h(s: &CycleSum) -> CycleSum {
    s.iter()
        .map(|(t, c)| {
            let h: i64 = t.word.as_ref().map_or(0, |w| w.iter().map(|&x| if x == 1 { 1 } else { -1 }).sum());
            (t.clone(), c * Q::from_integer(h.into()))
        })
        .collect()
}

fn casimir(ctx: &Context, s: &CycleSum) -> Result<CycleSum> {
    let half = Q::new(1.into(), 2.into());
    let ef = gl2_raise(ctx, &gl2_lower(ctx, s)?)?;
    let fe = gl2_lower(ctx, &gl2_raise(ctx, s)?)?;
    Ok(ef.plus(&fe).plus(&gl2_h(&gl2_h(s)).scaled(&half)))
}

/// Projection of a homogeneous decorated sum (all words of length `b`)
/// onto its `Sym^n` isotypic part.
pub fn isotypic_part(ctx: &Context, s: &CycleSum, b: usize, n: u32) -> Result<CycleSum> {
    let target = casimir_eigenvalue(n as i64);
    let mut out = canonicalize(ctx, s)?;
    let mut k = b as i64;
    while k >= 0 {
        if k != n as i64 {
            let lam = casimir_eigenvalue(k);
            let denom = (&target - &lam).recip();
            out = casimir(ctx, &out)?.minus(&out.scaled(&lam)).scaled(&denom);
        }
        k -= 2;
    }
    Ok(out)
}

/// The `GL2` label of a nonzero decorated sum that is a Casimir eigenvector.
pub fn term_label(ctx: &Context, s: &CycleSum, b: usize) -> Result<Option<PureMotive>> {
    let s = canonicalize(ctx, s)?;
    if s.is_zero() {
        return Ok(None);
    }
    let cs = casimir(ctx, &s)?;
    let mut n = b as i64;
    while n >= 0 {
        if cs == s.scaled(&casimir_eigenvalue(n)) {
            return Ok(Some(PureMotive::new(n as u32, (b as i64 - n) / 2)));
        }
        n -= 2;
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::fixtures::{curve_37a1, generator_37a1};
    use crate::curve::CurvePoint;

    fn ctx() -> Context {
        Context::new(curve_37a1())
    }

    fn letter(points: &[CurvePoint], word: Vec<u8>) -> Term {
        let d = 0;
        let cycle = ParamCycle {
            params: d,
            ecoords: points.iter().map(|p| Affine::constant(d, p.clone())).collect(),
            qcoords: vec![],
        };
        Term::decorated(cycle, word)
    }

    fn one() -> Q {
        Q::from_integer(1.into())
    }

    #[test]
    fn negation_flips_sign() {
        let c = ctx();
        let p = generator_37a1();
        let m = c.curve().neg(&p);
        let mut s = CycleSum::new();
        s.add(letter(&[p], vec![1]), one());
        s.add(letter(&[m], vec![1]), one());
        assert!(canonicalize(&c, &s).unwrap().is_zero());
    }

    #[test]
    fn origin_letter_vanishes() {
        let c = ctx();
        assert_eq!(canonicalize_term(&c, &letter(&[CurvePoint::Infinity], vec![1])).unwrap(), None);
    }

    #[test]
    fn factors_alternate() {
        let c = ctx();
        let p = generator_37a1();
        let q = c.curve().scalar_mul(3, &p).unwrap();
        let mut s = CycleSum::new();
        s.add(letter(&[p.clone(), q.clone()], vec![1, 1]), one());
        s.add(letter(&[q.clone(), p.clone()], vec![1, 1]), one());
        assert!(canonicalize(&c, &s).unwrap().is_zero());
        assert_eq!(canonicalize_term(&c, &letter(&[p.clone(), p.clone()], vec![1, 1])).unwrap(), None);
        // distinct words are not identified by swapping alone
        let t = canonicalize_term(&c, &letter(&[p, q], vec![1, 2])).unwrap();
        assert!(t.is_some());
    }

    #[test]
    fn canonicalize_is_idempotent() {
        let c = ctx();
        let p = generator_37a1();
        let e = c.curve();
        let mut s = CycleSum::new();
        for k in 1..5 {
            let a = e.scalar_mul(k, &p).unwrap();
            let b = e.scalar_mul(-2 * k - 1, &p).unwrap();
            s.add(letter(&[a, b], vec![2, 1]), Q::from_integer(k.into()));
        }
        let once = canonicalize(&c, &s).unwrap();
        assert_eq!(canonicalize(&c, &once).unwrap(), once);
        assert_eq!(once.len(), 4);
    }
}
