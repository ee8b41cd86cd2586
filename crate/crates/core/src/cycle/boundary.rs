//! The cubical boundary and the external product.
//!
//! `d Z = sum_k (-1)^k (d_k^0 Z - d_k^inf Z)` with `k` counted from zero;
//! the faces of a function coordinate are its divisor components, zeros
//! with positive and poles with negative multiplicity.

use num_traits::Zero;

use super::param::{Affine, ParamCycle, QCoord};
use super::term::{canonicalize, CycleSum, Term};
use super::Context;
use crate::curve::CurvePoint;
use crate::divisor::NamedClass;
use crate::error::{degenerate, Result};
use crate::Q;

/// Evaluates the linear equation of `class` on the arguments.
fn class_form(ctx: &Context, class: &NamedClass, args: &[Affine], d: usize) -> Result<(Affine, CurvePoint)> {
    let (coeffs, rhs) = class.linear_equation(args.len());
    let terms: Vec<(i64, &Affine)> = coeffs.iter().copied().zip(args).filter(|(c, _)| *c != 0).collect();
    Ok((Affine::combination(ctx.curve(), d, &terms)?, rhs))
}

/// After a substitution, freezes cube coordinates whose arguments became
/// constant and rejects coordinates that became identically `0` or `inf`.
fn settle(ctx: &Context, z: ParamCycle) -> Result<ParamCycle> {
    let curve = ctx.curve();
    let mut qcoords = Vec::with_capacity(z.qcoords.len());
    for q in z.qcoords {
        let QCoord::Fun { f, args } = q else {
            qcoords.push(q);
            continue;
        };
        for class in ctx.class(f).terms().keys() {
            let (form, rhs) = class_form(ctx, class, &args, z.params)?;
            if form.is_constant() && curve.sub(&rhs, &form.constant)?.is_infinity() {
                return degenerate(format!(
                    "{} lies inside the divisor component {class} of {}",
                    ctx.render(&ParamCycle { params: z.params, ecoords: z.ecoords.clone(), qcoords: vec![] }),
                    ctx.function_name(f)
                ));
            }
        }
        if args.iter().all(Affine::is_constant) {
            qcoords.push(QCoord::Const { f, args: args.into_iter().map(|a| a.constant).collect() });
        } else {
            qcoords.push(QCoord::Fun { f, args });
        }
    }
    Ok(ParamCycle { params: z.params, ecoords: z.ecoords, qcoords })
}

/// The part of `Z` lying over one divisor component of cube coordinate `k`
/// (with that coordinate removed), or `None` if it is empty.
fn face(ctx: &Context, z: &ParamCycle, k: usize, class: &NamedClass) -> Result<Option<ParamCycle>> {
    let curve = ctx.curve();
    let QCoord::Fun { args, .. } = &z.qcoords[k] else {
        return Ok(None);
    };
    let (form, rhs) = class_form(ctx, class, args, z.params)?;
    let r = curve.sub(&rhs, &form.constant)?;
    if form.is_constant() {
        if r.is_infinity() {
            return degenerate(format!("cube coordinate {k} of {} is identically on {class}", ctx.render(z)));
        }
        return Ok(None);
    }
    let Some(j) = form.coeffs.iter().position(|c| c.abs() == 1) else {
        return degenerate(format!("component {class} of coordinate {k} of {} is not a section", ctx.render(z)));
    };
    let lj = form.coeffs[j];
    let coeffs = form.coeffs.iter().enumerate().map(|(i, &c)| if i == j { 0 } else { -lj * c }).collect();
    let constant = curve.scalar_mul(lj, &r)?;
    let expr = Affine { coeffs, constant };
    let mut rest = z.clone();
    rest.qcoords.remove(k);
    let sub = rest.substitute(curve, j, &expr)?;
    Ok(Some(settle(ctx, sub)?))
}

/// Boundary of a single term, canonicalized.
pub fn boundary_term(ctx: &Context, t: &Term) -> Result<CycleSum> {
    let mut out = CycleSum::new();
    for k in 0..t.cycle.c() {
        let QCoord::Fun { f, .. } = &t.cycle.qcoords[k] else { continue };
        let sign = if k % 2 == 0 { Q::from_integer(1.into()) } else { Q::from_integer((-1).into()) };
        for (class, c) in ctx.class(*f).terms() {
            if let Some(z) = face(ctx, &t.cycle, k, class)? {
                out.add(Term { cycle: z, word: t.word.clone() }, &sign * c);
            }
        }
    }
    canonicalize(ctx, &out)
}

/// Boundary of a sum, canonicalized.
pub fn boundary(ctx: &Context, s: &CycleSum) -> Result<CycleSum> {
    let mut out = CycleSum::new();
    for (t, c) in s {
        if c.is_zero() {
            continue;
        }
        out.add_scaled(&boundary_term(ctx, t)?, c);
    }
    Ok(out)
}

fn pad(a: &Affine, before: usize, after: usize) -> Affine {
    let mut coeffs = vec![0; before];
    coeffs.extend_from_slice(&a.coeffs);
    coeffs.extend(std::iter::repeat(0).take(after));
    Affine { coeffs, constant: a.constant.clone() }
}

/// `(Z1, w1) . (Z2, w2) = (-1)^{b1 c2} (Z1 x Z2, w1 w2)`, uncanonicalized.
pub fn product_terms(x: &Term, y: &Term) -> (Term, i64) {
    let (d1, d2) = (x.cycle.params, y.cycle.params);
    let shift = |q: &QCoord, before: usize, after: usize| match q {
        QCoord::Fun { f, args } => {
            QCoord::Fun { f: *f, args: args.iter().map(|a| pad(a, before, after)).collect() }
        }
        QCoord::Const { .. } => q.clone(),
    };
    let mut ecoords: Vec<Affine> = x.cycle.ecoords.iter().map(|a| pad(a, 0, d2)).collect();
    ecoords.extend(y.cycle.ecoords.iter().map(|a| pad(a, d1, 0)));
    let mut qcoords: Vec<QCoord> = x.cycle.qcoords.iter().map(|q| shift(q, 0, d2)).collect();
    qcoords.extend(y.cycle.qcoords.iter().map(|q| shift(q, d1, 0)));
    let word = match (&x.word, &y.word) {
        (Some(a), Some(b)) => Some([a.as_slice(), b.as_slice()].concat()),
        _ => None,
    };
    let sign = if x.cycle.b() * y.cycle.c() % 2 == 1 { -1 } else { 1 };
    (Term { cycle: ParamCycle { params: d1 + d2, ecoords, qcoords }, word }, sign)
}

/// Bilinear external product of two sums, canonicalized.
pub fn external_product(ctx: &Context, a: &CycleSum, b: &CycleSum) -> Result<CycleSum> {
    let mut out = CycleSum::new();
    for (x, cx) in a {
        for (y, cy) in b {
            let (t, s) = product_terms(x, y);
            let c = cx * cy;
            out.add(t, if s > 0 { c } else { -c });
        }
    }
    canonicalize(ctx, &out)
}
