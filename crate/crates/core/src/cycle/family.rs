//! The cycle families `X`, `Y`, `Z`, the two kill-cycle families, their
//! decorations, and the admissibility rules for the input functions.

use serde::{Deserialize, Serialize};

use super::param::{Affine, FunId, ParamCycle, QCoord};
use super::term::{canonicalize, CycleSum, Term};
use super::Context;
use crate::curve::{CurvePoint, EllipticCurve};
use crate::divisor::{is_principal, FunctionSpec};
use crate::error::{degenerate, domain, structural, Error, Result};
use crate::gl2::{tensor_basis, TensorVec};
use crate::symgroup::YoungShape;
use crate::Q;

/// Which reading of the multi-variable function `F_N` the family `X` uses.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum FunctionMode {
    Fbar,
    Fn { u: CurvePoint, v: CurvePoint },
}

impl FunctionMode {
    pub fn spec(&self, arity: usize) -> FunctionSpec {
        match self {
            FunctionMode::Fbar => FunctionSpec::FbarN(arity),
            FunctionMode::Fn { u, v } => FunctionSpec::FN { n: arity, u: u.clone(), v: v.clone() },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum FamilyKind {
    /// `X^{a_1..a_r}`.
    X { points: Vec<CurvePoint> },
    /// `Y^a`.
    Y { a: CurvePoint },
    /// `_j Z^{b1,b2}`, `j` 1-based.
    Z { j: usize, b1: CurvePoint, b2: CurvePoint },
}

/// A family member: the kind plus the functions `g_1..g_n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub kind: FamilyKind,
    pub gs: Vec<FunId>,
}

fn sum_form(curve: &EllipticCurve, d: usize, params: &[usize], consts: &[&CurvePoint]) -> Result<Affine> {
    // -(sum of params) - (sum of consts)
    let mut coeffs = vec![0; d];
    for &k in params {
        coeffs[k] -= 1;
    }
    let constant = curve.combine(consts.iter().map(|p| (-1, *p)))?;
    Ok(Affine { coeffs, constant })
}

fn one_var(ctx: &Context, g: FunId) -> Result<()> {
    if ctx.spec(g).arity() != 1 {
        return structural(format!("{} is not a function of one variable", ctx.function_name(g)));
    }
    Ok(())
}

fn check_const(ctx: &Context, g: FunId, p: &CurvePoint) -> Result<()> {
    let d = ctx.spec(g).divisor(ctx.curve())?;
    if d.terms().contains_key(p) {
        return degenerate(format!("{} has a zero or pole at {}, so {}({}) is not a cube point",
            ctx.function_name(g), p, ctx.function_name(g), p));
    }
    Ok(())
}

/// Builds a member of one of the three families.
pub fn build_family(ctx: &mut Context, spec: &FamilySpec, mode: &FunctionMode) -> Result<ParamCycle> {
    for &g in &spec.gs {
        one_var(ctx, g)?;
    }
    let curve = ctx.curve().clone();
    let n = spec.gs.len();
    match &spec.kind {
        FamilyKind::X { points } => {
            let arity = n + 1 + points.len();
            if arity < 2 {
                return domain("X needs n + 1 + r >= 2");
            }
            let f = ctx.register(mode.spec(arity))?;
            let d = n + 1;
            let all: Vec<usize> = (0..d).collect();
            let consts: Vec<&CurvePoint> = points.iter().collect();
            let mut ecoords = vec![Affine::param(d, 0), sum_form(&curve, d, &all, &consts)?];
            ecoords.extend((1..d).map(|k| Affine::param(d, k)));
            let mut args: Vec<Affine> = (0..d).map(|k| Affine::param(d, k)).collect();
            args.extend(points.iter().map(|p| Affine::constant(d, p.clone())));
            let mut qcoords = vec![QCoord::Fun { f, args }];
            qcoords.extend(spec.gs.iter().enumerate().map(|(i, &g)| QCoord::Fun { f: g, args: vec![Affine::param(d, i + 1)] }));
            Ok(ParamCycle { params: d, ecoords, qcoords })
        }
        FamilyKind::Y { a } => {
            let d = n;
            let all: Vec<usize> = (0..d).collect();
            let mut ecoords = vec![sum_form(&curve, d, &all, &[a])?];
            ecoords.extend((0..d).map(|k| Affine::param(d, k)));
            let qcoords = spec.gs.iter().enumerate().map(|(i, &g)| QCoord::Fun { f: g, args: vec![Affine::param(d, i)] }).collect();
            Ok(ParamCycle { params: d, ecoords, qcoords })
        }
        FamilyKind::Z { j, b1, b2 } => {
            if *j == 0 || *j > n {
                return domain(format!("Z index j = {j} out of range 1..={n}"));
            }
            check_const(ctx, spec.gs[j - 1], b2)?;
            // parameters: x, then y_i for i != j in order
            let d = n;
            let all: Vec<usize> = (0..d).collect();
            let mut ecoords = vec![Affine::param(d, 0), sum_form(&curve, d, &all, &[b1, b2])?];
            ecoords.extend((1..d).map(|k| Affine::param(d, k)));
            let mut qcoords = Vec::with_capacity(n);
            let mut k = 1;
            for (i, &g) in spec.gs.iter().enumerate() {
                if i + 1 == *j {
                    qcoords.push(QCoord::Const { f: g, args: vec![b2.clone()] });
                } else {
                    qcoords.push(QCoord::Fun { f: g, args: vec![Affine::param(d, k)] });
                    k += 1;
                }
            }
            Ok(ParamCycle { params: d, ecoords, qcoords })
        }
    }
}

/// `(x, -x - sum y_i - b1, y_1..^y_j..y_n; g_1(y_1), .., g_n(y_n), g_j(b2))`,
/// the family that kills `nu` contributions. `j` is 1-based.
pub fn kill_nu(ctx: &Context, gs: &[FunId], j: usize, b1: &CurvePoint, b2: &CurvePoint) -> Result<ParamCycle> {
    let n = gs.len();
    if j == 0 || j > n {
        return domain(format!("kill index j = {j} out of range 1..={n}"));
    }
    check_const(ctx, gs[j - 1], b2)?;
    let curve = ctx.curve();
    let d = n + 1;
    let all: Vec<usize> = (0..d).collect();
    let mut ecoords = vec![Affine::param(d, 0), sum_form(curve, d, &all, &[b1])?];
    ecoords.extend((1..d).filter(|&k| k != j).map(|k| Affine::param(d, k)));
    let mut qcoords: Vec<QCoord> =
        gs.iter().enumerate().map(|(i, &g)| QCoord::Fun { f: g, args: vec![Affine::param(d, i + 1)] }).collect();
    qcoords.push(QCoord::Const { f: gs[j - 1], args: vec![b2.clone()] });
    Ok(ParamCycle { params: d, ecoords, qcoords })
}

/// `(-sum y_i - z, y_1..y_n; g_1(y_1), .., g_n(y_n), g_i(z))`, the family
/// that kills `mu` contributions. `i` is 1-based.
pub fn kill_mu(ctx: &Context, gs: &[FunId], i: usize) -> Result<ParamCycle> {
    let n = gs.len();
    if i == 0 || i > n {
        return domain(format!("kill index i = {i} out of range 1..={n}"));
    }
    let d = n + 1;
    let all: Vec<usize> = (0..d).collect();
    let mut ecoords = vec![sum_form(ctx.curve(), d, &all, &[])?];
    ecoords.extend((0..n).map(|k| Affine::param(d, k)));
    let mut qcoords: Vec<QCoord> =
        gs.iter().enumerate().map(|(k, &g)| QCoord::Fun { f: g, args: vec![Affine::param(d, k)] }).collect();
    qcoords.push(QCoord::Fun { f: gs[i - 1], args: vec![Affine::param(d, n)] });
    Ok(ParamCycle { params: d, ecoords, qcoords })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DecorationKind {
    Eta,
    Mu,
    Nu,
}

/// The tabloid projector `rho`: the row sum of the two-row tabloid with
/// rows `{1, 3, .., b}` and `{2}`.
fn eta_projector(b: usize) -> Result<crate::symgroup::GroupAlgebraElement> {
    let mut first = vec![1];
    first.extend(3..=b);
    Ok(YoungShape::tabloid(vec![first, vec![2]])?.row_sum())
}

/// The highest weight vector `e1 e2 e1.. - e2 e1 e1..` of `rho . h1^{(x) b}`.
fn column_vector(b: usize) -> TensorVec {
    let mut v = TensorVec::basis(tensor_basis(b, &[1]));
    v.add(tensor_basis(b, &[0]), Q::from_integer((-1).into()));
    v
}

/// `rho` applied to [`column_vector`], scaled so that the first slot
/// carries coefficient `-1`: `(b - 1) e1 e2 e1.. - sum_{k != 2} (e2 in slot k)`.
fn eta_vector(b: usize) -> Result<TensorVec> {
    let v = eta_projector(b)?.act(&column_vector(b), |p, w| (p.permute(w), 1));
    let lead = v.coefficient(&tensor_basis(b, &[0]));
    Ok(v.scaled(&(-lead.recip())))
}

/// Attaches the decoration of the given kind: `eta` and `nu` carry the
/// highest weight vector cut out by the tabloid projector `rho` (label
/// `Sym^{b-2} h1(E)(-1)`), `mu` carries `e1^b` (label `Sym^b h1(E)`).
pub fn decorate(ctx: &Context, kind: DecorationKind, z: &ParamCycle) -> Result<CycleSum> {
    let b = z.b();
    let vec = match kind {
        DecorationKind::Eta | DecorationKind::Nu => {
            if b < 2 {
                return structural("eta/nu decorations need at least two E factors");
            }
            eta_vector(b)?
        }
        DecorationKind::Mu => TensorVec::basis(vec![1; b]),
    };
    let s: CycleSum = vec.iter().map(|(w, c)| (Term::decorated(z.clone(), w.clone()), c.clone())).collect();
    canonicalize(ctx, &s)
}

/// The `eta` decoration computed on the cycle side: `rho^t` permutes the
/// `E` factors of `Z` with signs while the word stays [`column_vector`].
/// Agrees with [`decorate`] up to a nonzero scalar.
pub fn decorate_by_transpose(ctx: &Context, z: &ParamCycle) -> Result<CycleSum> {
    let b = z.b();
    let t = eta_projector(b)?.transpose();
    let word = column_vector(b);
    let mut s = CycleSum::new();
    for (p, c) in t.terms() {
        let mut moved = z.clone();
        moved.ecoords = p.permute(&z.ecoords);
        for (w, a) in &word {
            s.add(Term::decorated(moved.clone(), w.clone()), c * a);
        }
    }
    canonicalize(ctx, &s)
}

/// `eta_{h1(E)}(p) = (p) (x) e1`.
pub fn eta_point(ctx: &Context, p: &CurvePoint) -> Result<CycleSum> {
    canonicalize(ctx, &CycleSum::single(Term::decorated(ParamCycle::point(p.clone()), vec![1]), Q::from_integer(1.into())))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Violation {
    Overlap { first: String, second: String, point: CurvePoint },
    ContainsZero { function: String },
    ContainsTwoTorsion { function: String, point: CurvePoint },
    Even { function: String },
    TooFewPoints { found: usize, needed: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdmissibilityReport {
    pub pass: bool,
    pub violations: Vec<Violation>,
}

/// Checks the divisor-level conditions on `g_1..g_n`. In `Fn` mode the
/// supports must also avoid `u, v, u + v`.
pub fn check_admissible(curve: &EllipticCurve, gs: &[FunctionSpec], mode: &FunctionMode) -> Result<AdmissibilityReport> {
    let mut divs = Vec::with_capacity(gs.len());
    for g in gs {
        let d = g.divisor(curve)?;
        if !is_principal(curve, &d)? {
            return Err(Error::Domain(format!("{}: divisor {d} is not principal (Abel's criterion)", g.name())));
        }
        divs.push(d);
    }
    let mut violations = Vec::new();
    for i in 0..gs.len() {
        for j in i + 1..gs.len() {
            for p in divs[i].support() {
                if divs[j].terms().contains_key(&p) {
                    violations.push(Violation::Overlap { first: gs[i].name(), second: gs[j].name(), point: p });
                }
            }
        }
    }
    let torsion = match mode {
        FunctionMode::Fbar => Vec::new(),
        FunctionMode::Fn { u, v } => vec![u.clone(), v.clone(), curve.add(u, v)?],
    };
    let mut distinct = std::collections::BTreeSet::new();
    for (g, d) in gs.iter().zip(&divs) {
        if d.terms().contains_key(&CurvePoint::Infinity) {
            violations.push(Violation::ContainsZero { function: g.name() });
        }
        for t in &torsion {
            if d.terms().contains_key(t) {
                violations.push(Violation::ContainsTwoTorsion { function: g.name(), point: t.clone() });
            }
        }
        if !d.is_empty() && d.negated_points(curve) == *d {
            violations.push(Violation::Even { function: g.name() });
        }
        distinct.extend(d.support());
    }
    if distinct.len() < 2 * gs.len() {
        violations.push(Violation::TooFewPoints { found: distinct.len(), needed: 2 * gs.len() });
    }
    Ok(AdmissibilityReport { pass: violations.is_empty(), violations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::fixtures::{curve_37a1, generator_37a1};
    use crate::divisor::q_int;
    use crate::report::{fixture_config, Config};
    use crate::FormalDivisor;

    fn setup() -> (Config, Context, Vec<FunId>) {
        let cfg = fixture_config().validate().unwrap();
        let mut ctx = Context::new(cfg.curve.clone());
        let ids = cfg.functions.iter().map(|f| ctx.register(f.clone()).unwrap()).collect();
        (cfg, ctx, ids)
    }

    fn user(name: &str, terms: &[(i64, i64)]) -> FunctionSpec {
        let e = curve_37a1();
        let p = generator_37a1();
        let d = FormalDivisor::from_terms(terms.iter().map(|&(k, c)| (e.scalar_mul(k, &p).unwrap(), q_int(c))));
        FunctionSpec::user(&e, name, d).unwrap()
    }

    #[test]
    fn eta_vector_coefficients() {
        for b in 2..=5 {
            let v = eta_vector(b).unwrap();
            assert_eq!(v.coefficient(&tensor_basis(b, &[0])), q_int(-1));
            assert_eq!(v.coefficient(&tensor_basis(b, &[1])), q_int(b as i64 - 1));
            for k in 2..b {
                assert_eq!(v.coefficient(&tensor_basis(b, &[k])), q_int(-1));
            }
            assert_eq!(v.len(), b);
        }
    }

    #[test]
    fn transpose_decoration_is_proportional() {
        let (cfg, mut ctx, ids) = setup();
        for n in 0..=2 {
            for r in 0..=1 {
                if n + 1 + r < 2 {
                    continue;
                }
                let kind = FamilyKind::X { points: cfg.points[..r].to_vec() };
                let x = build_family(&mut ctx, &FamilySpec { kind, gs: ids[..n].to_vec() }, &cfg.mode).unwrap();
                let a = decorate(&ctx, DecorationKind::Eta, &x).unwrap();
                let b = decorate_by_transpose(&ctx, &x).unwrap();
                let (t, c) = a.iter().next().unwrap();
                let ratio = c / b.coefficient(t);
                assert_eq!(b.scaled(&ratio), a, "n = {n}, r = {r}");
            }
        }
    }

    #[test]
    fn mu_carries_top_weight() {
        let (cfg, mut ctx, ids) = setup();
        let y = build_family(&mut ctx, &FamilySpec { kind: FamilyKind::Y { a: cfg.points[0].clone() }, gs: ids[..2].to_vec() }, &cfg.mode)
            .unwrap();
        assert_eq!((y.b(), y.c()), (3, 2));
        let m = decorate(&ctx, DecorationKind::Mu, &y).unwrap();
        assert_eq!(m.len(), 1);
        assert!(m.iter().all(|(t, _)| t.word.as_deref() == Some(&[1, 1, 1][..])));
    }

    #[test]
    fn eta_needs_two_factors() {
        let (cfg, mut ctx, _) = setup();
        let y = build_family(&mut ctx, &FamilySpec { kind: FamilyKind::Y { a: cfg.points[0].clone() }, gs: vec![] }, &cfg.mode).unwrap();
        assert_eq!(y.b(), 1);
        assert!(matches!(decorate(&ctx, DecorationKind::Eta, &y), Err(Error::Structural(_))));
    }

    #[test]
    fn z_rejects_support_point() {
        let (cfg, mut ctx, ids) = setup();
        let p = generator_37a1();
        let kind = FamilyKind::Z { j: 1, b1: cfg.points[0].clone(), b2: p };
        let err = build_family(&mut ctx, &FamilySpec { kind, gs: ids[..1].to_vec() }, &cfg.mode).unwrap_err();
        assert!(matches!(err, Error::Degenerate(_)));
        let kind = FamilyKind::Z { j: 2, b1: cfg.points[0].clone(), b2: cfg.points[1].clone() };
        assert!(build_family(&mut ctx, &FamilySpec { kind, gs: ids[..1].to_vec() }, &cfg.mode).is_err());
    }

    #[test]
    fn kill_family_shapes() {
        let (cfg, ctx, ids) = setup();
        let k = kill_mu(&ctx, &ids[..2], 1).unwrap();
        assert_eq!((k.params, k.b(), k.c()), (3, 3, 3));
        let k = kill_nu(&ctx, &ids[..2], 2, &cfg.points[0], &cfg.points[1]).unwrap();
        assert_eq!((k.params, k.b(), k.c()), (3, 3, 3));
        assert!(matches!(k.qcoords.last(), Some(QCoord::Const { .. })));
    }

    #[test]
    fn admissibility_violations() {
        let e = curve_37a1();
        let g = user("g", &[(1, 1), (2, 1), (-1, -1), (4, -1)]);
        let shared = user("h", &[(1, 1), (3, 1), (5, -1), (-1, -1)]);
        let even = user("even", &[(1, 1), (-1, 1), (2, -1), (-2, -1)]);
        let r = check_admissible(&e, &[g.clone(), shared], &FunctionMode::Fbar).unwrap();
        assert!(r.violations.iter().any(|v| matches!(v, Violation::Overlap { .. })));
        let r = check_admissible(&e, &[even], &FunctionMode::Fbar).unwrap();
        assert!(r.violations.iter().any(|v| matches!(v, Violation::Even { .. })));
        assert!(check_admissible(&e, &[g], &FunctionMode::Fbar).unwrap().violations.is_empty());
    }
}
