//! The verification suites. Every check becomes one record; engine errors
//! become failing records.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::{CheckRecord, Config, Report, Status};
use crate::bar::{
    bar_differential, build_motive_chain, coassociative, comodule_span, comultiply, counital, grading_coherence,
    middle_layer_points, nontriviality_witness, render_word, verify_cocycle, BarChain, MotiveChain,
};
use crate::curve::{fixtures, CurvePoint, EllipticCurve};
use crate::cycle::{
    boundary, build_family, decorate, decorate_by_transpose, kill_mu, kill_nu, verify_boundary_formulas, Context,
    CycleSum, DecorationKind, FamilyKind, FamilySpec, FunId, ParamCycle, Term,
};
use crate::divisor::{
    alt_project_square, make_fbar_divisor, make_fn_divisor, make_hn_divisor, restrict_to_fiber, FunctionSpec,
    NamedClass, ProductDivisorClass, SymPoint,
};
use crate::error::{Error, Result};
use crate::gl2::{clebsch_gordan, plethysm2, Character, PureMotive, SquareKind};
use crate::scalar::{rational_string, Field};
use crate::symgroup::{
    alt_signed_group, hook_length_dimension, partitions, standard_tableaux, GroupAlgebraElement, Permutation,
    SignConvention, YoungShape,
};
use crate::Q;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Projectors,
    Divisors,
    Boundaries,
    Bar,
    All,
}

impl Suite {
    pub fn name(&self) -> &'static str {
        match self {
            Suite::Projectors => "projectors",
            Suite::Divisors => "divisors",
            Suite::Boundaries => "boundaries",
            Suite::Bar => "bar",
            Suite::All => "all",
        }
    }
}

impl std::str::FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Suite> {
        match s {
            "projectors" => Ok(Suite::Projectors),
            "divisors" => Ok(Suite::Divisors),
            "boundaries" => Ok(Suite::Boundaries),
            "bar" => Ok(Suite::Bar),
            "all" => Ok(Suite::All),
            other => Err(Error::Input(format!(
                "unknown suite {other:?} (expected projectors, divisors, boundaries, bar or all)"
            ))),
        }
    }
}

/// Runs one suite (or all of them) on a validated configuration.
pub fn run_suite(cfg: &Config, suite: Suite) -> Report {
    let mut records = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    if matches!(suite, Suite::Projectors | Suite::All) {
        records.extend(projector_checks(cfg, &mut rng));
    }
    if matches!(suite, Suite::Divisors | Suite::All) {
        records.extend(divisor_checks(cfg, &mut rng));
    }
    if matches!(suite, Suite::Boundaries | Suite::All) {
        records.extend(boundary_checks(cfg));
    }
    if matches!(suite, Suite::Bar | Suite::All) {
        records.extend(bar_checks(cfg));
    }
    Report::new(suite.name(), cfg.seed, config_echo(cfg), records)
}

fn config_echo(cfg: &Config) -> Value {
    let mut v = serde_json::to_value(&cfg.raw).expect("config serializes");
    v["points"] = Value::Array(cfg.points.iter().map(super::point_value).collect());
    v
}

fn guarded(id: &str, anchor: &str, f: impl FnOnce() -> Result<(bool, Value)>) -> CheckRecord {
    match f() {
        Ok((ok, details)) => CheckRecord::new(id, anchor, Status::of(ok), details),
        Err(e) => CheckRecord::new(id, anchor, Status::Fail, json!({ "error": e.to_string() })),
    }
}

fn q(i: i64) -> Q {
    Q::from_integer(i.into())
}

fn text<T: std::fmt::Display>(t: &T) -> String {
    t.to_string()
}

// ---------------------------------------------------------------- projectors

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

fn projector_checks(cfg: &Config, rng: &mut ChaCha8Rng) -> Vec<CheckRecord> {
    let b_max = cfg.bounds.b_max;
    let mut out = Vec::new();
    out.push(guarded("projectors.young.quasi_idempotent", "e_T·e_T = (b!/dim S^λ)·e_T", || {
        let mut checked = 0;
        let mut failures = Vec::new();
        let mut per_b = BTreeMap::new();
        for b in 1..=b_max {
            let mut count = 0;
            for shape in partitions(b) {
                let lambda = factorial(b) / hook_length_dimension(&shape);
                for t in standard_tableaux(&shape) {
                    let e = t.young_symmetrizer()?;
                    let ok = e.multiply(&e)? == e.scaled(&q(lambda as i64))
                        && e.quasi_idempotent_constant()? == Some(q(lambda as i64));
                    if !ok {
                        failures.push(format!("{:?}", t.rows()));
                    }
                    count += 1;
                }
            }
            per_b.insert(b.to_string(), count);
            checked += count;
        }
        Ok((failures.is_empty(), json!({ "b_max": b_max, "tableaux": checked, "per_b": per_b, "failures": failures })))
    }));
    out.push(guarded("projectors.young.transpose", "𝒵·p := pᵗ(𝒵)", || {
        let mut checked = 0;
        let mut failures = Vec::new();
        for b in 1..=b_max {
            for shape in partitions(b) {
                for t in standard_tableaux(&shape) {
                    let e = t.young_symmetrizer()?;
                    let et = e.transpose();
                    let ok = et.transpose() == e && et == t.transpose_projector()?;
                    if !ok {
                        failures.push(format!("{:?}", t.rows()));
                    }
                    checked += 1;
                }
            }
        }
        Ok((failures.is_empty(), json!({ "tableaux": checked, "failures": failures })))
    }));
    out.push(guarded("projectors.tabloid.row_sum", "ρ_{k,l}", || {
        let mut checked = 0;
        let mut failures = Vec::new();
        for b in 1..=b_max {
            for shape in partitions(b) {
                let order: u64 = shape.iter().map(|&l| factorial(l)).product();
                for t in standard_tableaux(&shape) {
                    let c = YoungShape::tabloid(t.rows().to_vec())?.row_sum();
                    if c.multiply(&c)? != c.scaled(&q(order as i64)) {
                        failures.push(format!("{:?}", t.rows()));
                    }
                    checked += 1;
                }
            }
        }
        Ok((failures.is_empty(), json!({ "tabloids": checked, "failures": failures })))
    }));
    out.push(guarded("projectors.group_algebra.associative", "ℚ[Σ_b]", || {
        let mut triples = 0;
        let all3 = Permutation::all(3);
        for a in &all3 {
            for b in &all3 {
                for c in &all3 {
                    let (a, b, c) = (
                        GroupAlgebraElement::from_perm(a.clone()),
                        GroupAlgebraElement::from_perm(b.clone()),
                        GroupAlgebraElement::from_perm(c.clone()),
                    );
                    if a.multiply(&b)?.multiply(&c)? != a.multiply(&b.multiply(&c)?)? {
                        return Ok((false, json!({ "failure": "basis triple in S_3" })));
                    }
                    triples += 1;
                }
            }
        }
        let mut random = 0;
        for b in 4..=b_max.max(4) {
            let perms = Permutation::all(b);
            for _ in 0..5 {
                let [x, y, z] = [0; 3].map(|_| random_element(rng, b, &perms));
                if x.multiply(&y)?.multiply(&z)? != x.multiply(&y.multiply(&z)?)? {
                    return Ok((false, json!({ "failure": format!("random triple in S_{b}") })));
                }
                random += 1;
            }
        }
        Ok((true, json!({ "exhaustive_s3_triples": triples, "random_triples": random })))
    }));
    out.push(guarded("projectors.right_action", "𝒵·σ := ((−1)^{signature(σ)}(σ)⁻¹)(𝒵)", || {
        let perms = Permutation::all(3);
        let word = |p: &Permutation, w: &Vec<usize>| (p.permute(w), 1i64);
        let v: crate::formal::Lin<Vec<usize>> = [(vec![1, 2, 3], q(1)), (vec![2, 1, 3], q(-2)), (vec![3, 3, 1], q(5))]
            .into_iter()
            .collect();
        let mut pairs = 0;
        for a in perms.iter().step_by(1) {
            for b in &perms {
                let pa = GroupAlgebraElement::from_perm(a.clone()).plus(&GroupAlgebraElement::identity(3))?;
                let pb = GroupAlgebraElement::from_perm(b.clone()).scaled(&q(3));
                let twice = pb.transpose().act(&pa.transpose().act(&v, word), word);
                let once = pa.multiply(&pb)?.transpose().act(&v, word);
                if twice != once {
                    return Ok((false, json!({ "failure": format!("{a} then {b}") })));
                }
                pairs += 1;
            }
        }
        Ok((true, json!({ "pairs": pairs, "convention": "signature" })))
    }));
    out.push(sigma_action_record());
    out.push(guarded("projectors.alt_signed", "Alt_{G_c}·Alt_{G_c} = 2^c·c!·Alt_{G_c}", || {
        let mut ok = true;
        let mut per_c = BTreeMap::new();
        for c in 0..=3usize {
            let a = alt_signed_group(c);
            let order = (factorial(c) << c) as i64;
            let good = a.multiply(&a)?.terms == a.terms.scaled(&q(order));
            ok &= good;
            per_c.insert(c.to_string(), json!({ "order": order, "ok": good }));
        }
        Ok((ok, json!(per_c)))
    }));
    let lmax = cfg.bounds.label_max;
    out.push(guarded("labels.clebsch_gordan", "Sym^a ⊗ Sym^b = ⊕_k Sym^{a+b−2k}(−k)", || {
        let mut failures = Vec::new();
        let mut pairs = 0;
        for a in 0..=lmax {
            for b in 0..=lmax {
                let (v, w) = (PureMotive::new(a, 0), PureMotive::new(b, 1));
                let cg = clebsch_gordan(v, w);
                let oracle = Character::of(v).product(&Character::of(w)).decompose();
                let dims = cg.dimension() == (a as u64 + 1) * (b as u64 + 1);
                if !dims || oracle.as_ref() != Some(&cg) {
                    failures.push(format!("{a},{b}"));
                }
                pairs += 1;
            }
        }
        Ok((failures.is_empty(), json!({ "max": lmax, "pairs": pairs, "failures": failures })))
    }));
    out.push(guarded("labels.plethysm", "(n+1)² = dim Sym² + dim Λ²", || {
        let mut failures = Vec::new();
        for n in 0..=lmax {
            let v = PureMotive::new(n, 1);
            let s = plethysm2(SquareKind::Sym, v);
            let w = plethysm2(SquareKind::Wedge, v);
            let dims = s.dimension() + w.dimension() == (n as u64 + 1).pow(2);
            let ch = Character::of(v);
            let oracle = ch.square(SquareKind::Sym).decompose() == Some(s) && ch.square(SquareKind::Wedge).decompose() == Some(w);
            if !(dims && oracle) {
                failures.push(n);
            }
        }
        Ok((failures.is_empty(), json!({ "max": lmax, "failures": failures })))
    }));
    out
}

fn random_element(rng: &mut ChaCha8Rng, b: usize, perms: &[Permutation]) -> GroupAlgebraElement {
    let terms: Vec<(Permutation, Q)> =
        (0..4).map(|_| (perms[rng.gen_range(0..perms.len())].clone(), q(rng.gen_range(-3..=3)))).collect();
    GroupAlgebraElement::from_terms(b, terms).expect("degree b")
}

/// Both sign readings of the right action, per cycle type, and whether each
/// reading is multiplicative (so that it defines an action at all).
fn sigma_action_record() -> CheckRecord {
    let readings = [("signature", SignConvention::Signature), ("transposition_count_plus_one", SignConvention::TranspositionCountPlusOne)];
    let mut classes = Vec::new();
    let mut disagree = Vec::new();
    for b in 2..=4 {
        let mut seen = BTreeSet::new();
        for p in Permutation::all(b) {
            let mut cycle_type: Vec<usize> = p.cycles().iter().map(Vec::len).collect();
            cycle_type.sort_unstable_by(|a, b| b.cmp(a));
            if !seen.insert(cycle_type.clone()) {
                continue;
            }
            let a = SignConvention::Signature.sign(&p);
            let c = SignConvention::TranspositionCountPlusOne.sign(&p);
            let entry = json!({
                "b": b,
                "cycle_type": cycle_type,
                "representative": text(&p),
                "transpositions": p.transposition_count(),
                "signature": a,
                "transposition_count_plus_one": c,
            });
            if a != c {
                disagree.push(entry.clone());
            }
            classes.push(entry);
        }
    }
    let mut multiplicative = serde_json::Map::new();
    for (name, conv) in readings {
        let perms = Permutation::all(3);
        let ok = perms.iter().all(|s| {
            perms.iter().all(|t| conv.sign(s) * conv.sign(t) == conv.sign(&s.compose(t).expect("same degree")))
        });
        multiplicative.insert(name.to_string(), json!(ok));
    }
    let details = json!({
        "readings": {
            "signature": "(−1)^{signature(σ)} = sgn(σ)",
            "transposition_count_plus_one": "(−1)^{|σ|+1}",
        },
        "working_convention": "signature",
        "classes": classes,
        "disagreements": disagree.len(),
        "multiplicative": multiplicative,
    });
    CheckRecord::new(
        "projectors.sigma_action_sign",
        "(−1)^{signature(σ)} vs (−1)^{(|σ|+1)}",
        Status::Flagged,
        details,
    )
}

// ---------------------------------------------------------------- divisors

fn class_json(c: &ProductDivisorClass) -> Value {
    Value::Object(c.terms().iter().map(|(k, v)| (k.to_string(), Value::String(rational_string(v)))).collect())
}

/// The curve used for finite-field checks: the configured curve if it is
/// already over `F_p`, else its reduction mod `p`, else the split fixture.
fn fiber_curve(cfg: &Config) -> (EllipticCurve, String) {
    let p = cfg.bounds.fiber_prime;
    if cfg.curve.field() == Field::Prime(p) {
        return (cfg.curve.clone(), "configured curve".into());
    }
    let field = Field::Prime(p);
    let reduced = (|| {
        let [a1, a2, a3, a4, a6] = cfg.curve.coefficients().map(|c| match c {
            crate::scalar::FieldScalar::Rat(r) => field.from_rational(r),
            _ => Err(Error::Domain("not rational".into())),
        });
        EllipticCurve::from_scalars(field, a1?, a2?, a3?, a4?, a6?)
    })();
    match reduced {
        Ok(e) if cfg.curve.field() == Field::Rational => (e, format!("configured curve mod {p}")),
        _ => (fixtures::split_two_torsion(p), format!("y^2 = x(x-2)(x-5) over F_{p}")),
    }
}

/// A curve with three rational points of order two for `h_n` and `F_n`.
fn torsion_curve(cfg: &Config) -> Result<(EllipticCurve, CurvePoint, CurvePoint, String)> {
    let t = cfg.curve.full_two_torsion()?;
    if t.len() >= 3 {
        return Ok((cfg.curve.clone(), t[0].clone(), t[1].clone(), "configured curve".into()));
    }
    let p = cfg.bounds.fiber_prime;
    let e = fixtures::split_two_torsion(p);
    let t = e.full_two_torsion()?;
    Ok((e, t[0].clone(), t[1].clone(), format!("y^2 = x(x-2)(x-5) over F_{p}")))
}

fn divisor_checks(cfg: &Config, rng: &mut ChaCha8Rng) -> Vec<CheckRecord> {
    let curve = &cfg.curve;
    let mut out = Vec::new();
    out.push(guarded("divisors.fbar.n2", "(F̄₂) = Δ_E+Ψ−2{E×{0}}−2{{0}×E}", || {
        let c = make_fbar_divisor(2)?;
        let mut want = ProductDivisorClass::new(2);
        want.add_int(NamedClass::diag(1, 2), 1)?;
        want.add_int(NamedClass::anti(1, 2), 1)?;
        want.add_int(NamedClass::D { i: 1, q: CurvePoint::Infinity }, -2)?;
        want.add_int(NamedClass::D { i: 2, q: CurvePoint::Infinity }, -2)?;
        let symmetric = c.swap_factors()? == c;
        Ok((c == want && symmetric, json!({ "class": class_json(&c), "swap_invariant": symmetric })))
    }));
    out.push(guarded("divisors.fbar.n3", "(F̄ₙ)= −(n)Σ D̄_i^{(n)} + Σ Δ_{i,j}^{(n)} + D̄_{n+1}^{(n)}", || {
        let c = make_fbar_divisor(3)?;
        let mut ok = c.coefficient(&NamedClass::D { i: 4, q: CurvePoint::Infinity }) == q(1);
        for i in 1..=3 {
            ok &= c.coefficient(&NamedClass::D { i, q: CurvePoint::Infinity }) == q(-3);
            for j in i + 1..=3 {
                ok &= c.coefficient(&NamedClass::diag(i, j)) == q(1);
            }
        }
        ok &= c.terms().len() == 7;
        Ok((ok, json!({ "class": class_json(&c) })))
    }));
    out.push(fiber_record(cfg, rng));
    out.push(guarded("divisors.functions", "(g_i)", || {
        let mut ok = true;
        let mut rows = Vec::new();
        for f in &cfg.functions {
            let d = f.divisor(curve)?;
            let principal = crate::divisor::is_principal(curve, &d)?;
            let degree_zero = d.degree().is_zero();
            ok &= principal && degree_zero;
            rows.push(json!({ "name": f.name(), "divisor": d.to_string(), "degree_zero": degree_zero, "principal": principal }));
        }
        Ok((ok, json!({ "functions": rows })))
    }));
    out.push(guarded("divisors.hn", "(h_n)", || {
        let (e, u, v, source) = torsion_curve(cfg)?;
        let mut ok = true;
        let mut rows = Vec::new();
        for n in 2..=5 {
            let d = make_hn_divisor(&e, n, &u, &v)?;
            let good = d.degree().is_zero() && crate::divisor::is_principal(&e, &d)?;
            ok &= good;
            rows.push(json!({ "n": n, "divisor": d.to_string(), "principal": good }));
        }
        Ok((ok, json!({ "curve": source, "cases": rows })))
    }));
    let alt = |c: &ProductDivisorClass| alt_project_square(curve, c);
    let single = |cl: NamedClass| -> Result<ProductDivisorClass> {
        let mut c = ProductDivisorClass::new(2);
        c.add_int(cl, 1)?;
        Ok(c)
    };
    out.push(guarded("divisors.alt.delta", "=2(Δ−Ψ)", || {
        let got = alt(&single(NamedClass::diag(1, 2))?)?;
        let want = single(NamedClass::diag(1, 2))?.minus(&single(NamedClass::anti(1, 2))?)?.scaled(&q(2));
        Ok((got == want, json!({ "alt_delta": class_json(&got) })))
    }));
    out.push(guarded("divisors.alt.psi", "Alt(Ψ)=2(Ψ−Δ)", || {
        let got = alt(&single(NamedClass::anti(1, 2))?)?;
        let want = single(NamedClass::anti(1, 2))?.minus(&single(NamedClass::diag(1, 2))?)?.scaled(&q(2));
        Ok((got == want, json!({ "alt_psi": class_json(&got) })))
    }));
    out.push(guarded("divisors.alt.symmetric", "Alt(CH⁰ symmetric classes) = 0", || {
        let mut rows = Vec::new();
        let mut ok = true;
        let mut classes = vec![single(NamedClass::D { i: 1, q: CurvePoint::Infinity })?, single(NamedClass::D { i: 2, q: CurvePoint::Infinity })?];
        classes.push(single(NamedClass::diag(1, 2))?.plus(&single(NamedClass::anti(1, 2))?)?);
        classes.push(make_fbar_divisor(2)?);
        for c in &classes {
            let a = alt(c)?;
            ok &= a.is_empty();
            rows.push(json!({ "class": class_json(c), "alt": class_json(&a) }));
        }
        Ok((ok, json!({ "classes": rows })))
    }));
    out.push(guarded("divisors.alt.idempotent", "Alt∘Alt = 4·Alt", || {
        let mut c = single(NamedClass::diag(1, 2))?;
        c.add_int(NamedClass::anti(1, 2), 3)?;
        c.add_int(NamedClass::D { i: 1, q: CurvePoint::Infinity }, -2)?;
        let a = alt(&c)?;
        let idem = alt(&a)? == a.scaled(&q(4));
        let swap = alt(&c.swap_factors()?)? == a.swap_factors()?;
        Ok((idem && swap, json!({ "idempotent_up_to_4": idem, "commutes_with_swap": swap })))
    }));
    out.push(fn_display_record(cfg));
    out
}

fn fiber_record(cfg: &Config, rng: &mut ChaCha8Rng) -> CheckRecord {
    let anchor = "(F̄ₙ)= −(n)Σ D̄_i^{(n)} + Σ Δ_{i,j}^{(n)} + D̄_{n+1}^{(n)}";
    guarded("divisors.fbar.fibers", anchor, || {
        let (e, source) = fiber_curve(cfg);
        let pts: Vec<CurvePoint> = e.enumerate_points()?.into_iter().filter(|p| !p.is_infinity()).collect();
        let trials = cfg.bounds.fiber_trials;
        let mut ok = true;
        let mut rows = Vec::new();
        for n in 2..=4usize {
            let class = make_fbar_divisor(n)?;
            for i in 1..=n {
                let generic: Vec<SymPoint> = (1..=n).filter(|j| *j != i).map(|j| SymPoint::generic(&format!("q{j}"))).collect();
                let sym = restrict_to_fiber(&e, &class, i, &generic)?;
                let symbolic = sym.degree().is_zero() && sym.is_principal(&e)?;
                let mut passed = 0;
                let mut rejected = 0;
                while passed < trials {
                    if rejected > 100 * trials {
                        return Err(Error::Degenerate(format!("no generic fiber found for n = {n}, i = {i}")));
                    }
                    let fixed: Vec<SymPoint> =
                        (1..n).map(|_| SymPoint::constant(pts[rng.gen_range(0..pts.len())].clone())).collect();
                    let d = match restrict_to_fiber(&e, &class, i, &fixed) {
                        Ok(d) => d.evaluate(&e, &BTreeMap::new())?,
                        Err(Error::Degenerate(_)) => {
                            rejected += 1;
                            continue;
                        }
                        Err(err) => return Err(err),
                    };
                    if d.degree().is_zero() && d.point_sum(&e)?.is_infinity() {
                        passed += 1;
                    } else {
                        ok = false;
                        rows.push(json!({ "n": n, "i": i, "counterexample": d.to_string() }));
                        break;
                    }
                }
                ok &= symbolic;
                rows.push(json!({ "n": n, "i": i, "symbolic": symbolic, "random_passed": passed, "rejected": rejected }));
            }
        }
        Ok((ok, json!({ "curve": source, "trials_per_coordinate": trials, "fibers": rows })))
    })
}

/// The displayed `(F_n)` against the divisor of the defining product.
fn fn_display_record(cfg: &Config) -> CheckRecord {
    let id = "divisors.fn_display";
    let anchor = "(Fₙ) display vs F̄ₙ·h⁻¹ₙ(z₂)⋯h⁻¹ₙ(zₙ)";
    let body = || -> Result<(bool, Value)> {
        let (e, u, v, source) = torsion_curve(cfg)?;
        let mut consistent = true;
        let mut rows = Vec::new();
        for n in 2..=4 {
            let cmp = make_fn_divisor(&e, n, &u, &v)?;
            consistent &= cmp.consistent();
            rows.push(json!({
                "n": n,
                "product_reading": class_json(&cmp.product),
                "displayed_reading": class_json(&cmp.displayed),
                "displayed_minus_product": class_json(&cmp.diff),
            }));
        }
        let details = json!({
            "curve": source,
            "u": u.to_string(),
            "v": v.to_string(),
            "cycle_engine_uses": "product_reading",
            "cases": rows,
        });
        Ok((consistent, details))
    };
    match body() {
        Ok((true, d)) => CheckRecord::new(id, anchor, Status::Pass, d),
        Ok((false, d)) => CheckRecord::new(id, anchor, Status::Flagged, d),
        Err(e) => CheckRecord::new(id, anchor, Status::Fail, json!({ "error": e.to_string() })),
    }
}

// ---------------------------------------------------------------- boundaries

fn context(cfg: &Config) -> Result<(Context, Vec<FunId>)> {
    let mut ctx = Context::new(cfg.curve.clone());
    let ids = cfg.functions.iter().map(|f: &FunctionSpec| ctx.register(f.clone())).collect::<Result<Vec<_>>>()?;
    Ok((ctx, ids))
}

fn dd_zero(ctx: &Context, s: &CycleSum) -> Result<bool> {
    Ok(boundary(ctx, &boundary(ctx, s)?)?.is_zero())
}

fn bare(z: &ParamCycle) -> CycleSum {
    CycleSum::single(Term::bare(z.clone()), Q::one())
}

fn boundary_checks(cfg: &Config) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    let (mut ctx, ids) = match context(cfg) {
        Ok(c) => c,
        Err(e) => return vec![CheckRecord::new("boundaries.context", "∂∘∂ = 0", Status::Fail, json!({ "error": e.to_string() }))],
    };
    let n_max = cfg.bounds.n_max.min(ids.len());
    for n in 0..=n_max {
        for r in 0..=cfg.bounds.r_max {
            if n + 1 + r < 2 {
                continue;
            }
            let gs = &ids[..n];
            let points = &cfg.points[..r];
            out.push(guarded(&format!("boundaries.dd.n{n}.r{r}"), "∂∘∂ = 0", || dd_check(&mut ctx, cfg, gs, points)));
            out.push(guarded(&format!("boundaries.formulas.n{n}.r{r}"), "∂η, ∂μ, ∂ν", || {
                let chk = verify_boundary_formulas(&mut ctx, gs, points, &cfg.mode)?;
                let details = json!({
                    "groups_match": chk.groups_match(),
                    "nu_vanishes": chk.nu_vanishes(),
                    "kills_reproduce": chk.kills_reproduce(),
                    "check": chk,
                });
                Ok((chk.passes(), details))
            }));
        }
    }
    out
}

fn dd_check(ctx: &mut Context, cfg: &Config, gs: &[FunId], points: &[CurvePoint]) -> Result<(bool, Value)> {
    let curve = cfg.curve.clone();
    let mode = &cfg.mode;
    let sum_a = curve.combine(points.iter().map(|p| (1, p)))?;
    let mut rows = Vec::new();
    let mut ok = true;
    let mut push = |name: String, s: &CycleSum, ctx: &Context| -> Result<()> {
        let good = dd_zero(ctx, s)?;
        ok &= good;
        rows.push(json!({ "cycle": name, "terms": s.len(), "dd_zero": good }));
        Ok(())
    };
    let x = build_family(ctx, &FamilySpec { kind: FamilyKind::X { points: points.to_vec() }, gs: gs.to_vec() }, mode)?;
    push("X".into(), &bare(&x), ctx)?;
    let eta = decorate(ctx, DecorationKind::Eta, &x)?;
    push("eta".into(), &eta, ctx)?;
    let eta_t = decorate_by_transpose(ctx, &x)?;
    let proportional = match eta.iter().next() {
        Some((t, c)) => !eta_t.coefficient(t).is_zero() && eta_t.scaled(&(c / eta_t.coefficient(t))) == eta,
        None => eta_t.is_zero(),
    };
    if !gs.is_empty() {
        let base = if points.is_empty() { cfg.points.first().cloned().unwrap_or(CurvePoint::Infinity) } else { sum_a.clone() };
        let y = build_family(ctx, &FamilySpec { kind: FamilyKind::Y { a: base.clone() }, gs: gs.to_vec() }, mode)?;
        push("Y".into(), &bare(&y), ctx)?;
        push("mu".into(), &decorate(ctx, DecorationKind::Mu, &y)?, ctx)?;
        let b2s: Vec<CurvePoint> = if points.is_empty() { cfg.points.iter().take(1).cloned().collect() } else { points.to_vec() };
        for j in 1..=gs.len() {
            for b2 in &b2s {
                let kind = FamilyKind::Z { j, b1: sum_a.clone(), b2: b2.clone() };
                let z = build_family(ctx, &FamilySpec { kind, gs: gs.to_vec() }, mode)?;
                push(format!("Z_{j}"), &bare(&z), ctx)?;
                if z.b() >= 2 {
                    push(format!("nu_{j}"), &decorate(ctx, DecorationKind::Nu, &z)?, ctx)?;
                }
                let k = kill_nu(ctx, gs, j, &sum_a, b2)?;
                push(format!("kill_nu_{j}"), &bare(&k), ctx)?;
            }
            let k = kill_mu(ctx, gs, j)?;
            push(format!("kill_mu_{j}"), &bare(&k), ctx)?;
            push(format!("kill_mu_{j} (mu)"), &decorate(ctx, DecorationKind::Mu, &k)?, ctx)?;
        }
    }
    Ok((ok && proportional, json!({ "eta_transpose_consistent": proportional, "cycles": rows })))
}

// ---------------------------------------------------------------- bar

/// A chain as a list of `{coeff, word}` entries in canonical order.
pub fn chain_words(ctx: &Context, c: &BarChain) -> Value {
    Value::Array(
        c.iter()
            .map(|(w, k)| json!({ "coeff": rational_string(k), "word": render_word(ctx, w) }))
            .collect(),
    )
}

fn chain_summary(mc: &MotiveChain) -> Value {
    json!({
        "n": mc.n,
        "words": mc.chain.len(),
        "candidates": mc.candidates,
        "layers": mc.layers,
    })
}

fn all_ones(c: &BarChain) -> BarChain {
    c.keys().map(|w| (w.clone(), Q::one())).collect()
}

/// All checks on one chain `E(g_1..g_n)`.
pub fn chain_record(ctx: &Context, mc: &MotiveChain, gs: &[FunId]) -> Vec<CheckRecord> {
    let n = mc.n;
    let c = &mc.chain;
    let id = |s: &str| format!("bar.n{n}.{s}");
    let mut out = Vec::new();
    out.push(guarded(&id("cocycle"), "𝓔(g₁,…,gₙ) ∈ H⁰(B(𝒜))", || {
        let chk = verify_cocycle(ctx, c)?;
        let lead: BarChain = c.iter().filter(|(w, _)| w.len() == 1).map(|(w, k)| (w.clone(), k.clone())).collect();
        let lead_alone = verify_cocycle(ctx, &lead)?.ok;
        let spread = all_ones(c);
        let dd = bar_differential(ctx, &bar_differential(ctx, &spread)?)?.is_zero();
        let details = json!({
            "chain": chain_summary(mc),
            "d_chain_zero": chk.ok,
            "residual_words": chk.residual_words,
            "leading_term_alone_is_cocycle": lead_alone,
            "dd_zero_on_all_words": dd,
        });
        Ok((chk.ok && dd && (n == 0 || !lead_alone), details))
    }));
    out.push(guarded(&id("grading"), "Symⁿh¹(E)(−1)", || {
        let g = grading_coherence(ctx, c)?;
        let target = PureMotive::new(n as u32, 1);
        Ok((g.matches(&target), json!({ "target": text(&target), "check": g })))
    }));
    out.push(guarded(&id("coproduct"), "ψ(𝓔) = 𝓔⊗1 + Σ 𝓔^p⊗[p] + … + 1⊗𝓔", || {
        let psi = comultiply(c);
        let mut left = BarChain::new();
        let mut right = BarChain::new();
        for ((a, b), k) in &psi {
            if b.is_empty() {
                left.add(a.clone(), k.clone());
            }
            if a.is_empty() {
                right.add(b.clone(), k.clone());
            }
        }
        let middle = middle_layer_points(c);
        let mut support = BTreeSet::new();
        for &g in gs {
            for p in ctx.spec(g).divisor(ctx.curve())?.support() {
                support.insert(ctx.curve().neg(&p));
                support.insert(p);
            }
        }
        let from_divisors = middle.iter().filter(|p| support.contains(*p)).count();
        let ok = left == *c && right == *c && !middle.is_empty();
        let details = json!({
            "e_tensor_1": left == *c,
            "1_tensor_e": right == *c,
            "middle_points": middle.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
            "middle_points_in_divisors": from_divisors,
            "coproduct_terms": psi.len(),
        });
        Ok((ok, details))
    }));
    out.push(guarded(&id("coalgebra"), "(ψ⊗id)ψ = (id⊗ψ)ψ", || {
        let a = coassociative(c);
        let u = counital(c);
        Ok((a && u, json!({ "coassociative": a, "counital": u })))
    }));
    out.push(guarded(&id("span"), "H⁰(B(𝒜))-comodule", || {
        let s = comodule_span(c);
        Ok((s.closed, json!({ "members": s.members.len(), "layers": s.layers(), "closed": s.closed })))
    }));
    out.push(guarded(&id("witness"), "(P)−(−P) is not the divisor of a function", || {
        let w = nontriviality_witness(ctx, c)?;
        let certs: Vec<Value> = w
            .certificates
            .iter()
            .map(|k| json!({ "divisor": format!("({}) - ({})", k.point, ctx.curve().neg(&k.point)), "double": k.double.to_string() }))
            .collect();
        Ok((w.nontrivial, json!({ "final_layer_words": w.final_layer_words, "certificates": certs })))
    }));
    out.push(guarded(&id("discharge"), "μ, ν kill-cycles", || {
        let d = &mc.discharge;
        Ok((d.succeeded, json!(d)))
    }));
    out
}

fn bar_checks(cfg: &Config) -> Vec<CheckRecord> {
    let (mut ctx, ids) = match context(cfg) {
        Ok(c) => c,
        Err(e) => return vec![CheckRecord::new("bar.context", "𝓔(g₁,…,gₙ)", Status::Fail, json!({ "error": e.to_string() }))],
    };
    let mut out = Vec::new();
    for n in 1..=cfg.bounds.chain_n_max.min(ids.len()) {
        let gs = ids[..n].to_vec();
        match build_motive_chain(&mut ctx, &gs, &[], &cfg.mode) {
            Ok(mc) => out.extend(chain_record(&ctx, &mc, &gs)),
            Err(e) => out.push(CheckRecord::new(format!("bar.n{n}.build"), "𝓔(g₁,…,gₙ)", Status::Fail, json!({ "error": e.to_string() }))),
        }
    }
    out
}

/// `build-motive`: the chain for the first `n` functions, its words and checks.
pub fn run_build_motive(cfg: &Config, n: usize) -> Report {
    let mut records = Vec::new();
    let built = (|| -> Result<(Context, MotiveChain, Vec<FunId>)> {
        let (mut ctx, ids) = context(cfg)?;
        if n == 0 || n > ids.len() {
            return Err(Error::Input(format!("--n must be between 1 and {}", ids.len())));
        }
        let gs = ids[..n].to_vec();
        let mc = build_motive_chain(&mut ctx, &gs, &[], &cfg.mode)?;
        Ok((ctx, mc, gs))
    })();
    match built {
        Ok((ctx, mc, gs)) => {
            let label = text(&PureMotive::new(n as u32, 1));
            let details = json!({ "label": label, "summary": chain_summary(&mc), "words": chain_words(&ctx, &mc.chain) });
            records.push(CheckRecord::new(format!("bar.n{n}.chain"), "𝓔(g₁,…,gₙ)", Status::Pass, details));
            records.extend(chain_record(&ctx, &mc, &gs));
        }
        Err(e) => records.push(CheckRecord::new(format!("bar.n{n}.build"), "𝓔(g₁,…,gₙ)", Status::Fail, json!({ "error": e.to_string() }))),
    }
    Report::new(format!("build-motive n={n}"), cfg.seed, config_echo(cfg), records)
}
