//! Symbolic checks of the boundary formulas for `eta`, `mu` and `nu`.
//!
//! Each right-hand side is a sum of products projected onto the label of
//! the left-hand side. The formulas are stated without signs or
//! multiplicities, so every product is matched with a free coefficient and
//! the solved coefficients are reported.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::boundary::{boundary, product_terms};
use super::family::{build_family, decorate, kill_mu, kill_nu, DecorationKind, FamilyKind, FamilySpec, FunctionMode};
use super::param::{FunId, ParamCycle};
use super::term::{CycleSum, Term};
use super::Context;
use crate::curve::CurvePoint;
use crate::error::Result;
use crate::linalg::solve;
use crate::scalar::rational_string;
use crate::Q;

/// `delta[A (x) B]`: the product `A . B` of two raw family cycles followed
/// by the projector of the target label. The projector is applied in the
/// natural coordinate order of the concatenated cycle, so both factors are
/// taken before canonicalization.
pub fn delta(ctx: &Context, kind: DecorationKind, a: &ParamCycle, b: &ParamCycle) -> Result<CycleSum> {
    let (t, _) = product_terms(&Term::bare(a.clone()), &Term::bare(b.clone()));
    decorate(ctx, kind, &t.cycle)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FormulaGroup {
    DivisorPoint,
    Mu,
    Nu,
}

/// One product on a right-hand side with its solved coefficient.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupMatch {
    pub group: FormulaGroup,
    pub label: String,
    pub coefficient: String,
}

/// Result of matching one boundary against its right-hand side.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormulaMatch {
    pub lhs: String,
    pub lhs_terms: usize,
    pub items: Vec<GroupMatch>,
    /// Boundary terms not covered by any right-hand product.
    pub unmatched: Vec<(String, String)>,
    /// Whether the boundary is exactly a combination of the products.
    pub solved: bool,
}

impl FormulaMatch {
    pub fn ok(&self) -> bool {
        self.solved && self.unmatched.is_empty()
    }
}

/// Whether a kill cycle's boundary contains a given `mu` or `nu` term.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KillMatch {
    pub target: String,
    pub killer: String,
    pub reproduced: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryCheck {
    pub n: usize,
    pub r: usize,
    pub eta: FormulaMatch,
    pub mu: Vec<FormulaMatch>,
    /// Surviving boundary terms of each `nu` on the right-hand side of `eta`.
    pub nu: Vec<(String, Vec<(String, String)>)>,
    pub kills: Vec<KillMatch>,
}

impl BoundaryCheck {
    pub fn nu_vanishes(&self) -> bool {
        self.nu.iter().all(|(_, t)| t.is_empty())
    }

    pub fn groups_match(&self) -> bool {
        self.eta.ok() && self.mu.iter().all(FormulaMatch::ok)
    }

    pub fn kills_reproduce(&self) -> bool {
        self.kills.iter().all(|k| k.reproduced)
    }

    pub fn passes(&self) -> bool {
        self.groups_match() && self.nu_vanishes() && self.kills_reproduce()
    }
}

fn listing(ctx: &Context, s: &CycleSum) -> Vec<(String, String)> {
    s.iter().map(|(t, c)| (t.render(ctx), rational_string(c))).collect()
}

fn match_formula(ctx: &Context, lhs_label: String, lhs: &CycleSum, items: Vec<(FormulaGroup, String, CycleSum)>) -> FormulaMatch {
    let mut covered = std::collections::BTreeSet::<&Term>::new();
    for (_, _, v) in &items {
        covered.extend(v.keys());
    }
    let unmatched: Vec<(String, String)> = lhs
        .iter()
        .filter(|(t, _)| !covered.contains(t))
        .map(|(t, c)| (t.render(ctx), rational_string(c)))
        .collect();
    let cols: Vec<CycleSum> = items.iter().map(|(_, _, v)| v.clone()).collect();
    let sol = solve(&cols, lhs);
    let solved = sol.is_some();
    let coeffs = sol.unwrap_or_else(|| vec![Q::zero(); items.len()]);
    let items = items
        .into_iter()
        .zip(coeffs)
        .map(|((group, label, _), c)| GroupMatch { group, label, coefficient: rational_string(&c) })
        .collect();
    FormulaMatch { lhs: lhs_label, lhs_terms: lhs.len(), items, unmatched, solved }
}

fn pts(ps: &[CurvePoint]) -> String {
    ps.iter().map(super::param::point_text).collect::<Vec<_>>().join(",")
}

fn without(gs: &[FunId], i: usize) -> Vec<FunId> {
    gs.iter().enumerate().filter(|(k, _)| *k != i).map(|(_, g)| *g).collect()
}

fn x_of(ctx: &mut Context, gs: &[FunId], points: &[CurvePoint], mode: &FunctionMode) -> Result<ParamCycle> {
    build_family(ctx, &FamilySpec { kind: FamilyKind::X { points: points.to_vec() }, gs: gs.to_vec() }, mode)
}

fn y_of(ctx: &mut Context, gs: &[FunId], a: &CurvePoint, mode: &FunctionMode) -> Result<ParamCycle> {
    build_family(ctx, &FamilySpec { kind: FamilyKind::Y { a: a.clone() }, gs: gs.to_vec() }, mode)
}

fn z_of(ctx: &mut Context, gs: &[FunId], j: usize, b1: &CurvePoint, b2: &CurvePoint, mode: &FunctionMode) -> Result<ParamCycle> {
    let kind = FamilyKind::Z { j, b1: b1.clone(), b2: b2.clone() };
    build_family(ctx, &FamilySpec { kind, gs: gs.to_vec() }, mode)
}

fn eta_of(ctx: &mut Context, gs: &[FunId], points: &[CurvePoint], mode: &FunctionMode) -> Result<CycleSum> {
    let z = x_of(ctx, gs, points, mode)?;
    decorate(ctx, DecorationKind::Eta, &z)
}

fn mu_of(ctx: &mut Context, gs: &[FunId], a: &CurvePoint, mode: &FunctionMode) -> Result<CycleSum> {
    let z = y_of(ctx, gs, a, mode)?;
    decorate(ctx, DecorationKind::Mu, &z)
}

/// Checks `d eta`, `d mu` and `d nu` for `eta^{a_1..a_r}(g_1..g_n)`, plus
/// whether the kill-cycle families produce each `mu` and `nu` term.
pub fn verify_boundary_formulas(
    ctx: &mut Context,
    gs: &[FunId],
    points: &[CurvePoint],
    mode: &FunctionMode,
) -> Result<BoundaryCheck> {
    let curve = ctx.curve().clone();
    let n = gs.len();
    let r = points.len();
    let sum_a = curve.combine(points.iter().map(|p| (1, p)))?;

    let eta = eta_of(ctx, gs, points, mode)?;
    let d_eta = boundary(ctx, &eta)?;
    let mut items = Vec::new();
    for (i, &g) in gs.iter().enumerate() {
        let rest = without(gs, i);
        for p in ctx.spec(g).divisor(&curve)?.support() {
            let mut pa = points.to_vec();
            pa.push(p.clone());
            let left = x_of(ctx, &rest, &pa, mode)?;
            let v = delta(ctx, DecorationKind::Eta, &left, &ParamCycle::point(p.clone()))?;
            let label = format!("eta^{{{}}}(g^{}) . eta({})", pts(&pa), i + 1, pts(&[p]));
            items.push((FormulaGroup::DivisorPoint, label, v));
        }
    }
    let mut mu_checks = Vec::new();
    let mut nu_checks = Vec::new();
    let mut kills = Vec::new();
    for a in points {
        let shift = curve.add(&sum_a, a)?;
        let y = y_of(ctx, gs, &shift, mode)?;
        let v = delta(ctx, DecorationKind::Eta, &ParamCycle::point(a.clone()), &y)?;
        items.push((FormulaGroup::Mu, format!("eta({}) . mu^{{{}}}", pts(&[a.clone()]), pts(&[shift.clone()])), v));
        mu_checks.push(check_mu(ctx, gs, &shift, mode)?);
        for j in 1..=n {
            let z = z_of(ctx, gs, j, &sum_a, a, mode)?;
            let nu = decorate(ctx, DecorationKind::Nu, &z)?;
            let label = format!("nu_{j}^{{{},{}}}", pts(&[sum_a.clone()]), pts(&[a.clone()]));
            let v = delta(ctx, DecorationKind::Eta, &z, &ParamCycle::point(a.clone()))?;
            items.push((FormulaGroup::Nu, format!("{label} . eta({})", pts(&[a.clone()])), v));
            nu_checks.push((label.clone(), listing(ctx, &boundary(ctx, &nu)?)));
            kills.push(kill_for_nu(ctx, gs, j, &sum_a, a, &nu, label)?);
        }
        for i in 1..=n {
            kills.push(kill_for_mu(ctx, gs, i, mode)?);
        }
    }
    let eta_match = match_formula(ctx, format!("d eta^{{{}}}(g_1..g_{n})", pts(points)), &d_eta, items);
    Ok(BoundaryCheck { n, r, eta: eta_match, mu: mu_checks, nu: nu_checks, kills })
}

fn check_mu(ctx: &mut Context, gs: &[FunId], a: &CurvePoint, mode: &FunctionMode) -> Result<FormulaMatch> {
    let curve = ctx.curve().clone();
    let mu = mu_of(ctx, gs, a, mode)?;
    let d_mu = boundary(ctx, &mu)?;
    let mut items = Vec::new();
    for (i, &g) in gs.iter().enumerate() {
        let rest = without(gs, i);
        for p in ctx.spec(g).divisor(&curve)?.support() {
            let shifted = curve.add(a, &p)?;
            let left = y_of(ctx, &rest, &shifted, mode)?;
            let v = delta(ctx, DecorationKind::Mu, &left, &ParamCycle::point(p.clone()))?;
            let label = format!("mu^{{{}}}(g^{}) . eta({})", pts(&[shifted]), i + 1, pts(&[p]));
            items.push((FormulaGroup::DivisorPoint, label, v));
        }
    }
    Ok(match_formula(ctx, format!("d mu^{{{}}}", pts(&[a.clone()])), &d_mu, items))
}

/// The `nu` term `nu_j^{b1,b2}` is the `y_j = q` face of the kill cycle with
/// `b1' = b1 + b2 - q` and the same `b2`, for each `q` in `div(g_j)`.
fn kill_for_nu(
    ctx: &Context,
    gs: &[FunId],
    j: usize,
    b1: &CurvePoint,
    b2: &CurvePoint,
    nu: &CycleSum,
    label: String,
) -> Result<KillMatch> {
    let curve = ctx.curve();
    let target: Vec<&Term> = nu.keys().collect();
    for q in ctx.spec(gs[j - 1]).divisor(curve)?.support() {
        let b1k = curve.sub(&curve.add(b1, b2)?, &q)?;
        let k = kill_nu(ctx, gs, j, &b1k, b2)?;
        let kd = decorate(ctx, DecorationKind::Nu, &k)?;
        let dk = boundary(ctx, &kd)?;
        if target.iter().all(|t| !dk.coefficient(t).is_zero()) {
            return Ok(KillMatch { target: label, killer: ctx.render(&k), reproduced: true });
        }
    }
    Ok(KillMatch { target: label, killer: String::new(), reproduced: false })
}

/// The `z = q` faces of the `mu` kill cycle are the `mu^q` terms, `q` in `div(g_i)`.
fn kill_for_mu(ctx: &mut Context, gs: &[FunId], i: usize, mode: &FunctionMode) -> Result<KillMatch> {
    let curve = ctx.curve().clone();
    let k = kill_mu(ctx, gs, i)?;
    let kd = decorate(ctx, DecorationKind::Mu, &k)?;
    let dk = boundary(ctx, &kd)?;
    let mut all = true;
    let mut labels = Vec::new();
    for q in ctx.spec(gs[i - 1]).divisor(&curve)?.support() {
        let mu = mu_of(ctx, gs, &q, mode)?;
        labels.push(pts(&[q]));
        all &= mu.keys().all(|t| !dk.coefficient(t).is_zero());
    }
    Ok(KillMatch { target: format!("mu^{{q}} for q in div(g_{i}): {}", labels.join(" ")), killer: ctx.render(&k), reproduced: all })
}
