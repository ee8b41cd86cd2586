//! Parametric cubical cycles, their decorations by tensor words in
//! `h1(E)^{(x) b}`, the cubical boundary and the external product.

mod boundary;
mod family;
mod formulas;
mod param;
mod term;

use std::cell::RefCell;
use std::collections::HashMap;

pub use boundary::{boundary, boundary_term, external_product, product_terms};
pub use family::{
    build_family, check_admissible, decorate, decorate_by_transpose, eta_point, kill_mu, kill_nu,
    AdmissibilityReport, DecorationKind, FamilyKind, FamilySpec, FunctionMode, Violation,
};
pub use formulas::{delta, verify_boundary_formulas, BoundaryCheck, FormulaGroup, FormulaMatch, GroupMatch, KillMatch};
pub use param::{Affine, FunId, ParamCycle, QCoord};
pub use term::{canonicalize, canonicalize_term, gl2_lower, gl2_raise, isotypic_part, term_label, CycleSum, Term};

use crate::curve::EllipticCurve;
use crate::divisor::{FunctionSpec, ProductDivisorClass};
use crate::error::Result;

/// The curve plus the functions cube coordinates may refer to.
///
/// Functions are interned so that cycles can refer to them by index; the
/// divisor class of each is computed once at registration.
#[derive(Debug)]
pub struct Context {
    curve: EllipticCurve,
    functions: Vec<FunctionSpec>,
    classes: Vec<ProductDivisorClass>,
    memo: RefCell<HashMap<Term, Option<(Term, i64)>>>,
}

impl Context {
    pub fn new(curve: EllipticCurve) -> Context {
        Context { curve, functions: Vec::new(), classes: Vec::new(), memo: RefCell::new(HashMap::new()) }
    }

    pub fn curve(&self) -> &EllipticCurve {
        &self.curve
    }

    /// Interns `spec`, returning its id (the same id for equal specs).
    pub fn register(&mut self, spec: FunctionSpec) -> Result<FunId> {
        if let Some(i) = self.functions.iter().position(|s| *s == spec) {
            return Ok(i);
        }
        let class = spec.class(&self.curve)?;
        self.functions.push(spec);
        self.classes.push(class);
        Ok(self.functions.len() - 1)
    }

    pub fn spec(&self, f: FunId) -> &FunctionSpec {
        &self.functions[f]
    }

    pub fn class(&self, f: FunId) -> &ProductDivisorClass {
        &self.classes[f]
    }

    pub fn functions(&self) -> &[FunctionSpec] {
        &self.functions
    }

    /// Arguments from this index on may be permuted freely.
    pub(crate) fn symmetric_from(&self, f: FunId) -> Option<usize> {
        match &self.functions[f] {
            FunctionSpec::FbarN(_) => Some(0),
            FunctionSpec::FN { .. } => Some(1),
            _ => None,
        }
    }

    pub fn function_name(&self, f: FunId) -> String {
        self.functions[f].name()
    }

    /// Human-readable form with function names in place of ids.
    pub fn render(&self, z: &ParamCycle) -> String {
        let mut parts: Vec<String> = z.ecoords.iter().map(Affine::render).collect();
        for q in &z.qcoords {
            parts.push(match q {
                QCoord::Fun { f, args } => format!(
                    "{}({})",
                    self.function_name(*f),
                    args.iter().map(Affine::render).collect::<Vec<_>>().join(",")
                ),
                QCoord::Const { f, args } => format!(
                    "{}[{}]",
                    self.function_name(*f),
                    args.iter().map(param::point_text).collect::<Vec<_>>().join(",")
                ),
            });
        }
        format!("({})", parts.join("; "))
    }
}
