//! Formal divisors on `E`, named divisor classes on `E^n`, and the divisor
//! recipes for `Fbar_n`, `h_n` and `F_n`.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::curve::{CurvePoint, EllipticCurve};
use crate::error::{degenerate, domain, structural, Error, Result};
use crate::scalar::rational_string;
use crate::Q;

pub(crate) fn q_int(v: i64) -> Q {
    Q::from_integer(BigInt::from(v))
}

pub(crate) fn add_term<K: Ord>(map: &mut BTreeMap<K, Q>, key: K, c: Q) {
    if c.is_zero() {
        return;
    }
    match map.entry(key) {
        Entry::Vacant(v) => {
            v.insert(c);
        }
        Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

/// `sum c_P (P)` with exact rational coefficients; zero terms never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FormalDivisor {
    terms: BTreeMap<CurvePoint, Q>,
}

impl FormalDivisor {
    pub fn new() -> FormalDivisor {
        FormalDivisor::default()
    }

    pub fn from_terms<I: IntoIterator<Item = (CurvePoint, Q)>>(terms: I) -> FormalDivisor {
        let mut d = FormalDivisor::new();
        for (p, c) in terms {
            d.add(p, c);
        }
        d
    }

    pub fn from_int_terms<I: IntoIterator<Item = (CurvePoint, i64)>>(terms: I) -> FormalDivisor {
        FormalDivisor::from_terms(terms.into_iter().map(|(p, c)| (p, q_int(c))))
    }

    pub fn add(&mut self, p: CurvePoint, c: Q) {
        add_term(&mut self.terms, p, c);
    }

    pub fn terms(&self) -> &BTreeMap<CurvePoint, Q> {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Q {
        self.terms.values().fold(Q::zero(), |a, c| a + c)
    }

    pub fn support(&self) -> Vec<CurvePoint> {
        self.terms.keys().cloned().collect()
    }

    pub fn zeros(&self) -> Vec<(CurvePoint, Q)> {
        self.terms.iter().filter(|(_, c)| c.is_positive()).map(|(p, c)| (p.clone(), c.clone())).collect()
    }

    pub fn poles(&self) -> Vec<(CurvePoint, Q)> {
        self.terms.iter().filter(|(_, c)| c.is_negative()).map(|(p, c)| (p.clone(), -c.clone())).collect()
    }

    pub fn scaled(&self, k: &Q) -> FormalDivisor {
        FormalDivisor::from_terms(self.terms.iter().map(|(p, c)| (p.clone(), c * k)))
    }

    pub fn plus(&self, other: &FormalDivisor) -> FormalDivisor {
        let mut d = self.clone();
        for (p, c) in &other.terms {
            d.add(p.clone(), c.clone());
        }
        d
    }

    pub fn minus(&self, other: &FormalDivisor) -> FormalDivisor {
        self.plus(&other.scaled(&-Q::one()))
    }

    /// Pushforward along `x -> -x`.
    pub fn negated_points(&self, curve: &EllipticCurve) -> FormalDivisor {
        FormalDivisor::from_terms(self.terms.iter().map(|(p, c)| (curve.neg(p), c.clone())))
    }

    /// Integer coefficients, or a domain error.
    pub fn integer_terms(&self) -> Result<Vec<(CurvePoint, i64)>> {
        self.terms
            .iter()
            .map(|(p, c)| {
                if !c.is_integer() {
                    return domain(format!("non-integer coefficient {} at {}", rational_string(c), p));
                }
                c.to_integer()
                    .to_i64()
                    .map(|v| (p.clone(), v))
                    .ok_or_else(|| Error::Domain("coefficient out of range".into()))
            })
            .collect()
    }

    /// Group-law sum `sum n_P P`.
    pub fn point_sum(&self, curve: &EllipticCurve) -> Result<CurvePoint> {
        let ints = self.integer_terms()?;
        curve.combine(ints.iter().map(|(p, n)| (*n, p)))
    }
}

impl fmt::Display for FormalDivisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> =
            self.terms.iter().map(|(p, c)| format!("{}({})", rational_string(c), p)).collect();
        f.write_str(&parts.join(" + "))
    }
}

/// Abel's criterion: degree zero and group-law sum zero.
pub fn is_principal(curve: &EllipticCurve, d: &FormalDivisor) -> Result<bool> {
    let sum = d.point_sum(curve)?;
    Ok(d.degree().is_zero() && sum.is_infinity())
}

/// A named codimension-one class on `E^n`.
///
/// Indices are 1-based. `D { i: n+1, .. }` is the pullback along
/// `p_{n+1} = -(z_1 + ... + z_n)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum NamedClass {
    D { i: usize, q: CurvePoint },
    Diag { i: usize, j: usize },
    Anti { i: usize, j: usize },
}

impl NamedClass {
    pub fn diag(i: usize, j: usize) -> NamedClass {
        NamedClass::Diag { i: i.min(j), j: i.max(j) }
    }

    pub fn anti(i: usize, j: usize) -> NamedClass {
        NamedClass::Anti { i: i.min(j), j: i.max(j) }
    }

    /// The class as a linear equation `sum_k coeffs[k] z_k = rhs` on `E^n`.
    pub fn linear_equation(&self, n: usize) -> (Vec<i64>, CurvePoint) {
        let mut coeffs = vec![0i64; n];
        match self {
            NamedClass::D { i, q } => {
                if *i == n + 1 {
                    coeffs.iter_mut().for_each(|c| *c = -1);
                } else {
                    coeffs[i - 1] = 1;
                }
                (coeffs, q.clone())
            }
            NamedClass::Diag { i, j } => {
                coeffs[i - 1] = 1;
                coeffs[j - 1] = -1;
                (coeffs, CurvePoint::Infinity)
            }
            NamedClass::Anti { i, j } => {
                coeffs[i - 1] = 1;
                coeffs[j - 1] = 1;
                (coeffs, CurvePoint::Infinity)
            }
        }
    }
}

impl fmt::Display for NamedClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NamedClass::D { i, q } => write!(f, "D_{}({})", i, point_name(q)),
            NamedClass::Diag { i, j } => write!(f, "Delta_{},{}", i, j),
            NamedClass::Anti { i, j } => write!(f, "Psi_{},{}", i, j),
        }
    }
}

pub(crate) fn point_name(p: &CurvePoint) -> String {
    match p {
        CurvePoint::Infinity => "0".into(),
        _ => p.label(),
    }
}

/// A formal sum of named classes on `E^n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ProductDivisorClass {
    n: usize,
    terms: BTreeMap<NamedClass, Q>,
}

impl ProductDivisorClass {
    pub fn new(n: usize) -> ProductDivisorClass {
        ProductDivisorClass { n, terms: BTreeMap::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<NamedClass, Q> {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, c: &NamedClass) -> Q {
        self.terms.get(c).cloned().unwrap_or_else(Q::zero)
    }

    /// Adds `c * class`, validating indices. On `E^2` the class `D_3(0)` is
    /// rewritten as the antidiagonal.
    pub fn add(&mut self, class: NamedClass, c: Q) -> Result<()> {
        let n = self.n;
        let class = match class {
            NamedClass::D { i, q } => {
                if i == 0 || i > n + 1 {
                    return structural(format!("index {i} out of range for E^{n}"));
                }
                if n == 2 && i == 3 && q.is_infinity() {
                    NamedClass::anti(1, 2)
                } else {
                    NamedClass::D { i, q }
                }
            }
            NamedClass::Diag { i, j } | NamedClass::Anti { i, j } if i >= j || j > n || i == 0 => {
                return structural(format!("pair ({i},{j}) invalid on E^{n}"));
            }
            other => other,
        };
        add_term(&mut self.terms, class, c);
        Ok(())
    }

    pub fn add_int(&mut self, class: NamedClass, c: i64) -> Result<()> {
        self.add(class, q_int(c))
    }

    pub fn plus(&self, other: &ProductDivisorClass) -> Result<ProductDivisorClass> {
        if self.n != other.n {
            return structural("classes on different powers of E");
        }
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add(k.clone(), c.clone())?;
        }
        Ok(out)
    }

    pub fn scaled(&self, k: &Q) -> ProductDivisorClass {
        let mut out = ProductDivisorClass::new(self.n);
        for (cl, c) in &self.terms {
            add_term(&mut out.terms, cl.clone(), c * k);
        }
        out
    }

    pub fn minus(&self, other: &ProductDivisorClass) -> Result<ProductDivisorClass> {
        self.plus(&other.scaled(&-Q::one()))
    }

    /// `p_j^* D` for a divisor `D` on `E`.
    pub fn pullback(n: usize, j: usize, d: &FormalDivisor) -> Result<ProductDivisorClass> {
        let mut out = ProductDivisorClass::new(n);
        for (p, c) in d.terms() {
            out.add(NamedClass::D { i: j, q: p.clone() }, c.clone())?;
        }
        Ok(out)
    }

    /// The involution exchanging factors `1` and `2` of `E^2`.
    pub fn swap_factors(&self) -> Result<ProductDivisorClass> {
        if self.n != 2 {
            return domain("factor swap is implemented on E^2");
        }
        let mut out = ProductDivisorClass::new(2);
        for (cl, c) in &self.terms {
            let img = match cl {
                NamedClass::D { i: 1, q } => NamedClass::D { i: 2, q: q.clone() },
                NamedClass::D { i: 2, q } => NamedClass::D { i: 1, q: q.clone() },
                other => other.clone(),
            };
            out.add(img, c.clone())?;
        }
        Ok(out)
    }
}

impl fmt::Display for ProductDivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> =
            self.terms.iter().map(|(k, c)| format!("{}*{}", rational_string(c), k)).collect();
        f.write_str(&parts.join(" + "))
    }
}

/// `(Fbar_n) = -n sum D_i(0) + sum_{i<j} Delta_{i,j} + D_{n+1}(0)` on `E^n`.
pub fn make_fbar_divisor(n: usize) -> Result<ProductDivisorClass> {
    if n < 2 {
        return domain(format!("Fbar_n needs n >= 2, got {n}"));
    }
    let mut c = ProductDivisorClass::new(n);
    for i in 1..=n {
        c.add_int(NamedClass::D { i, q: CurvePoint::Infinity }, -(n as i64))?;
        for j in i + 1..=n {
            c.add_int(NamedClass::diag(i, j), 1)?;
        }
    }
    c.add_int(NamedClass::D { i: n + 1, q: CurvePoint::Infinity }, 1)?;
    Ok(c)
}

fn check_torsion_pair(curve: &EllipticCurve, u: &CurvePoint, v: &CurvePoint) -> Result<CurvePoint> {
    for t in [u, v] {
        if t.is_infinity() || !curve.scalar_mul(2, t)?.is_infinity() {
            return domain(format!("{t} is not a nonzero 2-torsion point"));
        }
    }
    if u == v {
        return domain("u and v must be distinct");
    }
    curve.add(u, v)
}

/// `(h_n) = n(u) - n(0)` for even `n`, `(n-2)(u) + (v) + (u+v) - n(0)` for odd `n`.
pub fn make_hn_divisor(
    curve: &EllipticCurve,
    n: usize,
    u: &CurvePoint,
    v: &CurvePoint,
) -> Result<FormalDivisor> {
    if n < 2 {
        return domain(format!("h_n needs n >= 2, got {n}"));
    }
    let uv = check_torsion_pair(curve, u, v)?;
    let n = n as i64;
    let mut d = FormalDivisor::new();
    if n % 2 == 0 {
        d.add(u.clone(), q_int(n));
    } else {
        d.add(u.clone(), q_int(n - 2));
        d.add(v.clone(), Q::one());
        d.add(uv, Q::one());
    }
    d.add(CurvePoint::Infinity, q_int(-n));
    Ok(d)
}

/// Both readings of `(F_n)` and their difference.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FnDivisorComparison {
    /// From the defining product `Fbar_n(z) h_n(z_2)^-1 ... h_n(z_n)^-1`.
    pub product: ProductDivisorClass,
    /// `-n sum_{i=1}^n D_i(u) + sum Delta_{i,j} + D_{n+1}(0)` for even `n`; for
    /// odd `n` the `D_i(u)` part is `-(n-2) D_i(u) - D_i(v) - D_i(u+v)`.
    pub displayed: ProductDivisorClass,
    /// `displayed - product`.
    pub diff: ProductDivisorClass,
}

impl FnDivisorComparison {
    pub fn consistent(&self) -> bool {
        self.diff.is_empty()
    }
}

pub fn make_fn_divisor(
    curve: &EllipticCurve,
    n: usize,
    u: &CurvePoint,
    v: &CurvePoint,
) -> Result<FnDivisorComparison> {
    let h = make_hn_divisor(curve, n, u, v)?;
    let mut product = make_fbar_divisor(n)?;
    for j in 2..=n {
        product = product.minus(&ProductDivisorClass::pullback(n, j, &h)?)?;
    }
    let uv = curve.add(u, v)?;
    let mut displayed = ProductDivisorClass::new(n);
    for i in 1..=n {
        if n % 2 == 0 {
            displayed.add_int(NamedClass::D { i, q: u.clone() }, -(n as i64))?;
        } else {
            displayed.add_int(NamedClass::D { i, q: u.clone() }, 2 - n as i64)?;
            displayed.add_int(NamedClass::D { i, q: v.clone() }, -1)?;
            displayed.add_int(NamedClass::D { i, q: uv.clone() }, -1)?;
        }
        for j in i + 1..=n {
            displayed.add_int(NamedClass::diag(i, j), 1)?;
        }
    }
    displayed.add_int(NamedClass::D { i: n + 1, q: CurvePoint::Infinity }, 1)?;
    let diff = displayed.minus(&product)?;
    Ok(FnDivisorComparison { product, displayed, diff })
}

/// A point of `E` written as an integer combination of named generic
/// points plus a constant rational point.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SymPoint {
    pub coeffs: BTreeMap<String, i64>,
    pub constant: CurvePoint,
}

impl SymPoint {
    pub fn generic(name: &str) -> SymPoint {
        SymPoint { coeffs: BTreeMap::from([(name.to_string(), 1)]), constant: CurvePoint::Infinity }
    }

    pub fn constant(p: CurvePoint) -> SymPoint {
        SymPoint { coeffs: BTreeMap::new(), constant: p }
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Identically zero as a function of the generic points.
    pub fn is_zero(&self) -> bool {
        self.is_constant() && self.constant.is_infinity()
    }

    pub fn neg(&self, curve: &EllipticCurve) -> SymPoint {
        SymPoint {
            coeffs: self.coeffs.iter().map(|(k, v)| (k.clone(), -v)).collect(),
            constant: curve.neg(&self.constant),
        }
    }

    pub fn add(&self, other: &SymPoint, curve: &EllipticCurve) -> Result<SymPoint> {
        let mut coeffs = self.coeffs.clone();
        for (k, v) in &other.coeffs {
            *coeffs.entry(k.clone()).or_insert(0) += v;
        }
        coeffs.retain(|_, v| *v != 0);
        Ok(SymPoint { coeffs, constant: curve.add(&self.constant, &other.constant)? })
    }

    pub fn evaluate(
        &self,
        curve: &EllipticCurve,
        values: &BTreeMap<String, CurvePoint>,
    ) -> Result<CurvePoint> {
        let mut acc = self.constant.clone();
        for (k, v) in &self.coeffs {
            let p = values
                .get(k)
                .ok_or_else(|| Error::Domain(format!("no value for generic point {k}")))?;
            acc = curve.add(&acc, &curve.scalar_mul(*v, p)?)?;
        }
        Ok(acc)
    }
}

impl fmt::Display for SymPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|(k, v)| match v {
                1 => k.clone(),
                -1 => format!("-{k}"),
                _ => format!("{v}{k}"),
            })
            .collect();
        if !self.constant.is_infinity() || parts.is_empty() {
            parts.push(point_name(&self.constant));
        }
        f.write_str(&parts.join("+"))
    }
}

/// A formal divisor whose points may involve generic indeterminates.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolicDivisor {
    terms: BTreeMap<SymPoint, Q>,
}

impl SymbolicDivisor {
    pub fn add(&mut self, p: SymPoint, c: Q) {
        add_term(&mut self.terms, p, c);
    }

    pub fn terms(&self) -> &BTreeMap<SymPoint, Q> {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Q {
        self.terms.values().fold(Q::zero(), |a, c| a + c)
    }

    /// Principal for every value of the indeterminates: degree zero, each
    /// indeterminate cancels in the sum and the constant part sums to zero.
    pub fn is_principal(&self, curve: &EllipticCurve) -> Result<bool> {
        if !self.degree().is_zero() {
            return Ok(false);
        }
        let mut total: BTreeMap<String, BigInt> = BTreeMap::new();
        let mut consts = FormalDivisor::new();
        for (p, c) in &self.terms {
            if !c.is_integer() {
                return domain("non-integer coefficient in symbolic divisor");
            }
            let ci = c.to_integer();
            for (k, v) in &p.coeffs {
                *total.entry(k.clone()).or_insert_with(BigInt::zero) += &ci * v;
            }
            consts.add(p.constant.clone(), c.clone());
        }
        Ok(total.values().all(|v| v.is_zero()) && consts.point_sum(curve)?.is_infinity())
    }

    pub fn evaluate(
        &self,
        curve: &EllipticCurve,
        values: &BTreeMap<String, CurvePoint>,
    ) -> Result<FormalDivisor> {
        let mut d = FormalDivisor::new();
        for (p, c) in &self.terms {
            d.add(p.evaluate(curve, values)?, c.clone());
        }
        Ok(d)
    }
}

impl fmt::Display for SymbolicDivisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> =
            self.terms.iter().map(|(p, c)| format!("{}({})", rational_string(c), p)).collect();
        f.write_str(&parts.join(" + "))
    }
}

/// Restricts a class on `E^n` to the fiber where every coordinate except
/// `i` (1-based) is fixed. `fixed` lists the values of the other
/// coordinates in increasing index order.
pub fn restrict_to_fiber(
    curve: &EllipticCurve,
    class: &ProductDivisorClass,
    i: usize,
    fixed: &[SymPoint],
) -> Result<SymbolicDivisor> {
    let n = class.n();
    if i == 0 || i > n {
        return structural(format!("coordinate {i} out of range for E^{n}"));
    }
    if fixed.len() + 1 != n {
        return structural(format!("expected {} fixed values, got {}", n - 1, fixed.len()));
    }
    let mut value: BTreeMap<usize, SymPoint> = BTreeMap::new();
    for (k, j) in (1..=n).filter(|j| *j != i).enumerate() {
        value.insert(j, fixed[k].clone());
    }
    let vals: Vec<&SymPoint> = value.values().collect();
    for (a, p) in vals.iter().enumerate() {
        if p.is_zero() {
            return degenerate(format!("fixed value {p} is zero"));
        }
        for q in &vals[a + 1..] {
            if p == q {
                return degenerate(format!("fixed values coincide at {p}"));
            }
        }
    }
    let mut out = SymbolicDivisor::default();
    for (cl, c) in class.terms() {
        match cl {
            NamedClass::D { i: j, q } if *j == n + 1 => {
                let mut s = SymPoint::constant(q.clone());
                for v in value.values() {
                    s = s.add(v, curve)?;
                }
                out.add(s.neg(curve), c.clone());
            }
            NamedClass::D { i: j, q } if *j == i => out.add(SymPoint::constant(q.clone()), c.clone()),
            NamedClass::D { i: j, q } => {
                if value[j] == SymPoint::constant(q.clone()) {
                    return degenerate(format!("fiber lies inside {cl}"));
                }
            }
            NamedClass::Diag { i: a, j: b } | NamedClass::Anti { i: a, j: b } => {
                let anti = matches!(cl, NamedClass::Anti { .. });
                if *a == i || *b == i {
                    let other = if *a == i { &value[b] } else { &value[a] };
                    let p = if anti { other.neg(curve) } else { other.clone() };
                    out.add(p, c.clone());
                } else {
                    let (pa, pb) = (&value[a], &value[b]);
                    let hit = if anti { pa.add(pb, curve)?.is_zero() } else { pa == pb };
                    if hit {
                        return degenerate(format!("fiber lies inside {cl}"));
                    }
                }
            }
        }
    }
    Ok(out)
}

/// `sum_{g in (Z/2)^2} sgn(g) g` on classes of `E^2`, where the generators
/// negate one coordinate.
pub fn alt_project_square(
    curve: &EllipticCurve,
    class: &ProductDivisorClass,
) -> Result<ProductDivisorClass> {
    if class.n() != 2 {
        return domain(format!("alternating projection is defined on E^2, got E^{}", class.n()));
    }
    let mut out = ProductDivisorClass::new(2);
    for s1 in [1i64, -1] {
        for s2 in [1i64, -1] {
            let sign = q_int(s1 * s2);
            for (cl, c) in class.terms() {
                let img = act_signs(curve, cl, s1, s2)?;
                out.add(img, c * &sign)?;
            }
        }
    }
    Ok(out)
}

fn act_signs(curve: &EllipticCurve, cl: &NamedClass, s1: i64, s2: i64) -> Result<NamedClass> {
    let flip = |s: i64, q: &CurvePoint| if s < 0 { curve.neg(q) } else { q.clone() };
    Ok(match cl {
        NamedClass::D { i: 1, q } => NamedClass::D { i: 1, q: flip(s1, q) },
        NamedClass::D { i: 2, q } => NamedClass::D { i: 2, q: flip(s2, q) },
        NamedClass::D { i: 3, q } => {
            if s1 != s2 {
                return domain(format!("{cl} maps to a translated diagonal"));
            }
            NamedClass::D { i: 3, q: flip(s1, q) }
        }
        NamedClass::Diag { .. } if s1 != s2 => NamedClass::anti(1, 2),
        NamedClass::Anti { .. } if s1 != s2 => NamedClass::diag(1, 2),
        other => other.clone(),
    })
}

/// The functions that can appear in a cube coordinate.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FunctionSpec {
    /// A function on `E` known through its (principal) divisor.
    User { name: String, divisor: FormalDivisor },
    /// `Fbar_n` on `E^n`.
    FbarN(usize),
    /// `h_n` on `E`.
    HN { n: usize, u: CurvePoint, v: CurvePoint },
    /// `F_n` on `E^n`, with divisor taken from the defining product.
    FN { n: usize, u: CurvePoint, v: CurvePoint },
}

impl FunctionSpec {
    pub fn user(curve: &EllipticCurve, name: &str, divisor: FormalDivisor) -> Result<FunctionSpec> {
        for p in divisor.terms().keys() {
            if !curve.contains(p) {
                return domain(format!("{name}: point {p} is not on the curve"));
            }
        }
        if !is_principal(curve, &divisor)? {
            return domain(format!(
                "{name}: divisor {divisor} is not principal (Abel: degree {} and sum {})",
                rational_string(&divisor.degree()),
                divisor.point_sum(curve)?
            ));
        }
        Ok(FunctionSpec::User { name: name.to_string(), divisor })
    }

    pub fn name(&self) -> String {
        match self {
            FunctionSpec::User { name, .. } => name.clone(),
            FunctionSpec::FbarN(n) => format!("Fbar{n}"),
            FunctionSpec::HN { n, .. } => format!("h{n}"),
            FunctionSpec::FN { n, .. } => format!("F{n}"),
        }
    }

    /// Number of `E` arguments.
    pub fn arity(&self) -> usize {
        match self {
            FunctionSpec::User { .. } | FunctionSpec::HN { .. } => 1,
            FunctionSpec::FbarN(n) | FunctionSpec::FN { n, .. } => *n,
        }
    }

    /// The divisor as a class on `E^arity`.
    pub fn class(&self, curve: &EllipticCurve) -> Result<ProductDivisorClass> {
        match self {
            FunctionSpec::User { divisor, .. } => ProductDivisorClass::pullback(1, 1, divisor),
            FunctionSpec::HN { n, u, v } => {
                ProductDivisorClass::pullback(1, 1, &make_hn_divisor(curve, *n, u, v)?)
            }
            FunctionSpec::FbarN(n) => make_fbar_divisor(*n),
            FunctionSpec::FN { n, u, v } => Ok(make_fn_divisor(curve, *n, u, v)?.product),
        }
    }

    /// Divisor on `E` for one-variable functions.
    pub fn divisor(&self, curve: &EllipticCurve) -> Result<FormalDivisor> {
        match self {
            FunctionSpec::User { divisor, .. } => Ok(divisor.clone()),
            FunctionSpec::HN { n, u, v } => make_hn_divisor(curve, *n, u, v),
            _ => structural(format!("{} is not a function on E", self.name())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::fixtures::*;

    fn e11() -> (EllipticCurve, CurvePoint, CurvePoint) {
        let e = split_two_torsion(11);
        let u = e.point_i64(0, 0).unwrap();
        let v = e.point_i64(2, 0).unwrap();
        (e, u, v)
    }

    #[test]
    fn fbar2_is_delta_plus_psi() {
        let c = make_fbar_divisor(2).unwrap();
        let mut want = ProductDivisorClass::new(2);
        want.add_int(NamedClass::diag(1, 2), 1).unwrap();
        want.add_int(NamedClass::anti(1, 2), 1).unwrap();
        want.add_int(NamedClass::D { i: 1, q: CurvePoint::Infinity }, -2).unwrap();
        want.add_int(NamedClass::D { i: 2, q: CurvePoint::Infinity }, -2).unwrap();
        assert_eq!(c, want);
        assert_eq!(c.swap_factors().unwrap(), c);
        assert!(make_fbar_divisor(1).is_err());
    }

    #[test]
    fn fbar3_terms() {
        let c = make_fbar_divisor(3).unwrap();
        assert_eq!(c.terms().len(), 7);
        assert_eq!(c.coefficient(&NamedClass::D { i: 2, q: CurvePoint::Infinity }), q_int(-3));
        assert_eq!(c.coefficient(&NamedClass::D { i: 4, q: CurvePoint::Infinity }), q_int(1));
    }

    #[test]
    fn hn_cases() {
        let (e, u, v) = e11();
        let h2 = make_hn_divisor(&e, 2, &u, &v).unwrap();
        assert_eq!(h2, FormalDivisor::from_int_terms([(u.clone(), 2), (CurvePoint::Infinity, -2)]));
        let h3 = make_hn_divisor(&e, 3, &u, &v).unwrap();
        assert_eq!(h3.terms().len(), 4);
        assert!(is_principal(&e, &h3).unwrap());
        let not_torsion = e.point_i64(1, 4);
        if let Ok(p) = not_torsion {
            assert!(make_hn_divisor(&e, 2, &p, &v).is_err());
        }
    }

    #[test]
    fn fn_readings_differ_for_n2() {
        let (e, u, v) = e11();
        let cmp = make_fn_divisor(&e, 2, &u, &v).unwrap();
        let mut want = ProductDivisorClass::new(2);
        want.add_int(NamedClass::diag(1, 2), 1).unwrap();
        want.add_int(NamedClass::anti(1, 2), 1).unwrap();
        want.add_int(NamedClass::D { i: 1, q: CurvePoint::Infinity }, -2).unwrap();
        want.add_int(NamedClass::D { i: 2, q: u.clone() }, -2).unwrap();
        assert_eq!(cmp.product, want);
        assert!(!cmp.consistent());
    }

    #[test]
    fn fn_odd_display_uses_all_two_torsion() {
        let (e, u, v) = e11();
        let uv = e.add(&u, &v).unwrap();
        let cmp = make_fn_divisor(&e, 3, &u, &v).unwrap();
        for i in 1..=3 {
            assert_eq!(cmp.displayed.coefficient(&NamedClass::D { i, q: u.clone() }), q_int(-1));
            assert_eq!(cmp.displayed.coefficient(&NamedClass::D { i, q: v.clone() }), q_int(-1));
            assert_eq!(cmp.displayed.coefficient(&NamedClass::D { i, q: uv.clone() }), q_int(-1));
        }
        // the product never touches coordinate 1 away from 0
        assert_eq!(cmp.product.coefficient(&NamedClass::D { i: 1, q: u.clone() }), q_int(0));
        assert_eq!(cmp.product.coefficient(&NamedClass::D { i: 1, q: CurvePoint::Infinity }), q_int(-3));
        assert!(!cmp.consistent());
    }

    #[test]
    fn principal_examples() {
        let e = curve_37a1();
        let p = generator_37a1();
        let d = FormalDivisor::from_int_terms([(p.clone(), 1), (e.neg(&p), -1)]);
        assert!(!is_principal(&e, &d).unwrap());
        assert_eq!(d.point_sum(&e).unwrap(), e.point_i64(1, 0).unwrap());
        assert!(is_principal(&e, &FormalDivisor::new()).unwrap());
        let half = FormalDivisor::from_terms([(p, Q::new(1.into(), 2.into()))]);
        assert!(is_principal(&e, &half).is_err());
    }

    #[test]
    fn fiber_of_fbar2() {
        let e = curve_37a1();
        let c = make_fbar_divisor(2).unwrap();
        let q = SymPoint::generic("q");
        let d = restrict_to_fiber(&e, &c, 1, &[q.clone()]).unwrap();
        let mut want = SymbolicDivisor::default();
        want.add(q.clone(), q_int(1));
        want.add(q.neg(&e), q_int(1));
        want.add(SymPoint::constant(CurvePoint::Infinity), q_int(-2));
        assert_eq!(d, want);
        assert!(d.is_principal(&e).unwrap());
    }

    #[test]
    fn fiber_of_fbar3() {
        let e = curve_37a1();
        let c = make_fbar_divisor(3).unwrap();
        let (q2, q3) = (SymPoint::generic("q2"), SymPoint::generic("q3"));
        let d = restrict_to_fiber(&e, &c, 1, &[q2.clone(), q3.clone()]).unwrap();
        assert_eq!(d.terms().len(), 4);
        assert_eq!(d.degree(), Q::zero());
        assert!(d.is_principal(&e).unwrap());
        assert!(restrict_to_fiber(&e, &c, 1, &[q2.clone(), q2]).is_err());
    }

    #[test]
    fn disjoint_fiber_is_empty() {
        let (e, u, _) = e11();
        let mut c = ProductDivisorClass::new(2);
        c.add_int(NamedClass::D { i: 2, q: u }, 1).unwrap();
        let d = restrict_to_fiber(&e, &c, 1, &[SymPoint::generic("q")]).unwrap();
        assert!(d.is_empty());
    }

    #[test]
    fn alternating_projection_identities() {
        let e = curve_37a1();
        let mut delta = ProductDivisorClass::new(2);
        delta.add_int(NamedClass::diag(1, 2), 1).unwrap();
        let mut psi = ProductDivisorClass::new(2);
        psi.add_int(NamedClass::anti(1, 2), 1).unwrap();
        let two_delta_minus_psi = delta.minus(&psi).unwrap().scaled(&q_int(2));
        assert_eq!(alt_project_square(&e, &delta).unwrap(), two_delta_minus_psi);
        assert_eq!(
            alt_project_square(&e, &psi).unwrap(),
            psi.minus(&delta).unwrap().scaled(&q_int(2))
        );
        let mut d1 = ProductDivisorClass::new(2);
        d1.add_int(NamedClass::D { i: 1, q: CurvePoint::Infinity }, 1).unwrap();
        assert!(alt_project_square(&e, &d1).unwrap().is_empty());
    }
}
