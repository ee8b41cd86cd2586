//! Long-Weierstrass elliptic curves over `Q` or `F_p` and their group law.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{structural, Error, Result};
use crate::scalar::{Field, FieldScalar};

const CACHE_LIMIT: usize = 1 << 20;

type AddKey = (EllipticCurve, CurvePoint, CurvePoint);
type MulKey = (EllipticCurve, i64, CurvePoint);

// Memo tables for rational point arithmetic.
thread_local! {
    static ADD_CACHE: RefCell<HashMap<AddKey, CurvePoint>> = RefCell::new(HashMap::new());
    static MUL_CACHE: RefCell<HashMap<MulKey, CurvePoint>> = RefCell::new(HashMap::new());
}

/// A point of `E(k)`: the identity `Infinity` or an affine solution.
///
/// Points carry no curve reference; every operation takes the curve
/// explicitly and validates membership.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CurvePoint {
    Infinity,
    Affine { x: FieldScalar, y: FieldScalar },
}

impl CurvePoint {
    pub fn affine(x: FieldScalar, y: FieldScalar) -> CurvePoint {
        CurvePoint::Affine { x, y }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, CurvePoint::Infinity)
    }

    /// `"inf"` or `"(x,y)"` with exact coordinates.
    pub fn label(&self) -> String {
        match self {
            CurvePoint::Infinity => "inf".to_string(),
            CurvePoint::Affine { x, y } => format!("({},{})", x, y),
        }
    }
}

impl fmt::Display for CurvePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// `y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6` with nonzero discriminant.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EllipticCurve {
    field: Field,
    a1: FieldScalar,
    a2: FieldScalar,
    a3: FieldScalar,
    a4: FieldScalar,
    a6: FieldScalar,
}

impl EllipticCurve {
    pub fn new(field: Field, coeffs: [i64; 5]) -> Result<EllipticCurve> {
        let [a1, a2, a3, a4, a6] = coeffs.map(|c| field.from_i64(c));
        EllipticCurve::from_scalars(field, a1, a2, a3, a4, a6)
    }

    pub fn from_scalars(
        field: Field,
        a1: FieldScalar,
        a2: FieldScalar,
        a3: FieldScalar,
        a4: FieldScalar,
        a6: FieldScalar,
    ) -> Result<EllipticCurve> {
        for c in [&a1, &a2, &a3, &a4, &a6] {
            if c.field() != field {
                return structural("curve coefficient lies in a different field");
            }
        }
        let curve = EllipticCurve { field, a1, a2, a3, a4, a6 };
        if curve.discriminant().is_zero() {
            return Err(Error::Domain("singular Weierstrass equation (zero discriminant)".into()));
        }
        Ok(curve)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn coefficients(&self) -> [&FieldScalar; 5] {
        [&self.a1, &self.a2, &self.a3, &self.a4, &self.a6]
    }

    fn b_invariants(&self) -> (FieldScalar, FieldScalar, FieldScalar, FieldScalar) {
        let f = |r: Result<FieldScalar>| r.expect("same field");
        let (a1, a2, a3, a4, a6) = (&self.a1, &self.a2, &self.a3, &self.a4, &self.a6);
        let b2 = f(a1.square().add(&f(a2.scale(4))));
        let b4 = f(f(a1.mul(a3)).add(&f(a4.scale(2))));
        let b6 = f(a3.square().add(&f(a6.scale(4))));
        // b8 = a1^2 a6 + 4 a2 a6 - a1 a3 a4 + a2 a3^2 - a4^2
        let b8 = f(f(f(f(f(a1.square().mul(a6)).add(&f(f(a2.mul(a6)).scale(4))))
            .sub(&f(f(a1.mul(a3)).mul(a4))))
        .add(&f(a2.mul(&a3.square()))))
        .sub(&a4.square()));
        (b2, b4, b6, b8)
    }

    pub fn discriminant(&self) -> FieldScalar {
        let f = |r: Result<FieldScalar>| r.expect("same field");
        let (b2, b4, b6, b8) = self.b_invariants();
        // -b2^2 b8 - 8 b4^3 - 27 b6^2 + 9 b2 b4 b6
        let t1 = f(b2.square().mul(&b8)).neg();
        let t2 = f(f(b4.square().mul(&b4)).scale(8));
        let t3 = f(b6.square().scale(27));
        let t4 = f(f(f(b2.mul(&b4)).mul(&b6)).scale(9));
        f(f(f(t1.sub(&t2)).sub(&t3)).add(&t4))
    }

    pub fn contains(&self, p: &CurvePoint) -> bool {
        match p {
            CurvePoint::Infinity => true,
            CurvePoint::Affine { x, y } => {
                if x.field() != self.field || y.field() != self.field {
                    return false;
                }
                self.equation_residual(x, y).map(|r| r.is_zero()).unwrap_or(false)
            }
        }
    }

    /// `lhs - rhs` of the Weierstrass equation at `(x, y)`.
    fn equation_residual(&self, x: &FieldScalar, y: &FieldScalar) -> Result<FieldScalar> {
        let lhs = y.square().add(&self.a1.mul(x)?.mul(y)?)?.add(&self.a3.mul(y)?)?;
        let x2 = x.square();
        let rhs = x2
            .mul(x)?
            .add(&self.a2.mul(&x2)?)?
            .add(&self.a4.mul(x)?)?
            .add(&self.a6)?;
        lhs.sub(&rhs)
    }

    /// Builds an affine point, rejecting coordinates off the curve.
    pub fn point(&self, x: FieldScalar, y: FieldScalar) -> Result<CurvePoint> {
        let p = CurvePoint::affine(x, y);
        if !self.contains(&p) {
            return Err(Error::Domain(format!("point {} does not satisfy the curve equation", p)));
        }
        Ok(p)
    }

    pub fn point_i64(&self, x: i64, y: i64) -> Result<CurvePoint> {
        self.point(self.field.from_i64(x), self.field.from_i64(y))
    }

    fn ensure(&self, p: &CurvePoint) -> Result<()> {
        if self.contains(p) {
            Ok(())
        } else {
            structural(format!("point {} is not on the curve {}", p, self))
        }
    }

    pub fn neg(&self, p: &CurvePoint) -> CurvePoint {
        match p {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine { x, y } => {
                let ny = y
                    .neg()
                    .sub(&self.a1.mul(x).expect("same field"))
                    .and_then(|v| v.sub(&self.a3))
                    .expect("same field");
                CurvePoint::affine(x.clone(), ny)
            }
        }
    }

    /// Chord-tangent addition.
    pub fn add(&self, p: &CurvePoint, q: &CurvePoint) -> Result<CurvePoint> {
        self.ensure(p)?;
        self.ensure(q)?;
        self.add_unchecked(p, q)
    }

    pub(crate) fn add_unchecked(&self, p: &CurvePoint, q: &CurvePoint) -> Result<CurvePoint> {
        if p.is_infinity() {
            return Ok(q.clone());
        }
        if q.is_infinity() {
            return Ok(p.clone());
        }
        if self.field != Field::Rational {
            return self.chord_tangent(p, q);
        }
        let key = (self.clone(), p.clone(), q.clone());
        if let Some(hit) = ADD_CACHE.with(|c| c.borrow().get(&key).cloned()) {
            return Ok(hit);
        }
        let r = self.chord_tangent(p, q)?;
        ADD_CACHE.with(|c| {
            let mut c = c.borrow_mut();
            if c.len() > CACHE_LIMIT {
                c.clear();
            }
            c.insert(key, r.clone());
        });
        Ok(r)
    }

    fn chord_tangent(&self, p: &CurvePoint, q: &CurvePoint) -> Result<CurvePoint> {
        let (x1, y1, x2, y2) = match (p, q) {
            (CurvePoint::Infinity, _) => return Ok(q.clone()),
            (_, CurvePoint::Infinity) => return Ok(p.clone()),
            (CurvePoint::Affine { x: x1, y: y1 }, CurvePoint::Affine { x: x2, y: y2 }) => {
                (x1, y1, x2, y2)
            }
        };
        let (a1, a2, a3, a4, a6) = (&self.a1, &self.a2, &self.a3, &self.a4, &self.a6);
        let (lambda, nu) = if x1 == x2 {
            let s = y1.add(y2)?.add(&a1.mul(x2)?)?.add(a3)?;
            if s.is_zero() {
                return Ok(CurvePoint::Infinity);
            }
            let den = y1.scale(2)?.add(&a1.mul(x1)?)?.add(a3)?;
            let x1sq = x1.square();
            let num_l = x1sq.scale(3)?.add(&a2.mul(x1)?.scale(2)?)?.add(a4)?.sub(&a1.mul(y1)?)?;
            let num_n = x1sq
                .mul(x1)?
                .neg()
                .add(&a4.mul(x1)?)?
                .add(&a6.scale(2)?)?
                .sub(&a3.mul(y1)?)?;
            (num_l.div(&den)?, num_n.div(&den)?)
        } else {
            let dx = x2.sub(x1)?;
            let lambda = y2.sub(y1)?.div(&dx)?;
            let nu = y1.mul(x2)?.sub(&y2.mul(x1)?)?.div(&dx)?;
            (lambda, nu)
        };
        let x3 = lambda.square().add(&a1.mul(&lambda)?)?.sub(a2)?.sub(x1)?.sub(x2)?;
        let y3 = lambda.add(a1)?.mul(&x3)?.neg().sub(&nu)?.sub(a3)?;
        Ok(CurvePoint::affine(x3, y3))
    }

    pub fn sub(&self, p: &CurvePoint, q: &CurvePoint) -> Result<CurvePoint> {
        self.add(p, &self.neg(q))
    }

    /// `n * P` by double-and-add; negative `n` multiplies `-P`.
    pub fn scalar_mul(&self, n: i64, p: &CurvePoint) -> Result<CurvePoint> {
        if self.field != Field::Rational {
            self.ensure(p)?;
            return self.scalar_mul_unchecked(n, p);
        }
        let key = (self.clone(), n, p.clone());
        if let Some(hit) = MUL_CACHE.with(|c| c.borrow().get(&key).cloned()) {
            return Ok(hit);
        }
        self.ensure(p)?;
        let r = self.scalar_mul_unchecked(n, p)?;
        MUL_CACHE.with(|c| {
            let mut c = c.borrow_mut();
            if c.len() > CACHE_LIMIT {
                c.clear();
            }
            c.insert(key, r.clone());
        });
        Ok(r)
    }

    fn scalar_mul_unchecked(&self, n: i64, p: &CurvePoint) -> Result<CurvePoint> {
        let mut base = if n < 0 { self.neg(p) } else { p.clone() };
        let mut k = n.unsigned_abs();
        let mut acc = CurvePoint::Infinity;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add_unchecked(&acc, &base)?;
            }
            base = self.add_unchecked(&base, &base)?;
            k >>= 1;
        }
        Ok(acc)
    }

    /// `sum_i n_i P_i` under the group law.
    pub fn combine<'a, I>(&self, terms: I) -> Result<CurvePoint>
    where
        I: IntoIterator<Item = (i64, &'a CurvePoint)>,
    {
        let mut acc = CurvePoint::Infinity;
        for (n, p) in terms {
            let t = self.scalar_mul(n, p)?;
            acc = self.add_unchecked(&acc, &t)?;
        }
        Ok(acc)
    }

    /// All points of `E(F_p)` including infinity, by exhaustive search.
    pub fn enumerate_points(&self) -> Result<Vec<CurvePoint>> {
        let Field::Prime(_) = self.field else {
            return Err(Error::Domain("point enumeration needs a finite field".into()));
        };
        let elems = self.field.elements();
        let mut out = vec![CurvePoint::Infinity];
        for x in &elems {
            for y in &elems {
                if self.equation_residual(x, y)?.is_zero() {
                    out.push(CurvePoint::affine(x.clone(), y.clone()));
                }
            }
        }
        Ok(out)
    }

    /// Nonzero rational points `T` with `2T = 0`; zero, one or three of them.
    pub fn full_two_torsion(&self) -> Result<Vec<CurvePoint>> {
        let mut out = Vec::new();
        match self.field {
            Field::Prime(_) => {
                for p in self.enumerate_points()? {
                    if !p.is_infinity() && self.neg(&p) == p {
                        out.push(p);
                    }
                }
            }
            Field::Rational => {
                // 2T = 0 iff 2y + a1 x + a3 = 0, which leaves
                // 4x^3 + b2 x^2 + 2 b4 x + b6 = 0.
                let (b2, b4, b6, _) = self.b_invariants();
                let c = [b6, b4.scale(2)?, b2, self.field.from_i64(4)];
                for x in rational_roots(&c) {
                    let xs = FieldScalar::Rat(x);
                    let y = self.a1.mul(&xs)?.add(&self.a3)?.neg().div(&self.field.from_i64(2))?;
                    let p = CurvePoint::affine(xs, y);
                    debug_assert!(self.contains(&p));
                    out.push(p);
                }
            }
        }
        out.sort();
        Ok(out)
    }

    /// Exhaustive group order of `E(F_p)`.
    pub fn order(&self) -> Result<usize> {
        Ok(self.enumerate_points()?.len())
    }
}

impl fmt::Display for EllipticCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{},{},{},{},{}] over {}",
            self.a1, self.a2, self.a3, self.a4, self.a6, self.field
        )
    }
}

/// Rational roots of `c0 + c1 x + c2 x^2 + c3 x^3` (coefficients rational).
fn rational_roots(coeffs: &[FieldScalar; 4]) -> Vec<BigRational> {
    let qs: Vec<BigRational> = coeffs
        .iter()
        .map(|c| match c {
            FieldScalar::Rat(q) => q.clone(),
            FieldScalar::Mod { .. } => unreachable!("rational field"),
        })
        .collect();
    let lcm = qs.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let ints: Vec<BigInt> = qs.iter().map(|q| (q * &lcm).to_integer()).collect();
    let eval = |x: &BigRational| -> BigRational {
        ints.iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + BigRational::from_integer(c.clone()))
    };
    let mut roots = Vec::new();
    // Strip the factor x^k first so the constant term is nonzero.
    let mut low = 0;
    while low < 4 && ints[low].is_zero() {
        low += 1;
    }
    if low > 0 {
        roots.push(BigRational::zero());
    }
    let mut high = 3;
    while high > low && ints[high].is_zero() {
        high -= 1;
    }
    if high == low {
        return roots;
    }
    let c0 = ints[low].abs();
    let cn = ints[high].abs();
    let dn = divisors(&c0);
    let dd = divisors(&cn);
    let mut seen = std::collections::BTreeSet::new();
    for n in &dn {
        for d in &dd {
            for s in [BigInt::one(), -BigInt::one()] {
                let cand = BigRational::new(&s * n, d.clone());
                if seen.insert(cand.clone()) && eval(&cand).is_zero() {
                    roots.push(cand);
                }
            }
        }
    }
    roots.sort();
    roots.dedup();
    roots
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut out = Vec::new();
    let mut d = BigInt::one();
    while &(&d * &d) <= n {
        if (n % &d).is_zero() {
            out.push(d.clone());
            let other = n / &d;
            if other != d {
                out.push(other);
            }
        }
        d += 1;
    }
    out
}

/// Named curve fixtures.
pub mod fixtures {
    use super::*;

    /// `y^2 + y = x^3 - x` over `Q` (conductor 37, rank 1, generator `(0,0)`).
    pub fn curve_37a1() -> EllipticCurve {
        EllipticCurve::new(Field::Rational, [0, 0, 1, -1, 0]).expect("nonsingular")
    }

    /// `y^2 = x(x-2)(x-5)` over `F_p`; full rational 2-torsion.
    pub fn split_two_torsion(p: u64) -> EllipticCurve {
        EllipticCurve::new(Field::prime(p).expect("prime"), [0, -7, 0, 10, 0]).expect("nonsingular")
    }

    /// The generator `(0,0)` of `curve_37a1`.
    pub fn generator_37a1() -> CurvePoint {
        curve_37a1().point_i64(0, 0).expect("on curve")
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn doubling_on_37a1() {
        let e = curve_37a1();
        let p = generator_37a1();
        assert_eq!(e.add(&p, &p).unwrap(), e.point_i64(1, 0).unwrap());
        assert_eq!(e.scalar_mul(2, &p).unwrap(), e.point_i64(1, 0).unwrap());
        assert_eq!(e.scalar_mul(3, &p).unwrap(), e.point_i64(-1, -1).unwrap());
        assert_eq!(e.scalar_mul(1, &p).unwrap(), p);
        assert_eq!(e.scalar_mul(0, &p).unwrap(), CurvePoint::Infinity);
    }

    #[test]
    fn negation_on_37a1() {
        let e = curve_37a1();
        let p = generator_37a1();
        assert_eq!(e.neg(&p), e.point_i64(0, -1).unwrap());
        assert_eq!(e.add(&p, &e.neg(&p)).unwrap(), CurvePoint::Infinity);
        assert_eq!(e.neg(&CurvePoint::Infinity), CurvePoint::Infinity);
        assert_eq!(e.add(&p, &CurvePoint::Infinity).unwrap(), p);
    }

    #[test]
    fn short_form_negation() {
        let e = split_two_torsion(11);
        for p in e.enumerate_points().unwrap() {
            if let CurvePoint::Affine { x, y } = &p {
                assert_eq!(e.neg(&p), CurvePoint::affine(x.clone(), y.neg()));
            }
        }
    }

    #[test]
    fn two_torsion_over_f11() {
        let e = split_two_torsion(11);
        let t = e.full_two_torsion().unwrap();
        let expect: Vec<CurvePoint> =
            [(0, 0), (2, 0), (5, 0)].iter().map(|&(x, y)| e.point_i64(x, y).unwrap()).collect();
        assert_eq!(t, expect);
        assert_eq!(e.add(&t[0], &t[1]).unwrap(), t[2]);
        for p in &t {
            assert!(e.scalar_mul(2, p).unwrap().is_infinity());
        }
    }

    #[test]
    fn no_two_torsion_on_37a1() {
        assert!(curve_37a1().full_two_torsion().unwrap().is_empty());
    }

    #[test]
    fn rational_two_torsion_found() {
        // y^2 = x^3 - x has (0,0), (1,0), (-1,0).
        let e = EllipticCurve::new(Field::Rational, [0, 0, 0, -1, 0]).unwrap();
        assert_eq!(e.full_two_torsion().unwrap().len(), 3);
    }

    #[test]
    fn off_curve_and_singular_rejected() {
        let e = curve_37a1();
        assert!(e.point_i64(1, 1).is_err());
        let bad = CurvePoint::affine(Field::Rational.from_i64(1), Field::Rational.from_i64(1));
        assert!(matches!(e.add(&bad, &bad), Err(Error::Structural(_))));
        assert!(EllipticCurve::new(Field::Rational, [0, 0, 0, 0, 0]).is_err());
    }

    #[test]
    fn group_order_annihilates() {
        let e = split_two_torsion(101);
        let pts = e.enumerate_points().unwrap();
        let n = pts.len() as i64;
        for p in &pts {
            assert!(e.scalar_mul(n, p).unwrap().is_infinity());
        }
    }
}
