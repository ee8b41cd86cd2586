//! Parametric cycles: maps from a product of copies of `E` (the free
//! parameters) to `E^b x (P^1 - {1})^c`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::curve::{CurvePoint, EllipticCurve};
use crate::error::{degenerate, Result};

/// Index of a function registered in a [`super::Context`].
pub type FunId = usize;

/// `sum_k coeffs[k] t_k + constant` with `t_k` the free parameters.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Affine {
    pub coeffs: Vec<i64>,
    pub constant: CurvePoint,
}

impl Affine {
    pub fn param(d: usize, k: usize) -> Affine {
        let mut coeffs = vec![0; d];
        coeffs[k] = 1;
        Affine { coeffs, constant: CurvePoint::Infinity }
    }

    pub fn constant(d: usize, p: CurvePoint) -> Affine {
        Affine { coeffs: vec![0; d], constant: p }
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn negated(&self, curve: &EllipticCurve) -> Affine {
        Affine {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
            constant: curve.neg(&self.constant),
        }
    }

    /// `sum_i w_i a_i` for affine forms over the same parameters.
    pub fn combination(curve: &EllipticCurve, d: usize, terms: &[(i64, &Affine)]) -> Result<Affine> {
        let mut coeffs = vec![0i64; d];
        for (w, a) in terms {
            for (c, x) in coeffs.iter_mut().zip(&a.coeffs) {
                *c += w * x;
            }
        }
        let constant = curve.combine(terms.iter().map(|(w, a)| (*w, &a.constant)))?;
        Ok(Affine { coeffs, constant })
    }

    /// Replaces `t_j` by `expr` (which must not involve `t_j`) and drops
    /// the `j`-th parameter.
    fn substitute(&self, curve: &EllipticCurve, j: usize, expr: &Affine) -> Result<Affine> {
        let aj = self.coeffs[j];
        let mut coeffs: Vec<i64> = self.coeffs.iter().zip(&expr.coeffs).map(|(a, e)| a + aj * e).collect();
        coeffs.remove(j);
        let constant = curve.combine([(1, &self.constant), (aj, &expr.constant)])?;
        Ok(Affine { coeffs, constant })
    }

    /// Rewrites in new parameters `s` where `t = m s + shift`.
    fn reparametrize(&self, curve: &EllipticCurve, m: &[Vec<i64>], shift: &[CurvePoint]) -> Result<Affine> {
        let d = m.len();
        let coeffs = (0..d).map(|k| (0..d).map(|i| self.coeffs[i] * m[i][k]).sum()).collect();
        let mut terms: Vec<(i64, &CurvePoint)> = vec![(1, &self.constant)];
        terms.extend(self.coeffs.iter().copied().zip(shift));
        Ok(Affine { coeffs, constant: curve.combine(terms)? })
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        for (k, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { "-" } else if s.is_empty() { "" } else { "+" };
            let mag = if c.abs() == 1 { String::new() } else { c.abs().to_string() };
            s.push_str(&format!("{sign}{mag}t{}", k + 1));
        }
        if !self.constant.is_infinity() || s.is_empty() {
            if !s.is_empty() {
                s.push('+');
            }
            s.push_str(&point_text(&self.constant));
        }
        s
    }
}

pub(crate) fn point_text(p: &CurvePoint) -> String {
    match p {
        CurvePoint::Infinity => "O".into(),
        _ => p.label(),
    }
}

/// A cube coordinate: a function of some affine arguments, or a function
/// evaluated at fixed points (a constant coordinate with empty faces).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum QCoord {
    Fun { f: FunId, args: Vec<Affine> },
    Const { f: FunId, args: Vec<CurvePoint> },
}

impl QCoord {
    pub fn function(&self) -> FunId {
        match self {
            QCoord::Fun { f, .. } | QCoord::Const { f, .. } => *f,
        }
    }
}

/// A parametric cycle in `E^b x (P^1 - {1})^c`.
///
/// Every free parameter must be visible in the `E` coordinates with a
/// unimodular coefficient minor, so the image has dimension `params`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ParamCycle {
    pub params: usize,
    pub ecoords: Vec<Affine>,
    pub qcoords: Vec<QCoord>,
}

impl ParamCycle {
    pub fn point(p: CurvePoint) -> ParamCycle {
        ParamCycle { params: 0, ecoords: vec![Affine::constant(0, p)], qcoords: Vec::new() }
    }

    pub fn b(&self) -> usize {
        self.ecoords.len()
    }

    pub fn c(&self) -> usize {
        self.qcoords.len()
    }

    pub fn codimension(&self) -> usize {
        self.b() + self.c() - self.params
    }

    /// Cohomological degree `b - c` of the cycle's `h1^{(x) b}`-decorated class.
    pub fn degree(&self) -> i64 {
        self.b() as i64 - self.c() as i64
    }

    /// Applies `f` to every affine form (E coordinates and function arguments).
    pub(crate) fn map_affine<F>(&self, params: usize, mut f: F) -> Result<ParamCycle>
    where
        F: FnMut(&Affine) -> Result<Affine>,
    {
        let ecoords = self.ecoords.iter().map(&mut f).collect::<Result<Vec<_>>>()?;
        let mut qcoords = Vec::with_capacity(self.qcoords.len());
        for q in &self.qcoords {
            qcoords.push(match q {
                QCoord::Fun { f: id, args } => QCoord::Fun {
                    f: *id,
                    args: args.iter().map(&mut f).collect::<Result<Vec<_>>>()?,
                },
                QCoord::Const { .. } => q.clone(),
            });
        }
        Ok(ParamCycle { params, ecoords, qcoords })
    }

    /// Eliminates parameter `j` via `t_j = expr`.
    pub(crate) fn substitute(&self, curve: &EllipticCurve, j: usize, expr: &Affine) -> Result<ParamCycle> {
        self.map_affine(self.params - 1, |a| a.substitute(curve, j, expr))
    }

    /// Rewrites the cycle so that the first unimodular block of `E`
    /// coordinates (lexicographically by row indices) is exactly the list of
    /// parameters. The result depends only on the ordered coordinate lists,
    /// not on how the parameters were originally chosen.
    pub fn normalized(&self, curve: &EllipticCurve) -> Result<ParamCycle> {
        Ok(self.normalized_with_pivots(curve)?.0)
    }

    /// [`Self::normalized`] together with the pivot rows, in parameter order.
    pub(crate) fn normalized_with_pivots(&self, curve: &EllipticCurve) -> Result<(ParamCycle, Vec<usize>)> {
        let d = self.params;
        if d == 0 {
            return Ok((self.clone(), Vec::new()));
        }
        let rows: Vec<&Vec<i64>> = self.ecoords.iter().map(|a| &a.coeffs).collect();
        let Some(pivots) = first_unimodular_minor(&rows, d) else {
            return degenerate(format!("no unimodular parametrization for {}", self.render()));
        };
        let block: Vec<Vec<i64>> = pivots.iter().map(|&r| rows[r].clone()).collect();
        let inv = integer_inverse(&block);
        // t = inv (s - c) where s_k is the k-th pivot coordinate and c its constant
        let consts: Vec<CurvePoint> = pivots.iter().map(|&r| self.ecoords[r].constant.clone()).collect();
        let mut shift = Vec::with_capacity(d);
        for row in &inv {
            shift.push(curve.combine(row.iter().map(|&m| -m).zip(&consts))?);
        }
        Ok((self.map_affine(d, |a| a.reparametrize(curve, &inv, &shift))?, pivots))
    }

    pub fn render(&self) -> String {
        let mut parts: Vec<String> = self.ecoords.iter().map(Affine::render).collect();
        for q in &self.qcoords {
            parts.push(match q {
                QCoord::Fun { f, args } => {
                    format!("f{}({})", f, args.iter().map(Affine::render).collect::<Vec<_>>().join(","))
                }
                QCoord::Const { f, args } => {
                    format!("f{}[{}]", f, args.iter().map(point_text).collect::<Vec<_>>().join(","))
                }
            });
        }
        format!("({})", parts.join("; "))
    }
}

impl fmt::Display for ParamCycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

pub(crate) fn determinant(m: &[Vec<i64>]) -> i64 {
    // Bareiss fraction-free elimination
    let n = m.len();
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            let Some(s) = (k + 1..n).find(|&i| a[i][k] != 0) else {
                return 0;
            };
            a.swap(k, s);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    if n == 0 {
        return 1;
    }
    (sign * a[n - 1][n - 1]) as i64
}

fn first_unimodular_minor(rows: &[&Vec<i64>], d: usize) -> Option<Vec<usize>> {
    let b = rows.len();
    let mut pick: Vec<usize> = (0..d).collect();
    if d > b {
        return None;
    }
    loop {
        let m: Vec<Vec<i64>> = pick.iter().map(|&r| rows[r].clone()).collect();
        if determinant(&m).abs() == 1 {
            return Some(pick);
        }
        // next combination in lexicographic order
        let mut i = d;
        loop {
            if i == 0 {
                return None;
            }
            i -= 1;
            if pick[i] < b - d + i {
                break;
            }
            if i == 0 {
                return None;
            }
        }
        pick[i] += 1;
        for k in i + 1..d {
            pick[k] = pick[k - 1] + 1;
        }
    }
}

/// Inverse of a unimodular integer matrix via cofactors.
fn integer_inverse(m: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = m.len();
    let det = determinant(m);
    let mut inv = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in 0..n {
            let minor: Vec<Vec<i64>> = m
                .iter()
                .enumerate()
                .filter(|(r, _)| *r != i)
                .map(|(_, row)| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, x)| *x).collect())
                .collect();
            let cof = if (i + j) % 2 == 0 { 1 } else { -1 } * determinant(&minor);
            inv[j][i] = cof * det;
        }
    }
    inv
}
