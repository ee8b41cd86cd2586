use serde::{Deserialize, Serialize};

use super::algebra::GroupAlgebraElement;
use super::perm::Permutation;
use crate::error::{structural, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ShapeMode {
    Tableau,
    Tabloid,
}

/// A Young diagram filled bijectively with `1..b`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct YoungShape {
    rows: Vec<Vec<usize>>,
    mode: ShapeMode,
}

impl YoungShape {
    pub fn new(rows: Vec<Vec<usize>>, mode: ShapeMode) -> Result<YoungShape> {
        let b: usize = rows.iter().map(Vec::len).sum();
        if rows.iter().any(Vec::is_empty) {
            return structural("empty row in Young shape");
        }
        if rows.windows(2).any(|w| w[0].len() < w[1].len()) {
            return structural("row lengths must weakly decrease");
        }
        let mut seen = vec![false; b];
        for &v in rows.iter().flatten() {
            if v == 0 || v > b || seen[v - 1] {
                return structural(format!("filling {rows:?} is not a bijection onto 1..{b}"));
            }
            seen[v - 1] = true;
        }
        Ok(YoungShape { rows, mode })
    }

    pub fn tableau(rows: Vec<Vec<usize>>) -> Result<YoungShape> {
        YoungShape::new(rows, ShapeMode::Tableau)
    }

    pub fn tabloid(rows: Vec<Vec<usize>>) -> Result<YoungShape> {
        YoungShape::new(rows, ShapeMode::Tabloid)
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub fn mode(&self) -> ShapeMode {
        self.mode
    }

    pub fn size(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn row_lengths(&self) -> Vec<usize> {
        self.rows.iter().map(Vec::len).collect()
    }

    pub fn columns(&self) -> Vec<Vec<usize>> {
        let width = self.rows.first().map_or(0, Vec::len);
        (0..width)
            .map(|c| self.rows.iter().filter_map(|r| r.get(c).copied()).collect())
            .collect()
    }

    /// Flips the filled diagram about its diagonal; the mode is kept.
    pub fn transposed(&self) -> YoungShape {
        YoungShape { rows: self.columns(), mode: self.mode }
    }

    fn zero_based(blocks: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
        blocks.into_iter().map(|b| b.into_iter().map(|v| v - 1).collect()).collect()
    }

    pub fn row_group(&self) -> Vec<Permutation> {
        Permutation::block_preserving(self.size(), &Self::zero_based(self.rows.clone()))
    }

    pub fn column_group(&self) -> Vec<Permutation> {
        Permutation::block_preserving(self.size(), &Self::zero_based(self.columns()))
    }

    /// `c_T = sum_{g in R(T)} g`.
    pub fn row_sum(&self) -> GroupAlgebraElement {
        GroupAlgebraElement::sum_of(self.size(), &self.row_group())
    }

    /// `d_T = sum_{h in C(T)} sgn(h) h`.
    pub fn column_signed_sum(&self) -> GroupAlgebraElement {
        GroupAlgebraElement::signed_sum_of(self.size(), &self.column_group())
    }

    /// `c_T d_T` for a tableau.
    pub fn young_symmetrizer(&self) -> Result<GroupAlgebraElement> {
        if self.mode != ShapeMode::Tableau {
            return structural("young_symmetrizer needs a tableau, got a tabloid");
        }
        self.row_sum().multiply(&self.column_signed_sum())
    }

    /// `c_T` for a tabloid.
    pub fn tabloid_row_projector(&self) -> Result<GroupAlgebraElement> {
        if self.mode != ShapeMode::Tabloid {
            return structural("tabloid_row_projector needs a tabloid, got a tableau");
        }
        Ok(self.row_sum())
    }

    /// The projector attached to the shape in its own mode.
    pub fn projector(&self) -> Result<GroupAlgebraElement> {
        match self.mode {
            ShapeMode::Tableau => self.young_symmetrizer(),
            ShapeMode::Tabloid => self.tabloid_row_projector(),
        }
    }

    /// Rows and columns exchanged. For a tableau this is the symmetrizer of
    /// the transposed filling; for a tabloid it is the signed sum over the
    /// columns of the transposed filling.
    pub fn transpose_projector(&self) -> Result<GroupAlgebraElement> {
        let t = self.transposed();
        match self.mode {
            ShapeMode::Tableau => t.young_symmetrizer(),
            ShapeMode::Tabloid => Ok(t.column_signed_sum()),
        }
    }

    /// `b! / dim S^lambda`, the quasi-idempotency constant of `c_T d_T`.
    pub fn quasi_idempotency_constant(&self) -> u64 {
        let b = self.size() as u64;
        (1..=b).product::<u64>() / hook_length_dimension(&self.row_lengths())
    }
}

/// `dim S^lambda` by the hook length formula.
pub fn hook_length_dimension(shape: &[usize]) -> u64 {
    let b: usize = shape.iter().sum();
    let mut hooks: u64 = 1;
    for (r, &len) in shape.iter().enumerate() {
        for c in 0..len {
            let arm = len - c - 1;
            let leg = shape[r + 1..].iter().filter(|&&l| l > c).count();
            hooks *= (arm + leg + 1) as u64;
        }
    }
    (1..=b as u64).product::<u64>() / hooks
}

/// Partitions of `b` in decreasing lexicographic order.
pub fn partitions(b: usize) -> Vec<Vec<usize>> {
    fn go(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for part in (1..=rest.min(max)).rev() {
            cur.push(part);
            go(rest - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(b, b, &mut Vec::new(), &mut out);
    out
}

/// All standard fillings of a shape (rows and columns increasing).
pub fn standard_tableaux(shape: &[usize]) -> Vec<YoungShape> {
    let b: usize = shape.iter().sum();
    let mut rows: Vec<Vec<usize>> = shape.iter().map(|_| Vec::new()).collect();
    let mut out = Vec::new();
    fn go(v: usize, b: usize, shape: &[usize], rows: &mut Vec<Vec<usize>>, out: &mut Vec<YoungShape>) {
        if v > b {
            out.push(YoungShape::tableau(rows.clone()).expect("standard filling"));
            return;
        }
        for r in 0..shape.len() {
            let len = rows[r].len();
            let fits_row = len < shape[r];
            let fits_col = r == 0 || rows[r - 1].len() > len;
            if fits_row && fits_col {
                rows[r].push(v);
                go(v + 1, b, shape, rows, out);
                rows[r].pop();
            }
        }
    }
    go(1, b, shape, &mut rows, &mut out);
    out
}
