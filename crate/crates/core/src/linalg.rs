//! Exact sparse linear algebra over `Q` on formal combinations.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::formal::Lin;
use crate::Q;

type Row = BTreeMap<usize, Q>;

/// Incremental row echelon form of the system `sum_j x_j cols[j] = rhs`.
struct Echelon {
    /// pivot column -> (row, rhs)
    pivots: BTreeMap<usize, (Row, Q)>,
}

impl Echelon {
    fn new() -> Echelon {
        Echelon { pivots: BTreeMap::new() }
    }

    /// Eliminates the pivot columns from `row`.
    fn reduce(&self, row: &mut Row, rhs: &mut Q) {
        loop {
            let Some((&lead, _)) = row.iter().find(|(c, _)| self.pivots.contains_key(c)) else {
                break;
            };
            let (prow, prhs) = &self.pivots[&lead];
            let factor = &row[&lead] / &prow[&lead];
            for (c, v) in prow {
                let e = row.entry(*c).or_insert_with(Q::zero);
                *e -= &factor * v;
                if e.is_zero() {
                    row.remove(c);
                }
            }
            *rhs -= &factor * prhs;
        }
    }

    /// Adds an equation; returns `false` if it reduces to `0 = nonzero`.
    fn insert(&mut self, mut row: Row, mut rhs: Q) -> bool {
        self.reduce(&mut row, &mut rhs);
        match row.keys().next().copied() {
            Some(lead) => {
                self.pivots.insert(lead, (row, rhs));
                true
            }
            None => rhs.is_zero(),
        }
    }

    /// Back substitution with every free variable set to zero.
    fn solve(&self, ncols: usize) -> Vec<Q> {
        let mut x = vec![Q::zero(); ncols];
        for (&p, (row, rhs)) in self.pivots.iter().rev() {
            let mut acc = rhs.clone();
            for (c, v) in row.range(p + 1..) {
                acc -= v * &x[*c];
            }
            x[p] = acc / &row[&p];
        }
        x
    }
}

/// Solves `sum_j x_j cols[j] = rhs` exactly. Free variables are set to zero,
/// so the answer is deterministic given the column order.
pub fn solve<K: Ord + Clone>(cols: &[Lin<K>], rhs: &Lin<K>) -> Option<Vec<Q>> {
    let mut rows: BTreeMap<K, (Row, Q)> = BTreeMap::new();
    for (j, col) in cols.iter().enumerate() {
        for (k, c) in col {
            rows.entry(k.clone()).or_insert_with(|| (Row::new(), Q::zero())).0.insert(j, c.clone());
        }
    }
    for (k, c) in rhs {
        rows.entry(k.clone()).or_insert_with(|| (Row::new(), Q::zero())).1 = c.clone();
    }
    let mut ech = Echelon::new();
    for (_, (row, b)) in rows {
        if !ech.insert(row, b) {
            return None;
        }
    }
    Some(ech.solve(cols.len()))
}

/// Whether `target` lies in the span of `vectors`.
pub fn in_span<K: Ord + Clone>(vectors: &[Lin<K>], target: &Lin<K>) -> bool {
    solve(vectors, target).is_some()
}

/// A basis of the linear relations `sum_j x_j vectors[j] = 0`. Each basis
/// vector has a single nonzero entry (equal to one) among the non-pivot
/// positions.
pub fn kernel<K: Ord + Clone>(vectors: &[Lin<K>]) -> Vec<Vec<Q>> {
    let mut pivots: Vec<usize> = Vec::new();
    let mut out = Vec::new();
    for j in 0..vectors.len() {
        let cols: Vec<Lin<K>> = pivots.iter().map(|&i| vectors[i].clone()).collect();
        match solve(&cols, &vectors[j]) {
            Some(x) => {
                let mut rel = vec![Q::zero(); vectors.len()];
                rel[j] = Q::from_integer(1.into());
                for (&i, xi) in pivots.iter().zip(x) {
                    rel[i] = -xi;
                }
                out.push(rel);
            }
            None => pivots.push(j),
        }
    }
    out
}

/// Rank of a family of vectors.
pub fn rank<K: Ord + Clone>(vectors: &[Lin<K>]) -> usize {
    let mut index: BTreeMap<K, usize> = BTreeMap::new();
    let mut ech = Echelon::new();
    let mut r = 0;
    for v in vectors {
        let mut row = Row::new();
        for (k, c) in v {
            let n = index.len();
            let i = *index.entry(k.clone()).or_insert(n);
            row.insert(i, c.clone());
        }
        let before = ech.pivots.len();
        ech.insert(row, Q::zero());
        if ech.pivots.len() > before {
            r += 1;
        }
    }
    r
}

/// An incrementally grown subspace spanned by formal combinations.
pub struct SpanBasis<K: Ord + Clone> {
    index: BTreeMap<K, usize>,
    ech: Echelon,
}

impl<K: Ord + Clone> Default for SpanBasis<K> {
    fn default() -> Self {
        SpanBasis { index: BTreeMap::new(), ech: Echelon::new() }
    }
}

impl<K: Ord + Clone> SpanBasis<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn dimension(&self) -> usize {
        self.ech.pivots.len()
    }

    /// Reduced row of `v`, or `None` if `v` has a key never seen.
    fn row(&self, v: &Lin<K>) -> Option<Row> {
        let mut row = Row::new();
        for (k, c) in v {
            row.insert(*self.index.get(k)?, c.clone());
        }
        Some(row)
    }

    pub fn contains(&self, v: &Lin<K>) -> bool {
        let Some(mut row) = self.row(v) else {
            return v.is_zero();
        };
        let mut rhs = Q::zero();
        self.ech.reduce(&mut row, &mut rhs);
        row.is_empty()
    }

    /// Adds `v`; returns whether it was independent of the span.
    pub fn insert(&mut self, v: &Lin<K>) -> bool {
        for (k, _) in v {
            let n = self.index.len();
            self.index.entry(k.clone()).or_insert(n);
        }
        let row = self.row(v).expect("keys were just indexed");
        let before = self.ech.pivots.len();
        self.ech.insert(row, Q::zero());
        self.ech.pivots.len() > before
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divisor::q_int;

    fn v(pairs: &[(&'static str, i64)]) -> Lin<&'static str> {
        pairs.iter().map(|(k, c)| (*k, q_int(*c))).collect()
    }

    #[test]
    fn solves_consistent_system() {
        let cols = vec![v(&[("a", 1), ("b", 1)]), v(&[("b", 1), ("c", 2)]), v(&[("a", 1), ("c", -2)])];
        let rhs = v(&[("a", 3), ("b", 5), ("c", 4)]);
        let x = solve(&cols, &rhs).unwrap();
        let mut check = Lin::new();
        for (c, xi) in cols.iter().zip(&x) {
            check.add_scaled(c, xi);
        }
        assert_eq!(check, rhs);
    }

    #[test]
    fn detects_inconsistency() {
        let cols = vec![v(&[("a", 1), ("b", 1)])];
        assert!(solve(&cols, &v(&[("a", 1)])).is_none());
        assert!(in_span(&cols, &v(&[("a", 2), ("b", 2)])));
    }

    #[test]
    fn kernel_relations_vanish() {
        let vs = vec![v(&[("a", 1)]), v(&[("a", 2), ("b", 1)]), v(&[("b", 3), ("a", 6)]), v(&[("c", 1)])];
        let k = kernel(&vs);
        assert_eq!(k.len(), 1);
        let mut acc = Lin::new();
        for (x, c) in vs.iter().zip(&k[0]) {
            acc.add_scaled(x, c);
        }
        assert!(acc.is_zero());
    }

    #[test]
    fn rank_counts_independent() {
        let vs = vec![v(&[("a", 1)]), v(&[("a", 2)]), v(&[("b", 1), ("a", 1)])];
        assert_eq!(rank(&vs), 2);
    }
}
