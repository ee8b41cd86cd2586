//! Finite formal linear combinations with exact rational coefficients.

use std::collections::btree_map::{self, Entry};
use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::Q;

/// `sum c_k k` over an ordered basis; zero coefficients are never stored,
/// so structural equality is equality of combinations.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Lin<K: Ord> {
    terms: BTreeMap<K, Q>,
}

impl<K: Ord> Default for Lin<K> {
    fn default() -> Self {
        Lin { terms: BTreeMap::new() }
    }
}

impl<K: Ord + Clone> Lin<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(k: K, c: Q) -> Self {
        let mut l = Self::new();
        l.add(k, c);
        l
    }

    pub fn basis(k: K) -> Self {
        Self::single(k, Q::one())
    }

    pub fn add(&mut self, k: K, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(k) {
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

    pub fn add_scaled(&mut self, other: &Lin<K>, s: &Q) {
        for (k, c) in &other.terms {
            self.add(k.clone(), c * s);
        }
    }

    pub fn plus(&self, other: &Lin<K>) -> Lin<K> {
        let mut out = self.clone();
        out.add_scaled(other, &Q::one());
        out
    }

    pub fn minus(&self, other: &Lin<K>) -> Lin<K> {
        let mut out = self.clone();
        out.add_scaled(other, &-Q::one());
        out
    }

    pub fn scaled(&self, s: &Q) -> Lin<K> {
        let mut out = Lin::new();
        out.add_scaled(self, s);
        out
    }

    pub fn coefficient(&self, k: &K) -> Q {
        self.terms.get(k).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> btree_map::Iter<'_, K, Q> {
        self.terms.iter()
    }

    pub fn keys(&self) -> btree_map::Keys<'_, K, Q> {
        self.terms.keys()
    }

    /// Applies a linear map given on basis elements.
    pub fn map_linear<L: Ord + Clone, F>(&self, mut f: F) -> Lin<L>
    where
        F: FnMut(&K) -> Lin<L>,
    {
        let mut out = Lin::new();
        for (k, c) in &self.terms {
            out.add_scaled(&f(k), c);
        }
        out
    }

    /// Fallible variant of [`Lin::map_linear`].
    pub fn try_map_linear<L: Ord + Clone, E, F>(&self, mut f: F) -> Result<Lin<L>, E>
    where
        F: FnMut(&K) -> Result<Lin<L>, E>,
    {
        let mut out = Lin::new();
        for (k, c) in &self.terms {
            out.add_scaled(&f(k)?, c);
        }
        Ok(out)
    }
}

impl<K: Ord + Clone> FromIterator<(K, Q)> for Lin<K> {
    fn from_iter<I: IntoIterator<Item = (K, Q)>>(iter: I) -> Self {
        let mut l = Lin::new();
        for (k, c) in iter {
            l.add(k, c);
        }
        l
    }
}

impl<'a, K: Ord> IntoIterator for &'a Lin<K> {
    type Item = (&'a K, &'a Q);
    type IntoIter = btree_map::Iter<'a, K, Q>;
    fn into_iter(self) -> Self::IntoIter {
        self.terms.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divisor::q_int;

    #[test]
    fn cancellation_removes_terms() {
        let mut l = Lin::basis("a");
        l.add("a", q_int(-1));
        assert!(l.is_zero());
        let m: Lin<&str> = [("x", q_int(2)), ("y", q_int(3))].into_iter().collect();
        assert_eq!(m.minus(&m), Lin::new());
        assert_eq!(m.coefficient(&"y"), q_int(3));
    }
}
