use serde::{Deserialize, Serialize};

use super::perm::Permutation;
use crate::divisor::q_int;
use crate::error::{structural, Result};
use crate::formal::Lin;

/// `(s, p)` in `(Z/2)^b x| S_b`, acting on `E^b` by first permuting the
/// factors with `p` and then negating factor `k` when `s[k] = -1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SignedGroupElement {
    pub signs: Vec<i8>,
    pub perm: Permutation,
}

impl SignedGroupElement {
    pub fn new(signs: Vec<i8>, perm: Permutation) -> Result<SignedGroupElement> {
        if signs.len() != perm.degree() || signs.iter().any(|s| *s != 1 && *s != -1) {
            return structural("sign vector must have entries +-1 and match the permutation degree");
        }
        Ok(SignedGroupElement { signs, perm })
    }

    pub fn identity(b: usize) -> SignedGroupElement {
        SignedGroupElement { signs: vec![1; b], perm: Permutation::identity(b) }
    }

    /// Negation of factor `k` (0-based).
    pub fn inversion(b: usize, k: usize) -> SignedGroupElement {
        let mut signs = vec![1; b];
        signs[k] = -1;
        SignedGroupElement { signs, perm: Permutation::identity(b) }
    }

    pub fn degree(&self) -> usize {
        self.perm.degree()
    }

    pub fn multiply(&self, o: &SignedGroupElement) -> Result<SignedGroupElement> {
        let perm = self.perm.compose(&o.perm)?;
        let moved = self.perm.permute(&o.signs);
        let signs = self.signs.iter().zip(&moved).map(|(a, b)| a * b).collect();
        Ok(SignedGroupElement { signs, perm })
    }

    /// `sgn(p) * prod s_k`.
    pub fn character(&self) -> i64 {
        self.perm.sign() * self.signs.iter().map(|&s| s as i64).product::<i64>()
    }

    /// Acts on a vector of coordinates, negating with `neg`.
    pub fn act<T: Clone>(&self, coords: &[T], neg: impl Fn(&T) -> T) -> Vec<T> {
        let mut out = self.perm.permute(coords);
        for (k, s) in self.signs.iter().enumerate() {
            if *s < 0 {
                out[k] = neg(&out[k]);
            }
        }
        out
    }

    pub fn all(b: usize) -> Vec<SignedGroupElement> {
        let mut out = Vec::new();
        for p in Permutation::all(b) {
            for mask in 0..(1u32 << b) {
                let signs = (0..b).map(|k| if mask >> k & 1 == 1 { -1 } else { 1 }).collect();
                out.push(SignedGroupElement { signs, perm: p.clone() });
            }
        }
        out
    }
}

/// An element of `Q[(Z/2)^b x| S_b]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignedAlgebraElement {
    pub b: usize,
    pub terms: Lin<SignedGroupElement>,
}

impl SignedAlgebraElement {
    pub fn multiply(&self, o: &SignedAlgebraElement) -> Result<SignedAlgebraElement> {
        if self.b != o.b {
            return structural("signed group algebra degrees differ");
        }
        let mut terms = Lin::new();
        for (g, a) in &self.terms {
            for (h, c) in &o.terms {
                terms.add(g.multiply(h)?, a * c);
            }
        }
        Ok(SignedAlgebraElement { b: self.b, terms })
    }
}

/// `Alt_{G_c} = sum_{g in G_c} chi(g) g`.
pub fn alt_signed_group(c: usize) -> SignedAlgebraElement {
    let terms = SignedGroupElement::all(c).into_iter().map(|g| {
        let s = g.character();
        (g, q_int(s))
    });
    SignedAlgebraElement { b: c, terms: terms.collect() }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alt_small_cases() {
        let a1 = alt_signed_group(1);
        assert_eq!(a1.terms.len(), 2);
        assert_eq!(a1.terms.coefficient(&SignedGroupElement::inversion(1, 0)), q_int(-1));
        assert_eq!(alt_signed_group(2).terms.len(), 8);
    }

    #[test]
    fn alt_squares_to_multiple() {
        for c in 0..=3usize {
            let a = alt_signed_group(c);
            let order = (1..=c as i64).product::<i64>() << c;
            let sq = a.multiply(&a).unwrap();
            assert_eq!(sq.terms, a.terms.scaled(&q_int(order)));
        }
    }

    #[test]
    fn product_matches_action() {
        let b = 3;
        let x = vec![1i64, 2, 3];
        let all = SignedGroupElement::all(b);
        for g in all.iter().step_by(5) {
            for h in all.iter().step_by(7) {
                let lhs = g.multiply(h).unwrap().act(&x, |v| -v);
                let rhs = g.act(&h.act(&x, |v| -v), |v| -v);
                assert_eq!(lhs, rhs);
            }
        }
    }
}
