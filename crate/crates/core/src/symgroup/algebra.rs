use std::fmt;

use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use super::perm::Permutation;
use crate::divisor::q_int;
use crate::error::{structural, Result};
use crate::formal::Lin;
use crate::scalar::rational_string;
use crate::Q;

/// How a permutation acts on the right: `x . s := eps(s) s^-1 (x)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SignConvention {
    /// `eps(s) = sgn(s)`.
    Signature,
    /// `eps(s) = (-1)^(|s|+1)` with `|s|` the minimal transposition count.
    TranspositionCountPlusOne,
}

impl SignConvention {
    pub fn sign(&self, s: &Permutation) -> i64 {
        match self {
            SignConvention::Signature => s.sign(),
            SignConvention::TranspositionCountPlusOne => -s.sign(),
        }
    }
}

/// An element of `Q[S_b]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupAlgebraElement {
    b: usize,
    terms: Lin<Permutation>,
}

impl GroupAlgebraElement {
    pub fn zero(b: usize) -> GroupAlgebraElement {
        GroupAlgebraElement { b, terms: Lin::new() }
    }

    pub fn identity(b: usize) -> GroupAlgebraElement {
        GroupAlgebraElement::from_perm(Permutation::identity(b))
    }

    pub fn from_perm(p: Permutation) -> GroupAlgebraElement {
        GroupAlgebraElement { b: p.degree(), terms: Lin::basis(p) }
    }

    pub fn from_terms<I>(b: usize, terms: I) -> Result<GroupAlgebraElement>
    where
        I: IntoIterator<Item = (Permutation, Q)>,
    {
        let mut out = GroupAlgebraElement::zero(b);
        for (p, c) in terms {
            if p.degree() != b {
                return structural(format!("permutation of degree {} in Q[S_{b}]", p.degree()));
            }
            out.terms.add(p, c);
        }
        Ok(out)
    }

    /// `sum_{g in group} g`.
    pub fn sum_of(b: usize, group: &[Permutation]) -> GroupAlgebraElement {
        GroupAlgebraElement { b, terms: group.iter().map(|g| (g.clone(), Q::one())).collect() }
    }

    /// `sum_{g in group} sgn(g) g`.
    pub fn signed_sum_of(b: usize, group: &[Permutation]) -> GroupAlgebraElement {
        GroupAlgebraElement { b, terms: group.iter().map(|g| (g.clone(), q_int(g.sign()))).collect() }
    }

    pub fn degree(&self) -> usize {
        self.b
    }

    pub fn terms(&self) -> &Lin<Permutation> {
        &self.terms
    }

    pub fn coefficient(&self, p: &Permutation) -> Q {
        self.terms.coefficient(p)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_zero()
    }

    fn check(&self, o: &GroupAlgebraElement) -> Result<()> {
        if self.b != o.b {
            return structural(format!("group algebra degrees {} and {} differ", self.b, o.b));
        }
        Ok(())
    }

    pub fn plus(&self, o: &GroupAlgebraElement) -> Result<GroupAlgebraElement> {
        self.check(o)?;
        Ok(GroupAlgebraElement { b: self.b, terms: self.terms.plus(&o.terms) })
    }

    pub fn minus(&self, o: &GroupAlgebraElement) -> Result<GroupAlgebraElement> {
        self.check(o)?;
        Ok(GroupAlgebraElement { b: self.b, terms: self.terms.minus(&o.terms) })
    }

    pub fn scaled(&self, s: &Q) -> GroupAlgebraElement {
        GroupAlgebraElement { b: self.b, terms: self.terms.scaled(s) }
    }

    /// Bilinear extension of composition.
    pub fn multiply(&self, o: &GroupAlgebraElement) -> Result<GroupAlgebraElement> {
        self.check(o)?;
        let mut terms = Lin::new();
        for (p, a) in &self.terms {
            for (q, c) in &o.terms {
                terms.add(p.compose(q)?, a * c);
            }
        }
        Ok(GroupAlgebraElement { b: self.b, terms })
    }

    /// The element that realizes the right action on the left:
    /// `x . self = right_action_element(conv) (x)`.
    pub fn right_action_element(&self, conv: SignConvention) -> GroupAlgebraElement {
        GroupAlgebraElement {
            b: self.b,
            terms: self.terms.iter().map(|(p, c)| (p.inverse(), c * q_int(conv.sign(p)))).collect(),
        }
    }

    /// The anti-involution `s -> sgn(s) s^-1`, extended linearly. On a Young
    /// symmetrizer it exchanges the roles of rows and columns.
    pub fn transpose(&self) -> GroupAlgebraElement {
        self.right_action_element(SignConvention::Signature)
    }

    /// Acts on a formal combination through a permutation action on basis
    /// vectors; `act(p, k)` returns the image of `k` with a sign.
    pub fn act<K, F>(&self, v: &Lin<K>, mut act: F) -> Lin<K>
    where
        K: Ord + Clone,
        F: FnMut(&Permutation, &K) -> (K, i64),
    {
        let mut out = Lin::new();
        for (p, a) in &self.terms {
            for (k, c) in v {
                let (img, s) = act(p, k);
                out.add(img, a * c * q_int(s));
            }
        }
        out
    }

    /// Divides by `lambda` so a quasi-idempotent with `e^2 = lambda e`
    /// becomes idempotent.
    pub fn normalized(&self, lambda: &Q) -> GroupAlgebraElement {
        self.scaled(&lambda.recip())
    }

    /// Returns `lambda` if `self^2 = lambda self`.
    pub fn quasi_idempotent_constant(&self) -> Result<Option<Q>> {
        let sq = self.multiply(self)?;
        let Some((p, c)) = self.terms.iter().next() else {
            return Ok(None);
        };
        let lambda = sq.coefficient(p) / c;
        Ok((sq == self.scaled(&lambda)).then_some(lambda))
    }
}

impl fmt::Display for GroupAlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (p, c) in &self.terms {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            if !mag.is_one() {
                write!(f, "{}*", rational_string(&mag))?;
            }
            write!(f, "{p}")?;
            first = false;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(b: usize, c: &[usize]) -> Permutation {
        Permutation::from_cycles(b, &[c]).unwrap()
    }

    #[test]
    fn annihilating_pair() {
        let e = GroupAlgebraElement::identity(2);
        let s = GroupAlgebraElement::from_perm(t(2, &[1, 2]));
        let sym = e.plus(&s).unwrap();
        let alt = e.minus(&s).unwrap();
        assert!(sym.multiply(&alt).unwrap().is_zero());
        assert_eq!(e.multiply(&sym).unwrap(), sym);
    }

    #[test]
    fn degree_mismatch() {
        let a = GroupAlgebraElement::identity(2);
        let b = GroupAlgebraElement::identity(3);
        assert!(a.multiply(&b).is_err());
    }

    #[test]
    fn transpose_is_involution() {
        let x = GroupAlgebraElement::from_terms(
            3,
            [(t(3, &[1, 2, 3]), q_int(2)), (t(3, &[1, 3]), q_int(-5)), (Permutation::identity(3), q_int(1))],
        )
        .unwrap();
        assert_eq!(x.transpose().transpose(), x);
    }

    #[test]
    fn display_form() {
        let x = GroupAlgebraElement::identity(2).minus(&GroupAlgebraElement::from_perm(t(2, &[1, 2]))).unwrap();
        assert_eq!(x.to_string(), "e - (12)");
    }
}
