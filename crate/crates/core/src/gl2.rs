//! Pure-motive labels `Sym^n h1(E)(-m)` and `GL_2` label arithmetic.
//!
//! Closed forms for tensor products and symmetric/exterior squares live
//! here together with a character model (weights with a determinant
//! marker) used to check them. Formal vectors in `h1^{(x) b}` carry the
//! Lie algebra action used to read labels off decorated cycles.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::divisor::q_int;
use crate::formal::Lin;
use crate::symgroup::Permutation;
use crate::Q;

/// `Sym^n h1(E)(-m)`: dimension `n+1`, Adams weight `n + 2m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PureMotive {
    pub n: u32,
    pub m: i64,
}

impl PureMotive {
    pub fn new(n: u32, m: i64) -> PureMotive {
        PureMotive { n, m }
    }

    /// `h1(E)`.
    pub fn h1() -> PureMotive {
        PureMotive::new(1, 0)
    }

    /// `Q(-1)`.
    pub fn tate() -> PureMotive {
        PureMotive::new(0, 1)
    }

    pub fn dimension(&self) -> u64 {
        self.n as u64 + 1
    }

    pub fn weight(&self) -> i64 {
        self.n as i64 + 2 * self.m
    }

    pub fn is_effective(&self) -> bool {
        self.m >= 0
    }

    /// `self(-t)`.
    pub fn twisted(&self, t: i64) -> PureMotive {
        PureMotive::new(self.n, self.m + t)
    }
}

impl fmt::Display for PureMotive {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Sym^{} h1(E)({})", self.n, -self.m)
    }
}

/// A multiset of pure motives.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MotiveSum {
    parts: BTreeMap<PureMotive, u64>,
}

impl MotiveSum {
    pub fn new() -> MotiveSum {
        MotiveSum::default()
    }

    pub fn single(v: PureMotive) -> MotiveSum {
        let mut s = MotiveSum::new();
        s.add(v, 1);
        s
    }

    pub fn add(&mut self, v: PureMotive, mult: u64) {
        if mult > 0 {
            *self.parts.entry(v).or_insert(0) += mult;
        }
    }

    pub fn parts(&self) -> &BTreeMap<PureMotive, u64> {
        &self.parts
    }

    pub fn multiplicity(&self, v: &PureMotive) -> u64 {
        self.parts.get(v).copied().unwrap_or(0)
    }

    pub fn contains(&self, v: &PureMotive) -> bool {
        self.multiplicity(v) > 0
    }

    pub fn dimension(&self) -> u64 {
        self.parts.iter().map(|(v, k)| v.dimension() * k).sum()
    }

    pub fn plus(&self, o: &MotiveSum) -> MotiveSum {
        let mut out = self.clone();
        for (v, k) in &o.parts {
            out.add(*v, *k);
        }
        out
    }

    /// Distributes `clebsch_gordan` over both sums.
    pub fn tensor(&self, o: &MotiveSum) -> MotiveSum {
        let mut out = MotiveSum::new();
        for (v, a) in &self.parts {
            for (w, b) in &o.parts {
                for (u, c) in &clebsch_gordan(*v, *w).parts {
                    out.add(*u, a * b * c);
                }
            }
        }
        out
    }
}

impl fmt::Display for MotiveSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .parts
            .iter()
            .map(|(v, k)| if *k == 1 { v.to_string() } else { format!("{k}*{v}") })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// `Sym^a(-c) (x) Sym^b(-d) = sum_{k=0}^{min(a,b)} Sym^{a+b-2k}(-(c+d+k))`.
pub fn clebsch_gordan(v: PureMotive, w: PureMotive) -> MotiveSum {
    let mut out = MotiveSum::new();
    for k in 0..=v.n.min(w.n) {
        out.add(PureMotive::new(v.n + w.n - 2 * k, v.m + w.m + k as i64), 1);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SquareKind {
    Sym,
    Wedge,
}

/// `Sym^2` or `Lambda^2` of `Sym^n(-m)`.
pub fn plethysm2(kind: SquareKind, v: PureMotive) -> MotiveSum {
    let n = v.n as i64;
    let mut out = MotiveSum::new();
    let mut j = 0i64;
    loop {
        let top = match kind {
            SquareKind::Sym => 2 * n - 4 * j,
            SquareKind::Wedge => 2 * n - 4 * j - 2,
        };
        if top < 0 {
            break;
        }
        let twist = match kind {
            SquareKind::Sym => 2 * j,
            SquareKind::Wedge => 2 * j + 1,
        };
        out.add(PureMotive::new(top as u32, twist + 2 * v.m), 1);
        j += 1;
    }
    out
}

/// Which sum of the two-term cochain space a pair lands in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PairSlot {
    /// `target` is a summand of `Sym(V (x) W)`.
    SymSide,
    /// `target` is a summand of `V ^ W`.
    WedgeSide,
}

/// `Sym(V (x) W)`: `Sym^2 V` when `V = W`, else `V (x) W`.
pub fn sym_pair(v: PureMotive, w: PureMotive) -> MotiveSum {
    if v == w {
        plethysm2(SquareKind::Sym, v)
    } else {
        clebsch_gordan(v, w)
    }
}

/// `V ^ W`: `Lambda^2 V` when `V = W`, else `V (x) W`.
pub fn wedge_pair(v: PureMotive, w: PureMotive) -> MotiveSum {
    if v == w {
        plethysm2(SquareKind::Wedge, v)
    } else {
        clebsch_gordan(v, w)
    }
}

/// Effective labels of positive weight with `V <= W` whose pair sum
/// contains `target`. Empty when the target weight exceeds `weight_bound`.
pub fn enumerate_cochain_pairs(
    target: PureMotive,
    weight_bound: i64,
) -> Vec<(PureMotive, PureMotive, PairSlot)> {
    let total = target.weight();
    if total > weight_bound || total < 2 {
        return Vec::new();
    }
    let labels_of_weight = |w: i64| -> Vec<PureMotive> {
        (0..=w / 2).map(|m| PureMotive::new((w - 2 * m) as u32, m)).collect()
    };
    let mut out = Vec::new();
    for wv in 1..=total / 2 {
        for v in labels_of_weight(wv) {
            for w in labels_of_weight(total - wv) {
                if wv == total - wv && w < v {
                    continue;
                }
                if sym_pair(v, w).contains(&target) {
                    out.push((v, w, PairSlot::SymSide));
                }
                if wedge_pair(v, w).contains(&target) {
                    out.push((v, w, PairSlot::WedgeSide));
                }
            }
        }
    }
    out.sort();
    out
}

/// Whether the unordered pair `{v, w}` lands in `slot` for `target`.
pub fn pair_contributes(target: PureMotive, v: PureMotive, w: PureMotive, slot: PairSlot) -> bool {
    match slot {
        PairSlot::SymSide => sym_pair(v, w).contains(&target),
        PairSlot::WedgeSide => wedge_pair(v, w).contains(&target),
    }
}

/// Ways to write `w` as `V(c)` with `V = w(-c)`, for `0 <= c <= cmax`.
pub fn untwist_presentations(w: PureMotive, cmax: i64) -> Vec<(PureMotive, i64)> {
    (0..=cmax.max(0)).map(|c| (w.twisted(c), c)).collect()
}

/// Torus characters: `(h-weight, total degree) -> multiplicity`. The
/// character of `Sym^n(-m)` is `sum_{i=0}^n t^{n-2i} D^{n+2m}` where `D`
/// marks the degree in the defining representation.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Character {
    terms: BTreeMap<(i64, i64), i64>,
}

impl Character {
    pub fn of(v: PureMotive) -> Character {
        let mut c = Character::default();
        for i in 0..=v.n as i64 {
            c.add((v.n as i64 - 2 * i, v.weight()), 1);
        }
        c
    }

    pub fn of_sum(s: &MotiveSum) -> Character {
        let mut c = Character::default();
        for (v, k) in s.parts() {
            for (key, m) in Character::of(*v).terms {
                c.add(key, m * *k as i64);
            }
        }
        c
    }

    fn add(&mut self, key: (i64, i64), m: i64) {
        let e = self.terms.entry(key).or_insert(0);
        *e += m;
        if *e == 0 {
            self.terms.remove(&key);
        }
    }

    pub fn product(&self, o: &Character) -> Character {
        let mut c = Character::default();
        for ((a, d), x) in &self.terms {
            for ((b, e), y) in &o.terms {
                c.add((a + b, d + e), x * y);
            }
        }
        c
    }

    /// `chi(g^2)`: every exponent doubled.
    fn adams2(&self) -> Character {
        Character { terms: self.terms.iter().map(|((a, d), m)| ((2 * a, 2 * d), *m)).collect() }
    }

    /// `(chi^2 + chi(g^2))/2` or `(chi^2 - chi(g^2))/2`.
    pub fn square(&self, kind: SquareKind) -> Character {
        let sq = self.product(self);
        let ad = self.adams2();
        let sign = match kind {
            SquareKind::Sym => 1,
            SquareKind::Wedge => -1,
        };
        let mut c = Character::default();
        let keys: std::collections::BTreeSet<(i64, i64)> =
            sq.terms.keys().chain(ad.terms.keys()).copied().collect();
        for k in keys {
            let v = sq.terms.get(&k).copied().unwrap_or(0) + sign * ad.terms.get(&k).copied().unwrap_or(0);
            debug_assert!(v % 2 == 0);
            c.add(k, v / 2);
        }
        c
    }

    /// Peels highest weights off to recover the irreducible summands, or
    /// `None` if the character is not that of a genuine representation.
    pub fn decompose(&self) -> Option<MotiveSum> {
        let mut rest = self.clone();
        let mut out = MotiveSum::new();
        while let Some((&(top, deg), &mult)) = rest
            .terms
            .iter()
            .max_by_key(|((a, d), _)| (*a, std::cmp::Reverse(*d)))
        {
            if mult <= 0 || top < 0 || (deg - top) % 2 != 0 {
                return None;
            }
            let v = PureMotive::new(top as u32, (deg - top) / 2);
            for (key, m) in Character::of(v).terms {
                rest.add(key, -m * mult);
            }
            out.add(v, mult as u64);
        }
        Some(out)
    }
}

/// A basis tensor `e_{w_1} (x) ... (x) e_{w_b}` of `h1^{(x) b}`, letters 1 or 2.
pub type TensorWord = Vec<u8>;

/// A formal vector in `h1^{(x) b}`.
pub type TensorVec = Lin<TensorWord>;

/// `e1^{(x) b}` with `e2` in the listed 0-based positions.
pub fn tensor_basis(b: usize, e2_positions: &[usize]) -> TensorWord {
    let mut w = vec![1u8; b];
    for &k in e2_positions {
        w[k] = 2;
    }
    w
}

/// Places factor `i` at position `p(i)`.
pub fn permute_tensor(p: &Permutation, v: &TensorVec) -> TensorVec {
    v.iter().map(|(w, c)| (p.permute(w), c.clone())).collect()
}

fn lie_op(v: &TensorVec, from: u8, to: u8) -> TensorVec {
    let mut out = TensorVec::new();
    for (w, c) in v {
        for k in 0..w.len() {
            if w[k] == from {
                let mut x = w.clone();
                x[k] = to;
                out.add(x, c.clone());
            }
        }
    }
    out
}

/// Raising operator `E`: `e2 -> e1` in one factor.
pub fn raise(v: &TensorVec) -> TensorVec {
    lie_op(v, 2, 1)
}

/// Lowering operator `F`: `e1 -> e2` in one factor.
pub fn lower(v: &TensorVec) -> TensorVec {
    lie_op(v, 1, 2)
}

/// `H` on a basis word: `#e1 - #e2`.
pub fn h_weight(w: &TensorWord) -> i64 {
    w.iter().map(|&x| if x == 1 { 1 } else { -1 }).sum()
}

fn h_op(v: &TensorVec) -> TensorVec {
    v.iter().map(|(w, c)| (w.clone(), c * q_int(h_weight(w)))).collect()
}

/// Casimir `EF + FE + H^2/2`; acts on `Sym^n` by `n(n+2)/2`.
pub fn casimir(v: &TensorVec) -> TensorVec {
    let half = Q::new(1.into(), 2.into());
    raise(&lower(v)).plus(&lower(&raise(v))).plus(&h_op(&h_op(v)).scaled(&half))
}

pub(crate) fn casimir_eigenvalue(n: i64) -> Q {
    Q::new((n * (n + 2)).into(), 2.into())
}

/// Projection of a vector in `h1^{(x) b}` onto its `Sym^n(-(b-n)/2)` isotypic part.
pub fn isotypic_projection(v: &TensorVec, b: usize, n: u32) -> TensorVec {
    let target = casimir_eigenvalue(n as i64);
    let mut out = v.clone();
    let mut k = b as i64;
    while k >= 0 {
        if k != n as i64 {
            let lam = casimir_eigenvalue(k);
            let denom = &target - &lam;
            out = casimir(&out).minus(&out.scaled(&lam)).scaled(&denom.recip());
        }
        k -= 2;
    }
    out
}

/// The label of a nonzero Casimir eigenvector in `h1^{(x) b}`.
pub fn label_of(v: &TensorVec, b: usize) -> Option<PureMotive> {
    if v.is_zero() {
        return None;
    }
    let cv = casimir(v);
    let mut n = b as i64;
    while n >= 0 {
        if cv == v.scaled(&casimir_eigenvalue(n)) {
            return Some(PureMotive::new(n as u32, (b as i64 - n) / 2));
        }
        n -= 2;
    }
    None
}

/// Whether `E v = 0`.
pub fn is_highest_weight(v: &TensorVec) -> bool {
    raise(v).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(n: u32, m: i64) -> PureMotive {
        PureMotive::new(n, m)
    }

    #[test]
    fn cg_examples() {
        let mut want = MotiveSum::single(sym(2, 0));
        want.add(PureMotive::tate(), 1);
        assert_eq!(clebsch_gordan(PureMotive::h1(), PureMotive::h1()), want);
        assert_eq!(clebsch_gordan(sym(0, 0), sym(3, 1)), MotiveSum::single(sym(3, 1)));
        let s = clebsch_gordan(sym(2, 0), sym(2, 0));
        assert_eq!(s.to_string(), "Sym^0 h1(E)(-2) + Sym^2 h1(E)(-1) + Sym^4 h1(E)(0)");
        assert_eq!(s.dimension(), 9);
    }

    #[test]
    fn plethysm_examples() {
        assert_eq!(plethysm2(SquareKind::Wedge, PureMotive::h1()), MotiveSum::single(PureMotive::tate()));
        assert_eq!(plethysm2(SquareKind::Sym, PureMotive::h1()), MotiveSum::single(sym(2, 0)));
        let mut s = MotiveSum::single(sym(4, 0));
        s.add(sym(0, 2), 1);
        assert_eq!(plethysm2(SquareKind::Sym, sym(2, 0)), s);
        assert_eq!(plethysm2(SquareKind::Wedge, sym(2, 0)), MotiveSum::single(sym(2, 1)));
    }

    #[test]
    fn character_oracle_agrees() {
        for a in 0..=5 {
            for b in 0..=5 {
                let (v, w) = (sym(a, 1), sym(b, 0));
                let ch = Character::of(v).product(&Character::of(w));
                assert_eq!(ch.decompose().unwrap(), clebsch_gordan(v, w));
            }
            for kind in [SquareKind::Sym, SquareKind::Wedge] {
                let v = sym(a, 2);
                assert_eq!(Character::of(v).square(kind).decompose().unwrap(), plethysm2(kind, v));
            }
        }
    }

    #[test]
    fn cochain_pairs() {
        let p = enumerate_cochain_pairs(PureMotive::tate(), 10);
        assert!(p.contains(&(PureMotive::h1(), PureMotive::h1(), PairSlot::WedgeSide)));
        let q = enumerate_cochain_pairs(sym(2, 1), 10);
        assert!(q.contains(&(PureMotive::h1(), sym(1, 1), PairSlot::SymSide)));
        assert!(enumerate_cochain_pairs(sym(2, 5), 6).is_empty());
    }

    #[test]
    fn untwisting() {
        let p = untwist_presentations(sym(2, 1), 1);
        assert_eq!(p, vec![(sym(2, 1), 0), (sym(2, 2), 1)]);
        assert_eq!(untwist_presentations(sym(2, 1), 0).len(), 1);
    }

    #[test]
    fn tensor_labels() {
        let e1e2 = TensorVec::basis(vec![1, 2]);
        let e2e1 = TensorVec::basis(vec![2, 1]);
        let wedge = e1e2.minus(&e2e1);
        assert_eq!(label_of(&wedge, 2), Some(PureMotive::tate()));
        let s = TensorVec::basis(vec![1, 1]);
        assert_eq!(label_of(&s, 2), Some(sym(2, 0)));
        assert_eq!(label_of(&e1e2, 2), None);
        let proj = isotypic_projection(&e1e2, 2, 0);
        assert_eq!(proj, wedge.scaled(&Q::new(1.into(), 2.into())));
    }
}
