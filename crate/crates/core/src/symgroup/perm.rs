use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{structural, Error, Result};

/// A permutation of `{1..b}` stored 0-based in one-line notation.
///
/// Composition is right-to-left: `(s * t)(i) = s(t(i))`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    pub fn identity(b: usize) -> Permutation {
        Permutation { image: (0..b).collect() }
    }

    /// From 0-based images, rejecting non-bijections.
    pub fn from_images(image: Vec<usize>) -> Result<Permutation> {
        let b = image.len();
        let mut seen = vec![false; b];
        for &i in &image {
            if i >= b || seen[i] {
                return structural(format!("{image:?} is not a permutation"));
            }
            seen[i] = true;
        }
        Ok(Permutation { image })
    }

    /// From 1-based one-line notation.
    pub fn from_one_line(one_based: &[usize]) -> Result<Permutation> {
        let image = one_based
            .iter()
            .map(|&i| i.checked_sub(1).ok_or_else(|| Error::Structural("entry 0 in one-line notation".into())))
            .collect::<Result<Vec<_>>>()?;
        Permutation::from_images(image)
    }

    /// From 1-based disjoint cycles, e.g. `[[1,3,2]]` for `(132)`.
    pub fn from_cycles(b: usize, cycles: &[&[usize]]) -> Result<Permutation> {
        let mut image: Vec<usize> = (0..b).collect();
        let mut touched = vec![false; b];
        for cyc in cycles {
            for (k, &a) in cyc.iter().enumerate() {
                let next = cyc[(k + 1) % cyc.len()];
                if a == 0 || a > b || next == 0 || next > b || touched[a - 1] {
                    return structural(format!("bad cycle {cyc:?} for S_{b}"));
                }
                touched[a - 1] = true;
                image[a - 1] = next - 1;
            }
        }
        Permutation::from_images(image)
    }

    pub fn transposition(b: usize, i: usize, j: usize) -> Permutation {
        let mut image: Vec<usize> = (0..b).collect();
        image.swap(i, j);
        Permutation { image }
    }

    pub fn degree(&self) -> usize {
        self.image.len()
    }

    /// 0-based image of 0-based `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.image[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.image
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &j)| i == j)
    }

    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.degree() != other.degree() {
            return structural(format!(
                "composing permutations of degree {} and {}",
                self.degree(),
                other.degree()
            ));
        }
        Ok(Permutation { image: other.image.iter().map(|&i| self.image[i]).collect() })
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.degree()];
        for (i, &j) in self.image.iter().enumerate() {
            inv[j] = i;
        }
        Permutation { image: inv }
    }

    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for s in 0..self.degree() {
            if seen[s] {
                continue;
            }
            let mut cyc = vec![s];
            seen[s] = true;
            let mut k = self.image[s];
            while k != s {
                seen[k] = true;
                cyc.push(k);
                k = self.image[k];
            }
            out.push(cyc);
        }
        out
    }

    /// Number of transpositions in a minimal decomposition.
    pub fn transposition_count(&self) -> usize {
        self.degree() - self.cycles().len()
    }

    pub fn sign(&self) -> i64 {
        if self.transposition_count() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Moves entry `i` of `items` to position `self(i)`.
    pub fn permute<T: Clone>(&self, items: &[T]) -> Vec<T> {
        let mut out = items.to_vec();
        for (i, it) in items.iter().enumerate() {
            out[self.image[i]] = it.clone();
        }
        out
    }

    /// All of `S_b` in lexicographic order of one-line notation.
    pub fn all(b: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut cur: Vec<usize> = (0..b).collect();
        loop {
            out.push(Permutation { image: cur.clone() });
            // next lexicographic permutation
            let Some(i) = (1..b).rev().find(|&i| cur[i - 1] < cur[i]) else {
                break;
            };
            let j = (i..b).rev().find(|&j| cur[j] > cur[i - 1]).expect("exists");
            cur.swap(i - 1, j);
            cur[i..].reverse();
        }
        out
    }

    /// Every permutation preserving each block setwise (blocks 0-based and
    /// disjoint; unlisted points are fixed).
    pub fn block_preserving(b: usize, blocks: &[Vec<usize>]) -> Vec<Permutation> {
        let mut acc = vec![Permutation::identity(b)];
        for block in blocks {
            let local = Permutation::all(block.len());
            let mut next = Vec::with_capacity(acc.len() * local.len());
            for p in &acc {
                for l in &local {
                    let mut image = p.image.clone();
                    for (k, &src) in block.iter().enumerate() {
                        image[src] = block[l.image[k]];
                    }
                    next.push(Permutation { image });
                }
            }
            acc = next;
        }
        acc
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles: Vec<Vec<usize>> = self.cycles().into_iter().filter(|c| c.len() > 1).collect();
        if cycles.is_empty() {
            return f.write_str("e");
        }
        for c in cycles {
            let s: Vec<String> = c.iter().map(|i| (i + 1).to_string()).collect();
            let sep = if self.degree() > 9 { "," } else { "" };
            write!(f, "({})", s.join(sep))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn right_to_left_composition() {
        let s12 = Permutation::from_cycles(3, &[&[1, 2]]).unwrap();
        let s13 = Permutation::from_cycles(3, &[&[1, 3]]).unwrap();
        let want = Permutation::from_cycles(3, &[&[1, 3, 2]]).unwrap();
        assert_eq!(s12.compose(&s13).unwrap(), want);
        assert_eq!(want.to_string(), "(132)");
    }

    #[test]
    fn counts_and_signs() {
        assert_eq!(Permutation::all(4).len(), 24);
        let c = Permutation::from_cycles(4, &[&[1, 2, 3, 4]]).unwrap();
        assert_eq!(c.transposition_count(), 3);
        assert_eq!(c.sign(), -1);
        assert!(c.compose(&c.inverse()).unwrap().is_identity());
    }

    #[test]
    fn permute_moves_entries() {
        let c = Permutation::from_cycles(3, &[&[1, 2, 3]]).unwrap();
        assert_eq!(c.permute(&['a', 'b', 'c']), vec!['c', 'a', 'b']);
    }

    #[test]
    fn block_group_size() {
        let g = Permutation::block_preserving(5, &[vec![0, 2, 3], vec![1, 4]]);
        assert_eq!(g.len(), 12);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(Permutation::from_images(vec![0, 0]).is_err());
        assert!(Permutation::identity(2).compose(&Permutation::identity(3)).is_err());
    }
}
