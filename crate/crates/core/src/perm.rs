//! Permutations of `{1..n}`.
//!
//! Products are written the usual way: `a.compose(&b)` is `ab`, where `b`
//! acts first. Under this convention `(1 2)(2 3) = (1 2 3)`, so the long
//! cycle is the product of the adjacent transpositions in increasing order.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A bijection of `{1..n}` stored as its image table.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "PermutationRepr", into = "PermutationRepr")]
pub struct Permutation {
    // images[i - 1] = σ(i)
    images: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct PermutationRepr {
    n: usize,
    images: Vec<usize>,
}

impl TryFrom<PermutationRepr> for Permutation {
    type Error = Error;

    fn try_from(repr: PermutationRepr) -> Result<Self> {
        if repr.n != repr.images.len() {
            return Err(Error::SizeMismatch {
                left: repr.n,
                right: repr.images.len(),
            });
        }
        Permutation::from_images(repr.images)
    }
}

impl From<Permutation> for PermutationRepr {
    fn from(p: Permutation) -> Self {
        PermutationRepr {
            n: p.n(),
            images: p.images,
        }
    }
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (1..=n).collect(),
        }
    }

    /// Builds a permutation from its image table (1-based values).
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n + 1];
        for &x in &images {
            if x == 0 || x > n {
                return Err(Error::InvalidPermutation(format!(
                    "image {x} outside 1..={n}"
                )));
            }
            if std::mem::replace(&mut seen[x], true) {
                return Err(Error::InvalidPermutation(format!("image {x} repeated")));
            }
        }
        Ok(Permutation { images })
    }

    /// Builds a permutation of `{1..n}` from disjoint cycles; unmentioned
    /// points are fixed.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut images: Vec<usize> = (1..=n).collect();
        let mut used = vec![false; n + 1];
        for cycle in cycles {
            for (k, &x) in cycle.iter().enumerate() {
                if x == 0 || x > n {
                    return Err(Error::InvalidPermutation(format!(
                        "cycle element {x} outside 1..={n}"
                    )));
                }
                if std::mem::replace(&mut used[x], true) {
                    return Err(Error::InvalidPermutation(format!(
                        "element {x} appears in two cycles"
                    )));
                }
                images[x - 1] = cycle[(k + 1) % cycle.len()];
            }
        }
        Ok(Permutation { images })
    }

    /// The long cycle `(1, 2, ..., n)`.
    pub fn long_cycle(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyGroundSet);
        }
        Ok(Permutation {
            images: (1..=n).map(|i| if i == n { 1 } else { i + 1 }).collect(),
        })
    }

    pub fn transposition(n: usize, i: usize, j: usize) -> Result<Self> {
        if i == j {
            return Err(Error::InvalidPermutation(format!(
                "({i} {j}) is not a transposition"
            )));
        }
        Self::from_cycles(n, &[vec![i, j]])
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    /// `σ(i)` for `1 <= i <= n`.
    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.images[i - 1]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// The product `self · other`; `other` acts first.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.n() != other.n() {
            return Err(Error::SizeMismatch {
                left: self.n(),
                right: other.n(),
            });
        }
        Ok(Permutation {
            images: other.images.iter().map(|&x| self.images[x - 1]).collect(),
        })
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.n()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x - 1] = i + 1;
        }
        Permutation { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| x == i + 1)
    }

    /// All orbits, fixed points included. Each orbit starts at its minimum
    /// and follows `σ`; orbits are sorted by minimum.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut seen = vec![false; n + 1];
        let mut out = Vec::new();
        for start in 1..=n {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x);
                x = self.apply(x);
            }
            out.push(cycle);
        }
        out
    }

    pub fn num_cycles(&self) -> usize {
        let n = self.n();
        let mut seen = vec![false; n + 1];
        let mut count = 0;
        for start in 1..=n {
            if seen[start] {
                continue;
            }
            count += 1;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.apply(x);
            }
        }
        count
    }

    /// `n` minus the number of orbits: the distance to the identity in the
    /// Cayley graph generated by transpositions.
    pub fn length(&self) -> usize {
        self.n() - self.num_cycles()
    }

    /// If exactly one orbit is not a fixed point, returns it in the order
    /// visited from its minimum.
    pub fn cycle_of(&self) -> Option<Vec<usize>> {
        let mut moving = self.cycles().into_iter().filter(|c| c.len() > 1);
        let cycle = moving.next()?;
        match moving.next() {
            Some(_) => None,
            None => Some(cycle),
        }
    }

    /// Iterates over all of `S_n` in lexicographic order of image tables.
    pub fn all(n: usize) -> AllPermutations {
        AllPermutations {
            next: Some((1..=n).collect()),
        }
    }
}

/// Lexicographic enumeration of `S_n`.
pub struct AllPermutations {
    next: Option<Vec<usize>>,
}

impl Iterator for AllPermutations {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let len = succ.len();
        if len > 1 {
            if let Some(i) = (0..len - 1).rev().find(|&i| succ[i] < succ[i + 1]) {
                let j = (i + 1..len).rev().find(|&j| succ[j] > succ[i]).unwrap();
                succ.swap(i, j);
                succ[i + 1..].reverse();
                self.next = Some(succ);
            }
        }
        Some(Permutation { images: current })
    }
}

/// Whether length is additive across `total = prefix · mid`.
pub fn is_geodesic_triple(
    prefix: &Permutation,
    mid: &Permutation,
    total: &Permutation,
) -> Result<bool> {
    if total.n() != prefix.n() {
        return Err(Error::SizeMismatch {
            left: prefix.n(),
            right: total.n(),
        });
    }
    if &prefix.compose(mid)? != total {
        return Err(Error::FactorizationMismatch(format!(
            "{prefix} · {mid} is not {total}"
        )));
    }
    Ok(total.length() == prefix.length() + mid.length())
}

impl fmt::Display for Permutation {
    /// Cycle notation without fixed points; the identity prints as `()`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles: Vec<_> = self.cycles().into_iter().filter(|c| c.len() > 1).collect();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for c in cycles {
            let body: Vec<String> = c.iter().map(|x| x.to_string()).collect();
            write!(f, "({})", body.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation{:?}", self.images)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyc(n: usize, cycles: &[&[usize]]) -> Permutation {
        let owned: Vec<Vec<usize>> = cycles.iter().map(|c| c.to_vec()).collect();
        Permutation::from_cycles(n, &owned).unwrap()
    }

    #[test]
    fn long_cycle_values() {
        assert!(Permutation::long_cycle(1).unwrap().is_identity());
        assert_eq!(Permutation::long_cycle(3).unwrap().images(), &[2, 3, 1]);
        assert_eq!(
            Permutation::long_cycle(5).unwrap().images(),
            &[2, 3, 4, 5, 1]
        );
        assert_eq!(Permutation::long_cycle(0), Err(Error::EmptyGroundSet));
    }

    #[test]
    fn compose_convention() {
        let t12 = cyc(3, &[&[1, 2]]);
        let t23 = cyc(3, &[&[2, 3]]);
        let c = t12.compose(&t23).unwrap();
        assert_eq!(c, Permutation::long_cycle(3).unwrap());

        // (1,2)(2,3)…(n−1,n) is the long cycle for every n
        for n in 2..8 {
            let mut prod = Permutation::identity(n);
            for i in 1..n {
                prod = prod
                    .compose(&Permutation::transposition(n, i, i + 1).unwrap())
                    .unwrap();
            }
            assert_eq!(prod, Permutation::long_cycle(n).unwrap());
        }
    }

    #[test]
    fn compose_laws() {
        let s = cyc(4, &[&[1, 3, 2]]);
        let id = Permutation::identity(4);
        assert_eq!(id.compose(&s).unwrap(), s);
        assert!(s.compose(&s.inverse()).unwrap().is_identity());
        assert!(matches!(
            s.compose(&Permutation::identity(3)),
            Err(Error::SizeMismatch { .. })
        ));
    }

    #[test]
    fn lengths() {
        assert_eq!(Permutation::identity(4).length(), 0);
        assert_eq!(Permutation::long_cycle(3).unwrap().length(), 2);
        assert_eq!(cyc(5, &[&[1, 2], &[3, 4]]).length(), 2);
    }

    #[test]
    fn cycle_of_cases() {
        assert_eq!(cyc(3, &[&[1, 3, 2]]).cycle_of(), Some(vec![1, 3, 2]));
        assert_eq!(Permutation::identity(3).cycle_of(), None);
        assert_eq!(cyc(4, &[&[1, 2], &[3, 4]]).cycle_of(), None);
    }

    #[test]
    fn geodesic_triples_in_s3() {
        let c = Permutation::long_cycle(3).unwrap();
        let id = Permutation::identity(3);
        assert!(is_geodesic_triple(&id, &c, &c).unwrap());
        let t13 = cyc(3, &[&[1, 3]]);
        let t12 = cyc(3, &[&[1, 2]]);
        assert!(is_geodesic_triple(&t13, &t12, &c).unwrap());
        // prefix (1 3 2) forces mid = (1 3 2): lengths 2 + 2 > 2
        let back = cyc(3, &[&[1, 3, 2]]);
        let mid = back.inverse().compose(&c).unwrap();
        assert!(!is_geodesic_triple(&back, &mid, &c).unwrap());
        // precondition violated
        assert!(is_geodesic_triple(&t12, &t13, &c).is_err());

        // exhaustively, the geodesic prefixes of C in S_3 number Catalan(3) = 5
        let count = Permutation::all(3)
            .filter(|p| {
                let mid = p.inverse().compose(&c).unwrap();
                is_geodesic_triple(p, &mid, &c).unwrap()
            })
            .count();
        assert_eq!(count, 5);
    }

    #[test]
    fn all_permutations_counts() {
        assert_eq!(Permutation::all(1).count(), 1);
        assert_eq!(Permutation::all(4).count(), 24);
        let v: Vec<_> = Permutation::all(5).collect();
        assert_eq!(v.len(), 120);
        assert!(v.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn json_form() {
        let p = Permutation::from_images(vec![2, 1, 4, 3]).unwrap();
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"n":4,"images":[2,1,4,3]}"#);
        assert_eq!(serde_json::from_str::<Permutation>(&s).unwrap(), p);
        assert!(serde_json::from_str::<Permutation>(r#"{"n":3,"images":[1,1,2]}"#).is_err());
        assert!(serde_json::from_str::<Permutation>(r#"{"n":2,"images":[1,2,3]}"#).is_err());
    }

    #[test]
    fn display() {
        assert_eq!(cyc(5, &[&[1, 2], &[3, 5, 4]]).to_string(), "(1 2)(3 5 4)");
        assert_eq!(Permutation::identity(2).to_string(), "()");
    }
}
