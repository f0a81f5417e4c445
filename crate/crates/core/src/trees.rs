//! André trees with hook weights and Cayley trees with decreasing-edge
//! weights.
//!
//! Both kinds of tree are stored as parent vectors: vertex `n` is the root
//! and every other label `i` has a parent. André trees are decreasing
//! (`parent(i) > i`) and each vertex has at most two children; children
//! are unordered, so the parent vector is already canonical.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{hook_rhs, Monomial, Polynomial};

#[derive(Serialize, Deserialize)]
struct TreeRepr {
    n: usize,
    parent: BTreeMap<usize, usize>,
}

fn repr_to_parents(repr: &TreeRepr) -> Result<Vec<usize>> {
    if repr.n == 0 {
        return Err(Error::InvalidTree(
            "a tree needs at least one vertex".into(),
        ));
    }
    let expected: Vec<usize> = (1..repr.n).collect();
    let keys: Vec<usize> = repr.parent.keys().copied().collect();
    if keys != expected {
        return Err(Error::InvalidTree(format!(
            "parents must be given for exactly 1..{}",
            repr.n - 1
        )));
    }
    Ok(repr.parent.values().copied().collect())
}

fn parents_to_repr(n: usize, parent: &[usize]) -> TreeRepr {
    TreeRepr {
        n,
        parent: parent
            .iter()
            .enumerate()
            .map(|(i, &p)| (i + 1, p))
            .collect(),
    }
}

/// A decreasingly labelled tree on `{1..n}` rooted at `n` in which every
/// vertex has at most two (unordered) children.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "TreeRepr", into = "TreeRepr")]
pub struct AndreTree {
    n: usize,
    parent: Vec<usize>,
}

impl TryFrom<TreeRepr> for AndreTree {
    type Error = Error;

    fn try_from(repr: TreeRepr) -> Result<Self> {
        let parent = repr_to_parents(&repr)?;
        AndreTree::new(repr.n, parent)
    }
}

impl From<AndreTree> for TreeRepr {
    fn from(t: AndreTree) -> Self {
        parents_to_repr(t.n, &t.parent)
    }
}

impl AndreTree {
    /// `parent[i - 1]` is the parent of label `i`, for `i < n`.
    pub fn new(n: usize, parent: Vec<usize>) -> Result<Self> {
        if n == 0 || parent.len() != n - 1 {
            return Err(Error::InvalidTree(format!(
                "{n} vertices need {} parents, got {}",
                n.saturating_sub(1),
                parent.len()
            )));
        }
        let mut children = vec![0usize; n + 1];
        for (i, &p) in parent.iter().enumerate() {
            let label = i + 1;
            if p <= label || p > n {
                return Err(Error::InvalidTree(format!(
                    "parent {p} of {label} must be larger and at most {n}"
                )));
            }
            children[p] += 1;
            if children[p] > 2 {
                return Err(Error::InvalidTree(format!(
                    "vertex {p} has more than two children"
                )));
            }
        }
        Ok(AndreTree { n, parent })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Parent of `label`, or `None` for the root.
    pub fn parent(&self, label: usize) -> Option<usize> {
        self.parent.get(label.checked_sub(1)?).copied()
    }

    /// Children of `label` in increasing order.
    pub fn children(&self, label: usize) -> Vec<usize> {
        (1..label)
            .filter(|&c| self.parent[c - 1] == label)
            .collect()
    }

    /// `h_i` for `i = 1..n` (index `i - 1`): the size of the subtree rooted
    /// at `i`.
    pub fn hooks(&self) -> Vec<usize> {
        let mut h = vec![1usize; self.n];
        // children carry smaller labels, so one increasing pass suffices
        for i in 1..self.n {
            h[self.parent[i - 1] - 1] += h[i - 1];
        }
        h
    }

    pub fn leaves(&self) -> usize {
        let mut has_child = vec![false; self.n + 1];
        for &p in &self.parent {
            has_child[p] = true;
        }
        (1..=self.n).filter(|&v| !has_child[v]).count()
    }

    /// `∏_{h_i > 1} ((h_i − 1) X_{i-1} + 2)`.
    pub fn weight(&self) -> Polynomial {
        let factors: Vec<Polynomial> = self
            .hooks()
            .iter()
            .enumerate()
            .filter(|&(_, &h)| h > 1)
            .map(|(i, &h)| Polynomial::linear(i as u32, (h - 1) as i64, 2))
            .collect();
        Polynomial::product(&factors)
    }
}

/// Every André tree on `n` vertices. Labels `n−1, …, 1` are attached in
/// turn to a vertex with fewer than two children, larger parents first.
pub fn enumerate_andre(n: usize) -> Vec<AndreTree> {
    fn rec(
        label: usize,
        n: usize,
        parent: &mut Vec<usize>,
        children: &mut Vec<u8>,
        out: &mut Vec<AndreTree>,
    ) {
        if label == 0 {
            out.push(AndreTree {
                n,
                parent: parent.clone(),
            });
            return;
        }
        for p in (label + 1..=n).rev() {
            if children[p] < 2 {
                children[p] += 1;
                parent[label - 1] = p;
                rec(label - 1, n, parent, children, out);
                children[p] -= 1;
            }
        }
    }
    if n == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    rec(n - 1, n, &mut vec![0; n - 1], &mut vec![0; n + 1], &mut out);
    out
}

/// `Σ_{T ∈ A_n} wt(T)`.
pub fn andre_weighted_sum(n: usize) -> Polynomial {
    enumerate_andre(n).iter().map(AndreTree::weight).sum()
}

/// `P_0, …, P_n` computed by the two-subtree recursion
/// `2 P_m = ((m−1) X_{m-1} + 2) Σ_{I ⊎ J = {0..m-2}} P_{|I|}[I] · P_{|J|}[J]`
/// with `P_0 = P_1 = 1`, where `P[I]` renames `X_k` to `X_{i_k}`.
pub fn hook_recursion(n: usize) -> Result<Vec<Polynomial>> {
    let mut ps = vec![Polynomial::one(), Polynomial::one()];
    for m in 2..=n {
        let sum = recursion_sum(&ps, m);
        let twice = &Polynomial::linear((m - 1) as u32, (m - 1) as i64, 2) * &sum;
        let p = twice
            .div_exact(&2.into())
            .ok_or_else(|| Error::Internal(format!("recursion for P_{m} is not divisible by 2")))?;
        ps.push(p);
    }
    ps.truncate(n + 1);
    Ok(ps)
}

/// `Σ_{I ⊎ J = {0..m-2}} P_{|I|}[I] · P_{|J|}[J]`.
fn recursion_sum(ps: &[Polynomial], m: usize) -> Polynomial {
    let ground = m - 1;
    let mut sum = Polynomial::zero();
    for subset in 0u64..1 << ground {
        let (i, j): (Vec<u32>, Vec<u32>) = (0..ground as u32).partition(|&x| subset >> x & 1 == 1);
        let left = ps[i.len()].rename_vars(|k| i[k as usize]);
        let right = ps[j.len()].rename_vars(|k| j[k as usize]);
        sum += &(&left * &right);
    }
    sum
}

/// Checks `2 P_n = ((n−1) X_{n-1} + 2) Σ P_{|I|}[I] P_{|J|}[J]` with every
/// `P_m` on the right taken from the closed form, that the recursion
/// reproduces the closed form for all `m ≤ n`, and that `X_0` never occurs.
pub fn check_hook_recursion(n: usize) -> bool {
    if n < 2 {
        return false;
    }
    let closed: Vec<Polynomial> = (0..=n)
        .map(|m| {
            if m == 0 {
                Polynomial::one()
            } else {
                hook_rhs(m)
            }
        })
        .collect();
    let lhs = closed[n].scale(2);
    let rhs = &Polynomial::linear((n - 1) as u32, (n - 1) as i64, 2) * &recursion_sum(&closed, n);
    let Ok(rec) = hook_recursion(n) else {
        return false;
    };
    lhs == rhs && rec == closed && rec.iter().all(|p| !p.variables().contains(&0))
}

/// A rooted labelled tree on `{1..n}` with root `n`, edges pointing to the
/// root.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "TreeRepr", into = "TreeRepr")]
pub struct CayleyTree {
    n: usize,
    parent: Vec<usize>,
}

impl TryFrom<TreeRepr> for CayleyTree {
    type Error = Error;

    fn try_from(repr: TreeRepr) -> Result<Self> {
        let parent = repr_to_parents(&repr)?;
        CayleyTree::new(repr.n, parent)
    }
}

impl From<CayleyTree> for TreeRepr {
    fn from(t: CayleyTree) -> Self {
        parents_to_repr(t.n, &t.parent)
    }
}

/// Child-to-parent edges, e.g. `1->2 2->4 3->4`.
fn write_edges(f: &mut fmt::Formatter<'_>, parent: &[usize]) -> fmt::Result {
    if parent.is_empty() {
        return f.write_str("1");
    }
    let edges: Vec<String> = parent
        .iter()
        .enumerate()
        .map(|(i, p)| format!("{}->{p}", i + 1))
        .collect();
    f.write_str(&edges.join(" "))
}

impl fmt::Display for AndreTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_edges(f, &self.parent)
    }
}

impl fmt::Debug for AndreTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for CayleyTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_edges(f, &self.parent)
    }
}

impl fmt::Debug for CayleyTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Whether following parents from every vertex reaches `n`.
fn reaches_root(n: usize, parent: &[usize]) -> bool {
    // 0 unknown, 1 on the current path, 2 known to reach the root
    let mut state = vec![0u8; n + 1];
    state[n] = 2;
    let mut path = Vec::new();
    for start in 1..n {
        let mut v = start;
        while state[v] == 0 {
            state[v] = 1;
            path.push(v);
            v = parent[v - 1];
        }
        if state[v] == 1 {
            return false;
        }
        for u in path.drain(..) {
            state[u] = 2;
        }
    }
    true
}

impl CayleyTree {
    pub fn new(n: usize, parent: Vec<usize>) -> Result<Self> {
        if n < 1 || parent.len() != n - 1 {
            return Err(Error::InvalidTree(format!(
                "{n} vertices need {} parents, got {}",
                n.saturating_sub(1),
                parent.len()
            )));
        }
        for (i, &p) in parent.iter().enumerate() {
            if p == 0 || p > n || p == i + 1 {
                return Err(Error::InvalidTree(format!("bad parent {p} for {}", i + 1)));
            }
        }
        if !reaches_root(n, &parent) {
            return Err(Error::InvalidTree("parent pointers contain a cycle".into()));
        }
        Ok(CayleyTree { n, parent })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn parent(&self, label: usize) -> Option<usize> {
        self.parent.get(label.checked_sub(1)?).copied()
    }

    /// Bit `j − 1` is set when the edge leaving `j` is decreasing.
    fn weight_mask(parent: &[usize]) -> u64 {
        parent
            .iter()
            .enumerate()
            .filter(|&(i, &p)| p < i + 1)
            .fold(0, |m, (i, _)| m | 1 << i)
    }

    /// `∏ X_{j-1}` over the vertices `j` whose edge to the parent is
    /// decreasing (`parent(j) < j`).
    pub fn weight(&self) -> Monomial {
        Monomial::from_mask(Self::weight_mask(&self.parent))
    }
}

/// Odometer over parent vectors, skipping those with cycles.
pub struct CayleyIter {
    n: usize,
    parent: Vec<usize>,
    done: bool,
}

impl CayleyIter {
    fn advance(&mut self) -> bool {
        for i in 0..self.parent.len() {
            let mut p = self.parent[i] + 1;
            if p == i + 1 {
                p += 1;
            }
            if p <= self.n {
                self.parent[i] = p;
                return true;
            }
            self.parent[i] = if i == 0 { 2 } else { 1 };
        }
        false
    }
}

impl Iterator for CayleyIter {
    type Item = CayleyTree;

    fn next(&mut self) -> Option<CayleyTree> {
        while !self.done {
            let current = self.parent.clone();
            self.done = !self.advance();
            if reaches_root(self.n, &current) {
                return Some(CayleyTree {
                    n: self.n,
                    parent: current,
                });
            }
        }
        None
    }
}

/// All `n^{n-2}` Cayley trees on `{1..n}`.
pub fn enumerate_cayley(n: usize) -> Result<CayleyIter> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "Cayley trees need n >= 2, got {n}"
        )));
    }
    let parent = (1..n).map(|i| if i == 1 { 2 } else { 1 }).collect();
    Ok(CayleyIter {
        n,
        parent,
        done: false,
    })
}

/// `Σ wt(T)` over Cayley trees on `{1..n}`.
pub fn cayley_weighted_sum(n: usize) -> Result<Polynomial> {
    let mut counts: HashMap<u64, u64> = HashMap::new();
    for t in enumerate_cayley(n)? {
        *counts
            .entry(CayleyTree::weight_mask(&t.parent))
            .or_insert(0) += 1;
    }
    let mut p = Polynomial::zero();
    for (mask, c) in counts {
        p.add_term(Monomial::from_mask(mask), c.into());
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Permutation;
    use crate::poly::maximal_chain_rhs;

    /// Alternating permutations `σ_1 < σ_2 > σ_3 < …` of `{1..n}`.
    fn alternating(n: usize) -> usize {
        Permutation::all(n)
            .filter(|p| {
                p.images()
                    .windows(2)
                    .enumerate()
                    .all(|(i, w)| (w[0] < w[1]) == (i % 2 == 0))
            })
            .count()
    }

    fn lin(v: u32, a: i64, b: i64) -> Polynomial {
        Polynomial::linear(v, a, b)
    }

    #[test]
    fn andre_counts_are_euler_numbers() {
        let euler = [1, 1, 2, 5, 16, 61, 272];
        for n in 1..=7 {
            assert_eq!(enumerate_andre(n).len(), euler[n - 1]);
            assert_eq!(alternating(n), euler[n - 1]);
        }
    }

    #[test]
    fn figure_trees_and_terms() {
        let t = |p: [usize; 3]| AndreTree::new(4, p.to_vec()).unwrap();
        let figure = [
            t([2, 3, 4]),
            t([3, 3, 4]),
            t([2, 4, 4]),
            t([3, 4, 4]),
            t([4, 3, 4]),
        ];
        let terms = [
            Polynomial::product(&[lin(3, 3, 2), lin(2, 2, 2), lin(1, 1, 2)]),
            &lin(3, 3, 2) * &lin(2, 2, 2),
            &lin(3, 3, 2) * &lin(1, 1, 2),
            &lin(3, 3, 2) * &lin(2, 1, 2),
            &lin(3, 3, 2) * &lin(2, 1, 2),
        ];
        for (tree, term) in figure.iter().zip(&terms) {
            assert_eq!(&tree.weight(), term);
        }
        let mut all = enumerate_andre(4);
        all.sort();
        let mut expected = figure.to_vec();
        expected.sort();
        assert_eq!(all, expected);
        assert_eq!(terms.iter().cloned().sum::<Polynomial>(), hook_rhs(4));
    }

    #[test]
    fn hooks() {
        for n in 1..=6 {
            for t in enumerate_andre(n) {
                let h = t.hooks();
                assert_eq!(h[n - 1], n);
                assert_eq!(h.iter().filter(|&&x| x == 1).count(), t.leaves());
            }
        }
        assert_eq!(
            AndreTree::new(1, vec![]).unwrap().weight(),
            Polynomial::one()
        );
    }

    #[test]
    fn andre_sum() {
        for n in 1..=6 {
            assert_eq!(andre_weighted_sum(n), hook_rhs(n));
        }
    }

    #[test]
    fn recursion() {
        let ps = hook_recursion(2).unwrap();
        assert_eq!(ps[2], lin(1, 1, 2));
        for n in 2..=5 {
            assert!(check_hook_recursion(n));
        }
    }

    #[test]
    fn invalid_andre() {
        assert!(AndreTree::new(3, vec![1, 3]).is_err());
        assert!(AndreTree::new(4, vec![4, 4, 4]).is_err());
        assert!(AndreTree::new(3, vec![3]).is_err());
    }

    #[test]
    fn cayley_small() {
        let trees: Vec<CayleyTree> = enumerate_cayley(3).unwrap().collect();
        assert_eq!(trees.len(), 3);
        let mut weights: Vec<Monomial> = trees.iter().map(CayleyTree::weight).collect();
        weights.sort();
        assert_eq!(
            weights,
            vec![Monomial::one(), Monomial::one(), Monomial::var(1)]
        );
        for n in 2..=6usize {
            assert_eq!(enumerate_cayley(n).unwrap().count(), n.pow(n as u32 - 2));
            assert_eq!(cayley_weighted_sum(n).unwrap(), maximal_chain_rhs(n));
        }
    }

    #[test]
    fn invalid_cayley() {
        assert!(CayleyTree::new(3, vec![2, 1]).is_err());
        assert!(CayleyTree::new(3, vec![1, 3]).is_err());
        assert!(CayleyTree::new(3, vec![3, 3]).is_ok());
    }

    #[test]
    fn tree_json() {
        let t = AndreTree::new(4, vec![2, 3, 4]).unwrap();
        let s = serde_json::to_string(&t).unwrap();
        assert_eq!(s, r#"{"n":4,"parent":{"1":2,"2":3,"3":4}}"#);
        assert_eq!(serde_json::from_str::<AndreTree>(&s).unwrap(), t);
        assert_eq!(t.to_string(), "1->2 2->3 3->4");
        assert!(serde_json::from_str::<AndreTree>(r#"{"n":3,"parent":{"1":3}}"#).is_err());
        let c: CayleyTree = serde_json::from_str(r#"{"n":3,"parent":{"1":3,"2":1}}"#).unwrap();
        assert_eq!(c.weight(), Monomial::var(1));
    }
}
