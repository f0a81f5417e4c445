//! Chains of noncrossing partitions built from interval and near-interval
//! splits, the matching minimal factorizations of the long cycle, their
//! weights, and final chains of covers.
//!
//! Enumeration works top-down: starting from the one-block partition, each
//! step picks a block (in order of its minimum) and replaces it by one of
//! the interval or near-interval partitions of that block with the required
//! number of parts. Splits of a block of size `m` into `k` parts are
//! precomputed once per `(m, k)` in rank space.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ncpart::{expand, range_mask, GroundSet, Mask, NCPartition, Shape, MAX_LABEL};
use crate::perm::Permutation;
use crate::poly::{Monomial, Polynomial};

/// A type `(a_1, …, a_r)` with every `a_i ≥ 2`; the ground size is
/// `n = 1 + Σ(a_i − 1)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct FactorizationType {
    parts: Vec<usize>,
    n: usize,
}

impl FactorizationType {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidType("a type needs at least one part".into()));
        }
        if let Some(&p) = parts.iter().find(|&&p| p < 2) {
            return Err(Error::InvalidType(format!("part {p} is smaller than 2")));
        }
        let n = 1 + parts.iter().map(|p| p - 1).sum::<usize>();
        if n > MAX_LABEL {
            return Err(Error::LabelOutOfRange(n));
        }
        Ok(FactorizationType { parts, n })
    }

    /// Like [`FactorizationType::new`] but also checks the implied size.
    pub fn with_n(parts: Vec<usize>, n: usize) -> Result<Self> {
        let a = Self::new(parts)?;
        if a.n != n {
            return Err(Error::InvalidType(format!(
                "parts {a} have Σ(a_i − 1) = {}, expected n − 1 = {}",
                a.n - 1,
                n.saturating_sub(1)
            )));
        }
        Ok(a)
    }

    /// The type `(2, …, 2)` of maximal chains.
    pub fn maximal(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidType(format!("no maximal type for n = {n}")));
        }
        Self::new(vec![2; n - 1])
    }

    /// All `2^{n-2}` types of size `n`, sorted lexicographically.
    pub fn all_for(n: usize) -> Vec<FactorizationType> {
        if n < 2 {
            return Vec::new();
        }
        let gaps = n - 2;
        let mut out: Vec<FactorizationType> = (0u64..1 << gaps)
            .map(|cuts| {
                let mut parts = Vec::new();
                let mut run = 1;
                for g in 0..gaps {
                    if cuts >> g & 1 == 1 {
                        parts.push(run + 1);
                        run = 1;
                    } else {
                        run += 1;
                    }
                }
                parts.push(run + 1);
                Self::new(parts).expect("composition parts are at least 2")
            })
            .collect();
        out.sort();
        out
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn r(&self) -> usize {
        self.parts.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `b_i = Σ_{j≤i} (a_j − 1)`, the rank of `π_i`.
    pub fn b(&self, i: usize) -> usize {
        self.parts[..i].iter().map(|p| p - 1).sum()
    }

    /// `(a_1, …, a_{r-2}, a_{r-1} + a_r − 1)`.
    pub fn truncate_last_two(&self) -> Result<Self> {
        let r = self.r();
        if r < 2 {
            return Err(Error::InvalidType(format!(
                "{self} has fewer than two parts"
            )));
        }
        let mut parts = self.parts[..r - 2].to_vec();
        parts.push(self.parts[r - 2] + self.parts[r - 1] - 1);
        Self::new(parts)
    }
}

impl TryFrom<Vec<usize>> for FactorizationType {
    type Error = Error;

    fn try_from(parts: Vec<usize>) -> Result<Self> {
        Self::new(parts)
    }
}

impl From<FactorizationType> for Vec<usize> {
    fn from(a: FactorizationType) -> Self {
        a.parts
    }
}

impl FromStr for FactorizationType {
    type Err = Error;

    /// Parses `2,3,2` (parentheses and spaces are allowed).
    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parts = inner
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidType(format!("cannot parse {t:?} as a part")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(parts)
    }
}

impl fmt::Display for FactorizationType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl fmt::Debug for FactorizationType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A chain `0̂ = π_0 < π_1 < … < π_r = 1̂` of noncrossing partitions of
/// `{1..n}` in which `π_{i-1}` splits one block of `π_i` into `a_i` parts
/// forming an interval or near-interval partition of that block.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "ChainRepr", into = "ChainRepr")]
pub struct Chain {
    a: FactorizationType,
    partitions: Vec<NCPartition>,
}

#[derive(Serialize, Deserialize)]
struct ChainRepr {
    a: Vec<usize>,
    n: usize,
    chain: Vec<NCPartition>,
}

impl TryFrom<ChainRepr> for Chain {
    type Error = Error;

    fn try_from(repr: ChainRepr) -> Result<Self> {
        let a = FactorizationType::with_n(repr.a, repr.n)?;
        Chain::new(a, repr.chain)
    }
}

impl From<Chain> for ChainRepr {
    fn from(c: Chain) -> Self {
        ChainRepr {
            n: c.a.n(),
            a: c.a.parts,
            chain: c.partitions,
        }
    }
}

fn step_split(lower: &NCPartition, upper: &NCPartition) -> Result<crate::ncpart::Split> {
    lower.split_from(upper).ok_or_else(|| {
        Error::InvalidChain(format!(
            "{lower} is not obtained from {upper} by splitting one block"
        ))
    })
}

impl Chain {
    pub fn new(a: FactorizationType, partitions: Vec<NCPartition>) -> Result<Self> {
        let n = a.n();
        let r = a.r();
        if partitions.len() != r + 1 {
            return Err(Error::InvalidChain(format!(
                "type {a} needs {} partitions, got {}",
                r + 1,
                partitions.len()
            )));
        }
        let ground = GroundSet::standard(n)?;
        if let Some(p) = partitions.iter().find(|p| p.ground() != ground) {
            return Err(Error::InvalidChain(format!(
                "{p} is not a partition of 1..{n}"
            )));
        }
        if !partitions[0].is_bottom() || !partitions[r].is_top() {
            return Err(Error::InvalidChain("chain must run from 0̂ to 1̂".into()));
        }
        for i in 1..=r {
            let split = step_split(&partitions[i - 1], &partitions[i])?;
            if split.parts.len() != a.parts()[i - 1] {
                return Err(Error::InvalidChain(format!(
                    "step {i} splits into {} parts, type requires {}",
                    split.parts.len(),
                    a.parts()[i - 1]
                )));
            }
            if split.shape() == Shape::Other {
                return Err(Error::InvalidChain(format!(
                    "step {i} is neither an interval nor a near-interval split"
                )));
            }
        }
        Ok(Chain { a, partitions })
    }

    pub(crate) fn new_unchecked(a: FactorizationType, partitions: Vec<NCPartition>) -> Self {
        debug_assert!(Chain::new(a.clone(), partitions.clone()).is_ok());
        Chain { a, partitions }
    }

    pub fn factorization_type(&self) -> &FactorizationType {
        &self.a
    }

    pub fn n(&self) -> usize {
        self.a.n()
    }

    /// `π_0, …, π_r`.
    pub fn partitions(&self) -> &[NCPartition] {
        &self.partitions
    }

    pub fn into_partitions(self) -> Vec<NCPartition> {
        self.partitions
    }

    /// Shape of the split taking `π_{i+1}` to `π_i`.
    pub fn step_shape(&self, i: usize) -> Shape {
        step_split(&self.partitions[i], &self.partitions[i + 1])
            .expect("validated chain")
            .shape()
    }

    /// Product of `X_i` over the steps `π_i → π_{i+1}` that are
    /// near-interval splits.
    pub fn weight(&self) -> Monomial {
        let mask = (0..self.a.r())
            .filter(|&i| self.step_shape(i) == Shape::NearInterval)
            .fold(0u64, |m, i| m | 1 << i);
        Monomial::from_mask(mask)
    }
}

impl fmt::Display for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.partitions.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", parts.join(" < "))
    }
}

impl fmt::Debug for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A factorization `C = z_1 ⋯ z_r` of the long cycle into cycles with
/// `Σ(|z_i| − 1) = n − 1`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Factorization {
    factors: Vec<Permutation>,
}

impl Factorization {
    pub fn new(factors: Vec<Permutation>) -> Result<Self> {
        let Some(first) = factors.first() else {
            return Err(Error::InvalidFactorization("no factors".into()));
        };
        let n = first.n();
        let mut product = Permutation::identity(n);
        let mut total = 0;
        for (i, z) in factors.iter().enumerate() {
            let support = z.cycle_of().ok_or_else(|| {
                Error::InvalidFactorization(format!("factor {} = {z} is not a cycle", i + 1))
            })?;
            total += support.len() - 1;
            product = product.compose(z)?;
        }
        if product != Permutation::long_cycle(n)? {
            return Err(Error::FactorizationMismatch(format!(
                "product is {product}, not the long cycle"
            )));
        }
        if total != n - 1 {
            return Err(Error::InvalidFactorization(format!(
                "Σ(|z_i| − 1) = {total}, minimal factorizations need {}",
                n - 1
            )));
        }
        Ok(Factorization { factors })
    }

    pub fn factors(&self) -> &[Permutation] {
        &self.factors
    }

    pub fn n(&self) -> usize {
        self.factors[0].n()
    }

    pub fn factorization_type(&self) -> FactorizationType {
        let parts = self
            .factors
            .iter()
            .map(|z| z.cycle_of().map_or(1, |c| c.len()))
            .collect();
        FactorizationType::new(parts).expect("validated factorization")
    }

    /// Weight of the associated chain.
    pub fn weight(&self) -> Result<Monomial> {
        Ok(factorization_to_chain(self)?.weight())
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for z in &self.factors {
            write!(f, "{z}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `z_i = σ_{π_{i-1}}^{-1} σ_{π_i}`.
pub fn chain_to_factorization(chain: &Chain) -> Factorization {
    let sigmas: Vec<Permutation> = chain
        .partitions
        .iter()
        .map(|p| p.to_permutation())
        .collect();
    let factors: Vec<Permutation> = sigmas
        .windows(2)
        .map(|w| w[0].inverse().compose(&w[1]).expect("same size"))
        .collect();
    debug_assert!(Factorization::new(factors.clone()).is_ok());
    Factorization { factors }
}

/// `π_i` is the orbit partition of `z_1 ⋯ z_i`.
pub fn factorization_to_chain(f: &Factorization) -> Result<Chain> {
    let n = f.n();
    let mut prefix = Permutation::identity(n);
    let mut partitions = vec![NCPartition::bottom(GroundSet::standard(n)?)];
    for z in &f.factors {
        prefix = prefix.compose(z)?;
        let p = NCPartition::from_geodesic_permutation(&prefix)
            .ok_or_else(|| Error::NotGeodesic(prefix.to_string()))?;
        partitions.push(p);
    }
    Chain::new(f.factorization_type(), partitions)
}

/// A chain `π_{n-k} ⋖ … ⋖ π_{n-1} = 1̂` of covers in `NC_n`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FinalChain {
    n: usize,
    k: usize,
    partitions: Vec<NCPartition>,
}

impl FinalChain {
    /// `partitions` lists `π_{n-k}, …, π_{n-1}` from the bottom.
    pub fn new(n: usize, partitions: Vec<NCPartition>) -> Result<Self> {
        let k = partitions.len();
        if k < 2 || k > n {
            return Err(Error::InvalidChain(format!(
                "final chain length {k} outside 2..={n}"
            )));
        }
        let ground = GroundSet::standard(n)?;
        if partitions.iter().any(|p| p.ground() != ground) {
            return Err(Error::InvalidChain(format!("partitions must be on 1..{n}")));
        }
        if !partitions[k - 1].is_top() {
            return Err(Error::InvalidChain("final chain must end at 1̂".into()));
        }
        for w in partitions.windows(2) {
            let split = step_split(&w[0], &w[1])?;
            if split.parts.len() != 2 {
                return Err(Error::InvalidChain(format!(
                    "{} is not covered by {}",
                    w[0], w[1]
                )));
            }
        }
        Ok(FinalChain { n, k, partitions })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn partitions(&self) -> &[NCPartition] {
        &self.partitions
    }

    /// Product of `X_i` for `n−k ≤ i ≤ n−2` where `π_i ⋖ π_{i+1}` is not an
    /// interval split.
    pub fn weight(&self) -> Monomial {
        let base = self.n - self.k;
        let mask = self
            .partitions
            .windows(2)
            .enumerate()
            .filter(|(_, w)| {
                step_split(&w[0], &w[1]).expect("validated").shape() != Shape::Interval
            })
            .fold(0u64, |m, (j, _)| m | 1 << (base + j));
        Monomial::from_mask(mask)
    }
}

impl fmt::Display for FinalChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.partitions.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", parts.join(" < "))
    }
}

impl fmt::Debug for FinalChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// One precomputed split of a block of size `m` (in rank space) into `k`
/// parts.
#[derive(Debug)]
struct Pattern {
    parts: Vec<Mask>,
    near: bool,
}

fn runs_from_cuts(m: usize, cuts: &[usize]) -> Vec<Mask> {
    let mut bounds = vec![0];
    bounds.extend_from_slice(cuts);
    bounds.push(m);
    bounds
        .windows(2)
        .map(|w| range_mask(w[0], w[1] - 1))
        .collect()
}

fn combinations(
    pool: &[usize],
    k: usize,
    out: &mut Vec<Vec<usize>>,
    cur: &mut Vec<usize>,
    start: usize,
) {
    if cur.len() == k {
        out.push(cur.clone());
        return;
    }
    for i in start..pool.len() {
        cur.push(pool[i]);
        combinations(pool, k, out, cur, i + 1);
        cur.pop();
    }
}

fn build_patterns(m: usize, k: usize) -> Vec<Pattern> {
    let gaps: Vec<usize> = (1..m).collect();
    let mut out = Vec::new();
    let mut cuts = Vec::new();
    combinations(&gaps, k - 1, &mut cuts, &mut Vec::new(), 0);
    for c in &cuts {
        out.push(Pattern {
            parts: runs_from_cuts(m, c),
            near: false,
        });
    }
    if k >= 2 {
        let mut cuts = Vec::new();
        combinations(&gaps, k, &mut cuts, &mut Vec::new(), 0);
        for c in &cuts {
            let mut runs = runs_from_cuts(m, c);
            let last = runs.pop().expect("at least three runs");
            runs[0] |= last;
            out.push(Pattern {
                parts: runs,
                near: true,
            });
        }
    }
    let key = |p: &Pattern| -> Vec<Vec<usize>> {
        let mut parts: Vec<Vec<usize>> = p
            .parts
            .iter()
            .map(|&b| crate::ncpart::mask_elements(b).collect())
            .collect();
        parts.sort();
        parts
    };
    out.sort_by_cached_key(key);
    out
}

/// The top-down splitting schedule shared by `N(a)` and final chains: the
/// `j`-th split uses `counts[j]` parts and produces the partition with
/// index `top − 1 − j`.
#[derive(Clone, Debug)]
struct Schedule {
    n: usize,
    counts: Vec<usize>,
    top: usize,
    /// `levels[depth][m]`: splits of a size-`m` block at that depth.
    levels: Vec<Arc<Vec<Vec<Pattern>>>>,
}

impl Schedule {
    fn new(n: usize, counts: Vec<usize>, top: usize) -> Self {
        let mut by_k: HashMap<usize, Arc<Vec<Vec<Pattern>>>> = HashMap::new();
        let levels = counts
            .iter()
            .map(|&k| {
                by_k.entry(k)
                    .or_insert_with(|| {
                        Arc::new(
                            (0..=n)
                                .map(|m| {
                                    if m >= k {
                                        build_patterns(m, k)
                                    } else {
                                        Vec::new()
                                    }
                                })
                                .collect(),
                        )
                    })
                    .clone()
            })
            .collect();
        Schedule {
            n,
            counts,
            top,
            levels,
        }
    }

    fn for_type(a: &FactorizationType) -> Self {
        Self::new(a.n(), a.parts().iter().rev().copied().collect(), a.r())
    }

    fn for_final(n: usize, k: usize) -> Self {
        Self::new(n, vec![2; k - 1], n - 1)
    }

    fn patterns(&self, depth: usize, m: usize) -> &[Pattern] {
        &self.levels[depth][m]
    }

    fn weight_bit(&self, depth: usize) -> u64 {
        1 << (self.top - 1 - depth)
    }

    fn children(&self, depth: usize, blocks: &[Mask], weight: u64) -> Vec<(Vec<Mask>, u64)> {
        let k = self.counts[depth];
        let mut out = Vec::new();
        for (bi, &b) in blocks.iter().enumerate() {
            let m = b.count_ones() as usize;
            if m < k {
                continue;
            }
            for pat in self.patterns(depth, m) {
                out.push(self.apply(blocks, bi, pat, depth, weight));
            }
        }
        out
    }

    fn apply(
        &self,
        blocks: &[Mask],
        bi: usize,
        pat: &Pattern,
        depth: usize,
        weight: u64,
    ) -> (Vec<Mask>, u64) {
        let b = blocks[bi];
        let mut next = Vec::with_capacity(blocks.len() + pat.parts.len() - 1);
        next.extend_from_slice(&blocks[..bi]);
        next.extend_from_slice(&blocks[bi + 1..]);
        next.extend(pat.parts.iter().map(|&p| expand(p, b)));
        next.sort_unstable_by_key(|&x| x.trailing_zeros());
        let w = if pat.near {
            weight | self.weight_bit(depth)
        } else {
            weight
        };
        (next, w)
    }

    fn top_blocks(&self) -> Vec<Mask> {
        vec![range_mask(1, self.n)]
    }

    fn fold_into(&self, depth: usize, blocks: &[Mask], weight: u64, acc: &mut HashMap<u64, u64>) {
        if depth == self.counts.len() {
            *acc.entry(weight).or_insert(0) += 1;
            return;
        }
        let k = self.counts[depth];
        for (bi, &b) in blocks.iter().enumerate() {
            let m = b.count_ones() as usize;
            if m < k {
                continue;
            }
            for pat in self.patterns(depth, m) {
                let (next, w) = self.apply(blocks, bi, pat, depth, weight);
                self.fold_into(depth + 1, &next, w, acc);
            }
        }
    }

    /// Number of chains for each weight mask.
    fn weight_counts(&self, parallel: bool) -> HashMap<u64, u64> {
        let root = self.top_blocks();
        if !parallel || self.counts.len() < 2 {
            let mut acc = HashMap::new();
            self.fold_into(0, &root, 0, &mut acc);
            return acc;
        }
        // fan out over the first two levels so the work units are even
        let level1 = self.children(0, &root, 0);
        let level2: Vec<(Vec<Mask>, u64)> = level1
            .iter()
            .flat_map(|(b, w)| self.children(1, b, *w))
            .collect();
        level2
            .par_iter()
            .map(|(b, w)| {
                let mut acc = HashMap::new();
                self.fold_into(2, b, *w, &mut acc);
                acc
            })
            .reduce(HashMap::new, |mut a, b| {
                for (k, v) in b {
                    *a.entry(k).or_insert(0) += v;
                }
                a
            })
    }

    fn weighted_sum(&self, parallel: bool) -> Polynomial {
        let mut p = Polynomial::zero();
        for (mask, count) in self.weight_counts(parallel) {
            p.add_term(Monomial::from_mask(mask), count.into());
        }
        p
    }

    fn count(&self) -> u64 {
        self.weight_counts(false).values().sum()
    }
}

struct Frame {
    blocks: Vec<Mask>,
    weight: u64,
    block: usize,
    pattern: usize,
}

/// Depth-first stream over a schedule. Yields the partitions from the top
/// down together with the weight mask.
struct ScheduleIter {
    schedule: Schedule,
    stack: Vec<Frame>,
}

impl ScheduleIter {
    fn new(schedule: Schedule) -> Self {
        let root = Frame {
            blocks: schedule.top_blocks(),
            weight: 0,
            block: 0,
            pattern: 0,
        };
        ScheduleIter {
            schedule,
            stack: vec![root],
        }
    }
}

impl Iterator for ScheduleIter {
    type Item = (Vec<Vec<Mask>>, u64);

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            let depth = self.stack.len().checked_sub(1)?;
            if depth == self.schedule.counts.len() {
                let path = self.stack.iter().map(|f| f.blocks.clone()).collect();
                let weight = self.stack[depth].weight;
                self.stack.pop();
                return Some((path, weight));
            }
            let k = self.schedule.counts[depth];
            let frame = self.stack.last_mut().expect("nonempty stack");
            let mut child = None;
            while frame.block < frame.blocks.len() {
                let b = frame.blocks[frame.block];
                let m = b.count_ones() as usize;
                if m >= k {
                    let pats = self.schedule.patterns(depth, m);
                    if frame.pattern < pats.len() {
                        let pat = &pats[frame.pattern];
                        frame.pattern += 1;
                        child = Some(self.schedule.apply(
                            &frame.blocks,
                            frame.block,
                            pat,
                            depth,
                            frame.weight,
                        ));
                        break;
                    }
                }
                frame.block += 1;
                frame.pattern = 0;
            }
            match child {
                Some((blocks, weight)) => self.stack.push(Frame {
                    blocks,
                    weight,
                    block: 0,
                    pattern: 0,
                }),
                None => {
                    self.stack.pop();
                }
            }
        }
    }
}

/// Stream over `N(a)` in a fixed order.
pub struct ChainIter {
    a: FactorizationType,
    inner: ScheduleIter,
}

impl Iterator for ChainIter {
    type Item = Chain;

    fn next(&mut self) -> Option<Chain> {
        let (path, _) = self.inner.next()?;
        let ground = range_mask(1, self.a.n());
        let partitions = path
            .into_iter()
            .rev()
            .map(|blocks| NCPartition::from_masks_unchecked(ground, blocks))
            .collect();
        Some(Chain::new_unchecked(self.a.clone(), partitions))
    }
}

/// Every chain of `N(a)`, each exactly once.
pub fn enumerate_chains(a: &FactorizationType) -> ChainIter {
    ChainIter {
        a: a.clone(),
        inner: ScheduleIter::new(Schedule::for_type(a)),
    }
}

/// Every minimal factorization of type `a`, through the chain bijection.
pub fn enumerate_factorizations(a: &FactorizationType) -> impl Iterator<Item = Factorization> {
    enumerate_chains(a).map(|c| chain_to_factorization(&c))
}

/// `|N(a)|`, counted without materializing chains.
pub fn count_chains(a: &FactorizationType) -> u64 {
    Schedule::for_type(a).count()
}

/// `Σ_{Π ∈ N(a)} wt(Π)`.
pub fn weighted_sum(a: &FactorizationType) -> Polynomial {
    Schedule::for_type(a).weighted_sum(false)
}

/// Same as [`weighted_sum`], split across the rayon pool.
pub fn weighted_sum_parallel(a: &FactorizationType) -> Polynomial {
    Schedule::for_type(a).weighted_sum(true)
}

fn check_final(n: usize, k: usize) -> Result<()> {
    if k < 2 || k > n {
        return Err(Error::InvalidArgument(format!(
            "final chains need 2 <= k <= n, got n = {n}, k = {k}"
        )));
    }
    GroundSet::standard(n).map(|_| ())
}

/// Stream over final chains of length `k` in `NC_n`.
pub struct FinalChainIter {
    n: usize,
    inner: ScheduleIter,
}

impl Iterator for FinalChainIter {
    type Item = FinalChain;

    fn next(&mut self) -> Option<FinalChain> {
        let (path, _) = self.inner.next()?;
        let ground = range_mask(1, self.n);
        let partitions: Vec<NCPartition> = path
            .into_iter()
            .rev()
            .map(|blocks| NCPartition::from_masks_unchecked(ground, blocks))
            .collect();
        Some(FinalChain {
            n: self.n,
            k: partitions.len(),
            partitions,
        })
    }
}

pub fn enumerate_final_chains(n: usize, k: usize) -> Result<FinalChainIter> {
    check_final(n, k)?;
    Ok(FinalChainIter {
        n,
        inner: ScheduleIter::new(Schedule::for_final(n, k)),
    })
}

pub fn count_final_chains(n: usize, k: usize) -> Result<u64> {
    check_final(n, k)?;
    Ok(Schedule::for_final(n, k).count())
}

pub fn final_weighted_sum(n: usize, k: usize) -> Result<Polynomial> {
    check_final(n, k)?;
    Ok(Schedule::for_final(n, k).weighted_sum(false))
}

pub fn final_weighted_sum_parallel(n: usize, k: usize) -> Result<Polynomial> {
    check_final(n, k)?;
    Ok(Schedule::for_final(n, k).weighted_sum(true))
}

#[cfg(test)]
mod tests {
    use std::collections::HashSet;

    use super::*;
    use crate::poly::{final_chain_rhs, maximal_chain_rhs, theorem1_rhs};

    fn ty(parts: &[usize]) -> FactorizationType {
        FactorizationType::new(parts.to_vec()).unwrap()
    }

    fn part(n: usize, blocks: &[&[usize]]) -> NCPartition {
        let b: Vec<Vec<usize>> = blocks.iter().map(|x| x.to_vec()).collect();
        NCPartition::standard(n, &b).unwrap()
    }

    /// All cycles of length `len` in `S_n`.
    fn cycles_of_length(n: usize, len: usize) -> Vec<Permutation> {
        Permutation::all(n)
            .filter(|p| p.cycle_of().is_some_and(|c| c.len() == len))
            .collect()
    }

    /// Minimal factorizations of type `a` by search over cycle tuples; the
    /// last factor is forced.
    fn brute_force_factorizations(a: &FactorizationType) -> HashSet<Vec<Permutation>> {
        let n = a.n();
        let c = Permutation::long_cycle(n).unwrap();
        let pools: Vec<Vec<Permutation>> =
            a.parts().iter().map(|&k| cycles_of_length(n, k)).collect();
        let mut out = HashSet::new();
        let r = a.r();
        let mut prefix = vec![Permutation::identity(n)];
        let mut picks: Vec<Permutation> = Vec::new();
        fn rec(
            i: usize,
            r: usize,
            pools: &[Vec<Permutation>],
            prefix: &mut Vec<Permutation>,
            picks: &mut Vec<Permutation>,
            c: &Permutation,
            out: &mut HashSet<Vec<Permutation>>,
        ) {
            if i == r - 1 {
                let last = prefix[i].inverse().compose(c).unwrap();
                if pools[i].contains(&last) {
                    let mut f = picks.clone();
                    f.push(last);
                    out.insert(f);
                }
                return;
            }
            for z in &pools[i] {
                let p = prefix[i].compose(z).unwrap();
                prefix.push(p);
                picks.push(z.clone());
                rec(i + 1, r, pools, prefix, picks, c, out);
                picks.pop();
                prefix.pop();
            }
        }
        rec(0, r, &pools, &mut prefix, &mut picks, &c, &mut out);
        out
    }

    #[test]
    fn type_basics() {
        let a = ty(&[2, 3, 2]);
        assert_eq!(a.n(), 5);
        assert_eq!(a.r(), 3);
        assert_eq!((a.b(1), a.b(2), a.b(3)), (1, 3, 4));
        assert_eq!(a.truncate_last_two().unwrap(), ty(&[2, 4]));
        assert!(ty(&[4]).truncate_last_two().is_err());
        assert!(FactorizationType::new(vec![2, 1]).is_err());
        assert!(FactorizationType::new(vec![]).is_err());
        assert!(FactorizationType::with_n(vec![2, 2], 4).is_err());
        assert_eq!("2,3,2".parse::<FactorizationType>().unwrap(), a);
        assert_eq!(a.to_string(), "(2,3,2)");
        for n in 2..9 {
            assert_eq!(FactorizationType::all_for(n).len(), 1 << (n - 2));
        }
    }

    #[test]
    fn pattern_counts_are_binomial() {
        for m in 2..9usize {
            for k in 2..=m {
                let expected = num_integer::binomial(m, k);
                let pats = build_patterns(m, k);
                assert_eq!(pats.len(), expected, "m = {m}, k = {k}");
                assert_eq!(
                    pats.iter().filter(|p| !p.near).count(),
                    num_integer::binomial(m - 1, k - 1)
                );
            }
        }
    }

    #[test]
    fn small_enumerations() {
        assert_eq!(enumerate_chains(&ty(&[3])).count(), 1);
        let middles: Vec<NCPartition> = enumerate_chains(&ty(&[2, 2]))
            .map(|c| c.partitions()[1].clone())
            .collect();
        assert_eq!(
            middles,
            vec![
                part(3, &[&[1], &[2, 3]]),
                part(3, &[&[1, 2], &[3]]),
                part(3, &[&[1, 3], &[2]])
            ]
        );
        assert_eq!(enumerate_chains(&ty(&[2, 2, 2])).count(), 16);
    }

    #[test]
    fn weights_small() {
        let a = ty(&[2, 2]);
        let near = Chain::new(
            a.clone(),
            vec![
                part(3, &[&[1], &[2], &[3]]),
                part(3, &[&[1, 3], &[2]]),
                part(3, &[&[1, 2, 3]]),
            ],
        )
        .unwrap();
        assert_eq!(near.weight(), Monomial::var(1));
        assert_eq!(weighted_sum(&a), theorem1_rhs(&a));
        assert_eq!(weighted_sum(&ty(&[3, 2])), Polynomial::linear(1, 2, 2));
        assert_eq!(
            weighted_sum(&ty(&[2, 2, 2])),
            &Polynomial::linear(1, 1, 3) * &Polynomial::linear(2, 2, 2)
        );
        assert_eq!(weighted_sum(&ty(&[6])), Polynomial::one());
    }

    #[test]
    fn streamed_weights_match_fold() {
        for n in 2..=6 {
            for a in FactorizationType::all_for(n) {
                let streamed: Polynomial = enumerate_chains(&a)
                    .map(|c| Polynomial::monomial(c.weight(), 1))
                    .sum();
                assert_eq!(streamed, weighted_sum(&a), "{a}");
                assert_eq!(weighted_sum_parallel(&a), weighted_sum(&a), "{a}");
            }
        }
    }

    #[test]
    fn enumeration_is_duplicate_free_and_valid() {
        for a in FactorizationType::all_for(5) {
            let chains: Vec<Chain> = enumerate_chains(&a).collect();
            let distinct: HashSet<&Chain> = chains.iter().collect();
            assert_eq!(distinct.len(), chains.len());
            for c in &chains {
                Chain::new(a.clone(), c.partitions().to_vec()).unwrap();
            }
        }
    }

    #[test]
    fn factorization_bijection_against_search() {
        for n in 2..=5 {
            for a in FactorizationType::all_for(n) {
                let expected = brute_force_factorizations(&a);
                let mut seen = HashSet::new();
                for chain in enumerate_chains(&a) {
                    let f = chain_to_factorization(&chain);
                    assert_eq!(factorization_to_chain(&f).unwrap(), chain);
                    assert!(expected.contains(f.factors()), "{a}: {f}");
                    seen.insert(f.factors().to_vec());
                }
                assert_eq!(seen.len(), expected.len(), "{a}");
            }
        }
    }

    #[test]
    fn transposition_factorization_gives_interval_chain() {
        for n in 2..8 {
            let ts: Vec<Permutation> = (1..n)
                .map(|i| Permutation::transposition(n, i, i + 1).unwrap())
                .collect();
            let chain = factorization_to_chain(&Factorization::new(ts).unwrap()).unwrap();
            for (i, p) in chain.partitions().iter().enumerate() {
                let mut blocks: Vec<Vec<usize>> = vec![(1..=i + 1).collect()];
                blocks.extend((i + 2..=n).map(|x| vec![x]));
                assert_eq!(p, &NCPartition::standard(n, &blocks).unwrap());
            }
            assert!(chain.weight().is_one());
        }
    }

    #[test]
    fn single_factor() {
        let c = Permutation::long_cycle(4).unwrap();
        let chain = factorization_to_chain(&Factorization::new(vec![c.clone()]).unwrap()).unwrap();
        assert_eq!(chain.partitions().len(), 2);
        assert_eq!(chain_to_factorization(&chain).factors(), &[c]);
    }

    #[test]
    fn non_minimal_product_is_rejected() {
        let t = |i, j| Permutation::transposition(3, i, j).unwrap();
        assert!(Factorization::new(vec![t(1, 2), t(1, 3)]).is_err());
        assert!(Factorization::new(vec![t(1, 3), t(1, 2)]).is_ok());
        let long = vec![t(1, 2), t(2, 3), t(1, 2), t(1, 2)];
        assert!(matches!(
            Factorization::new(long),
            Err(Error::InvalidFactorization(_))
        ));
    }

    #[test]
    fn final_chains_small() {
        assert_eq!(count_final_chains(3, 2).unwrap(), 3);
        assert_eq!(
            final_weighted_sum(3, 2).unwrap(),
            final_chain_rhs(3, 2).unwrap()
        );
        for n in 2..=6usize {
            assert_eq!(final_weighted_sum(n, n).unwrap(), maximal_chain_rhs(n));
            for k in 2..=n {
                let streamed: Polynomial = enumerate_final_chains(n, k)
                    .unwrap()
                    .map(|c| Polynomial::monomial(c.weight(), 1))
                    .sum();
                assert_eq!(streamed, final_weighted_sum(n, k).unwrap());
            }
        }
        assert!(enumerate_final_chains(4, 1).is_err());
    }

    #[test]
    fn chain_json() {
        let chain = enumerate_chains(&ty(&[2, 2])).nth(2).unwrap();
        let s = serde_json::to_string(&chain).unwrap();
        assert_eq!(
            s,
            r#"{"a":[2,2],"n":3,"chain":[{"ground":[1,2,3],"blocks":[[1],[2],[3]]},{"ground":[1,2,3],"blocks":[[1,3],[2]]},{"ground":[1,2,3],"blocks":[[1,2,3]]}]}"#
        );
        assert_eq!(serde_json::from_str::<Chain>(&s).unwrap(), chain);
    }
}
