//! Set partitions of a totally ordered ground set, with the noncrossing,
//! interval and near-interval predicates and the embedding into the
//! symmetric group.
//!
//! Blocks are stored as `u64` bitmasks (bit `i` is label `i`), so labels
//! are limited to `1..=63`. Blocks are kept sorted by their minimum, which
//! makes equality, ordering and hashing structural.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::Permutation;

/// Largest supported label.
pub const MAX_LABEL: usize = 63;

pub(crate) type Mask = u64;

#[inline]
pub(crate) fn mask_min(m: Mask) -> usize {
    m.trailing_zeros() as usize
}

#[inline]
pub(crate) fn mask_max(m: Mask) -> usize {
    63 - m.leading_zeros() as usize
}

/// Mask of the labels `lo..=hi` (empty when `lo > hi`).
#[inline]
pub(crate) fn range_mask(lo: usize, hi: usize) -> Mask {
    if lo > hi {
        0
    } else {
        let width = hi - lo + 1;
        let ones = if width >= 64 { !0 } else { (1u64 << width) - 1 };
        ones << lo
    }
}

pub(crate) fn mask_elements(m: Mask) -> impl Iterator<Item = usize> {
    let mut rest = m;
    std::iter::from_fn(move || {
        if rest == 0 {
            None
        } else {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(i)
        }
    })
}

/// Rank-space image of `m` inside `ground`: bit `k` is set when the `k`-th
/// smallest element of `ground` lies in `m`.
pub(crate) fn compress(m: Mask, ground: Mask) -> Mask {
    let mut out = 0;
    for (k, x) in mask_elements(ground).enumerate() {
        if m >> x & 1 == 1 {
            out |= 1 << k;
        }
    }
    out
}

/// Inverse of [`compress`].
pub(crate) fn expand(local: Mask, ground: Mask) -> Mask {
    let mut out = 0;
    for (k, x) in mask_elements(ground).enumerate() {
        if local >> k & 1 == 1 {
            out |= 1 << x;
        }
    }
    out
}

/// True for a nonempty run of consecutive bits.
#[inline]
pub(crate) fn is_run(m: Mask) -> bool {
    if m == 0 {
        return false;
    }
    let shifted = m >> m.trailing_zeros();
    shifted & (shifted.wrapping_add(1)) == 0
}

/// Number of maximal runs of consecutive bits.
#[inline]
pub(crate) fn run_count(m: Mask) -> u32 {
    (m & !(m << 1)).count_ones()
}

/// A nonempty finite set of positive labels with the induced order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroundSet {
    mask: Mask,
}

impl GroundSet {
    pub fn new(elements: &[usize]) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::EmptyGroundSet);
        }
        let mut mask = 0;
        let mut prev = 0;
        for &x in elements {
            if x == 0 || x > MAX_LABEL {
                return Err(Error::LabelOutOfRange(x));
            }
            if x <= prev {
                return Err(Error::InvalidPartition(format!(
                    "ground set is not strictly increasing at {x}"
                )));
            }
            prev = x;
            mask |= 1 << x;
        }
        Ok(GroundSet { mask })
    }

    /// The standard ground set `{1..n}`.
    pub fn standard(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyGroundSet);
        }
        if n > MAX_LABEL {
            return Err(Error::LabelOutOfRange(n));
        }
        Ok(GroundSet {
            mask: range_mask(1, n),
        })
    }

    pub(crate) fn from_mask(mask: Mask) -> Self {
        debug_assert!(mask != 0 && mask & 1 == 0);
        GroundSet { mask }
    }

    pub(crate) fn mask(&self) -> Mask {
        self.mask
    }

    pub fn elements(&self) -> Vec<usize> {
        mask_elements(self.mask).collect()
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn first(&self) -> usize {
        mask_min(self.mask)
    }

    pub fn last(&self) -> usize {
        mask_max(self.mask)
    }

    pub fn contains(&self, x: usize) -> bool {
        x <= MAX_LABEL && self.mask >> x & 1 == 1
    }

    /// Whether this is `{1..n}` for some `n`.
    pub fn is_standard(&self) -> bool {
        self.mask == range_mask(1, self.len())
    }
}

impl fmt::Debug for GroundSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroundSet{:?}", self.elements())
    }
}

/// Shape of a partition relative to the induced order of its ground set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Shape {
    Interval,
    NearInterval,
    Other,
}

/// Shape of a partition of the rank space `{0..len-1}` given as block masks.
pub(crate) fn local_shape(blocks: &[Mask], len: usize) -> Shape {
    if blocks.iter().all(|&b| is_run(b)) {
        return Shape::Interval;
    }
    let last = 1u64 << (len - 1);
    let mut wrap = None;
    for &b in blocks {
        if b & 1 == 1 {
            wrap = Some(b);
        } else if !is_run(b) {
            return Shape::Other;
        }
    }
    match wrap {
        // the first and the last block of an interval partition, merged
        Some(w) if w & last != 0 && run_count(w) == 2 => Shape::NearInterval,
        _ => Shape::Other,
    }
}

/// Noncrossing test on block masks: scanning left to right, a block may
/// only continue when it is the innermost open block.
pub(crate) fn masks_noncrossing(blocks: &[Mask]) -> bool {
    let ground = blocks.iter().fold(0, |acc, b| acc | b);
    let mut owner = [u8::MAX; 64];
    for (k, &b) in blocks.iter().enumerate() {
        for x in mask_elements(b) {
            owner[x] = k as u8;
        }
    }
    let mut open: Vec<u8> = Vec::new();
    for x in mask_elements(ground) {
        let k = owner[x];
        let b = blocks[k as usize];
        let first = mask_min(b) == x;
        let last = mask_max(b) == x;
        if first {
            if !last {
                open.push(k);
            }
        } else if open.last() != Some(&k) {
            return false;
        } else if last {
            open.pop();
        }
    }
    true
}

/// Whether an arbitrary set partition (given by its blocks) is noncrossing.
/// Returns `false` when the blocks do not form a set partition.
pub fn is_noncrossing(blocks: &[Vec<usize>]) -> bool {
    match blocks_to_masks(blocks) {
        Ok((_, masks)) => masks_noncrossing(&masks),
        Err(_) => false,
    }
}

fn blocks_to_masks(blocks: &[Vec<usize>]) -> Result<(Mask, Vec<Mask>)> {
    let mut union = 0;
    let mut masks = Vec::with_capacity(blocks.len());
    for block in blocks {
        if block.is_empty() {
            return Err(Error::InvalidPartition("empty block".into()));
        }
        let mut m = 0;
        for &x in block {
            if x == 0 || x > MAX_LABEL {
                return Err(Error::LabelOutOfRange(x));
            }
            if (m | union) >> x & 1 == 1 {
                return Err(Error::InvalidPartition(format!("label {x} repeated")));
            }
            m |= 1 << x;
        }
        union |= m;
        masks.push(m);
    }
    Ok((union, masks))
}

/// A noncrossing partition of a ground set.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "PartitionRepr", into = "PartitionRepr")]
pub struct NCPartition {
    ground: GroundSet,
    blocks: Vec<Mask>,
}

#[derive(Serialize, Deserialize)]
struct PartitionRepr {
    ground: Vec<usize>,
    blocks: Vec<Vec<usize>>,
}

impl TryFrom<PartitionRepr> for NCPartition {
    type Error = Error;

    fn try_from(repr: PartitionRepr) -> Result<Self> {
        NCPartition::new(GroundSet::new(&repr.ground)?, &repr.blocks)
    }
}

impl From<NCPartition> for PartitionRepr {
    fn from(p: NCPartition) -> Self {
        PartitionRepr {
            ground: p.ground.elements(),
            blocks: p.blocks(),
        }
    }
}

/// One refinement step: `block` of the coarser partition is split into
/// `parts` in the finer one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Split {
    pub block: Mask,
    pub parts: Vec<Mask>,
}

impl Split {
    /// Shape of the parts as a partition of `block` in its induced order.
    pub fn shape(&self) -> Shape {
        let local: Vec<Mask> = self
            .parts
            .iter()
            .map(|&p| compress(p, self.block))
            .collect();
        local_shape(&local, self.block.count_ones() as usize)
    }
}

impl NCPartition {
    /// Validates that `blocks` partition `ground` without crossings.
    pub fn new(ground: GroundSet, blocks: &[Vec<usize>]) -> Result<Self> {
        let (union, masks) = blocks_to_masks(blocks)?;
        if union != ground.mask {
            return Err(Error::InvalidPartition(
                "blocks do not cover the ground set exactly".into(),
            ));
        }
        Self::from_masks(ground.mask, masks)
    }

    /// Partition of `{1..n}`.
    pub fn standard(n: usize, blocks: &[Vec<usize>]) -> Result<Self> {
        Self::new(GroundSet::standard(n)?, blocks)
    }

    /// Partition whose ground set is the union of the blocks.
    pub fn from_blocks(blocks: &[Vec<usize>]) -> Result<Self> {
        let (union, masks) = blocks_to_masks(blocks)?;
        if union == 0 {
            return Err(Error::EmptyGroundSet);
        }
        Self::from_masks(union, masks)
    }

    pub(crate) fn from_masks(ground: Mask, mut blocks: Vec<Mask>) -> Result<Self> {
        if ground == 0 {
            return Err(Error::EmptyGroundSet);
        }
        let mut union = 0;
        for &b in &blocks {
            if b == 0 || b & union != 0 {
                return Err(Error::InvalidPartition(
                    "blocks overlap or are empty".into(),
                ));
            }
            union |= b;
        }
        if union != ground {
            return Err(Error::InvalidPartition(
                "blocks do not cover the ground set".into(),
            ));
        }
        if !masks_noncrossing(&blocks) {
            return Err(Error::Crossing);
        }
        blocks.sort_unstable_by_key(|&b| b.trailing_zeros());
        Ok(NCPartition {
            ground: GroundSet::from_mask(ground),
            blocks,
        })
    }

    /// Caller guarantees a noncrossing partition of `ground`.
    pub(crate) fn from_masks_unchecked(ground: Mask, mut blocks: Vec<Mask>) -> Self {
        blocks.sort_unstable_by_key(|&b| b.trailing_zeros());
        debug_assert!(masks_noncrossing(&blocks));
        debug_assert_eq!(blocks.iter().fold(0, |a, b| a | b), ground);
        NCPartition {
            ground: GroundSet::from_mask(ground),
            blocks,
        }
    }

    /// The finest partition `0̂` (all singletons).
    pub fn bottom(ground: GroundSet) -> Self {
        let blocks = mask_elements(ground.mask).map(|x| 1u64 << x).collect();
        NCPartition { ground, blocks }
    }

    /// The one-block partition `1̂`.
    pub fn top(ground: GroundSet) -> Self {
        NCPartition {
            ground,
            blocks: vec![ground.mask],
        }
    }

    pub fn ground(&self) -> GroundSet {
        self.ground
    }

    pub fn blocks(&self) -> Vec<Vec<usize>> {
        self.blocks
            .iter()
            .map(|&b| mask_elements(b).collect())
            .collect()
    }

    pub(crate) fn masks(&self) -> &[Mask] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// `|ground| − #blocks`.
    pub fn rank(&self) -> usize {
        self.ground.len() - self.blocks.len()
    }

    pub fn is_bottom(&self) -> bool {
        self.blocks.len() == self.ground.len()
    }

    pub fn is_top(&self) -> bool {
        self.blocks.len() == 1
    }

    pub(crate) fn mask_of(&self, x: usize) -> Option<Mask> {
        self.blocks.iter().copied().find(|b| b >> x & 1 == 1)
    }

    pub fn block_containing(&self, x: usize) -> Option<Vec<usize>> {
        self.mask_of(x).map(|b| mask_elements(b).collect())
    }

    pub fn shape(&self) -> Shape {
        let local: Vec<Mask> = self
            .blocks
            .iter()
            .map(|&b| compress(b, self.ground.mask))
            .collect();
        local_shape(&local, self.ground.len())
    }

    pub fn is_interval(&self) -> bool {
        self.shape() == Shape::Interval
    }

    /// `self ≤ other` in refinement order.
    pub fn refines(&self, other: &NCPartition) -> Result<bool> {
        if self.ground != other.ground {
            return Err(Error::GroundMismatch);
        }
        Ok(self
            .blocks
            .iter()
            .all(|&b| other.blocks.iter().any(|&q| b & !q == 0)))
    }

    /// `σ_π` on the ambient set `{1..max(ground)}`; labels outside the
    /// ground set are fixed.
    pub fn to_permutation(&self) -> Permutation {
        self.to_permutation_in(self.ground.last())
            .expect("ambient size covers the ground set")
    }

    /// `σ_π` on `{1..n}`; each block `i_1 < … < i_k` becomes the cycle
    /// `i_1 → i_2 → … → i_k → i_1`.
    pub fn to_permutation_in(&self, n: usize) -> Result<Permutation> {
        if self.ground.last() > n {
            return Err(Error::SizeMismatch {
                left: n,
                right: self.ground.last(),
            });
        }
        let cycles: Vec<Vec<usize>> = self.blocks();
        Permutation::from_cycles(n, &cycles)
    }

    /// The partition into orbits of `σ`, on `{1..n}`.
    pub fn from_orbits(sigma: &Permutation) -> Result<Self> {
        let n = sigma.n();
        let ground = GroundSet::standard(n)?;
        Self::new(ground, &sigma.cycles())
    }

    /// Inverse of the embedding: returns the orbit partition when `σ` lies
    /// on a geodesic from the identity to the long cycle.
    pub fn from_geodesic_permutation(sigma: &Permutation) -> Option<Self> {
        let n = sigma.n();
        let c = Permutation::long_cycle(n).ok()?;
        let rest = c.compose(&sigma.inverse()).ok()?;
        if sigma.length() + rest.length() != n - 1 {
            return None;
        }
        let p = Self::from_orbits(sigma).ok()?;
        debug_assert_eq!(&p.to_permutation(), sigma);
        Some(p)
    }

    /// Replaces `block` by `parts`.
    pub fn split_block(&self, block: &[usize], parts: &[Vec<usize>]) -> Result<Self> {
        let (bmask_union, bm) = blocks_to_masks(std::slice::from_ref(&block.to_vec()))?;
        let target = bm[0];
        if !self.blocks.contains(&target) {
            return Err(Error::InvalidArgument(format!("{block:?} is not a block")));
        }
        let (union, part_masks) = blocks_to_masks(parts)?;
        if union != bmask_union {
            return Err(Error::InvalidPartition(
                "parts do not partition the block".into(),
            ));
        }
        let mut blocks: Vec<Mask> = self
            .blocks
            .iter()
            .copied()
            .filter(|&b| b != target)
            .collect();
        blocks.extend(part_masks);
        Self::from_masks(self.ground.mask, blocks)
    }

    /// If `self` arises from `coarser` by splitting exactly one block,
    /// returns that split.
    pub(crate) fn split_from(&self, coarser: &NCPartition) -> Option<Split> {
        if self.ground != coarser.ground {
            return None;
        }
        let mut split_block = None;
        for &b in &coarser.blocks {
            if !self.blocks.contains(&b) {
                if split_block.is_some() {
                    return None;
                }
                split_block = Some(b);
            }
        }
        let block = split_block?;
        let parts: Vec<Mask> = self
            .blocks
            .iter()
            .copied()
            .filter(|&p| p & block != 0)
            .collect();
        if parts.iter().any(|&p| p & !block != 0) {
            return None;
        }
        if self.blocks.len() != coarser.blocks.len() - 1 + parts.len() {
            return None;
        }
        Some(Split { block, parts })
    }

    /// Image of the partition under `σ` (which must act on `{1..n}` with
    /// `n ≥ max(ground)`).
    pub fn map_by(&self, sigma: &Permutation) -> Result<Self> {
        let mut ground = 0;
        let mut blocks = Vec::with_capacity(self.blocks.len());
        for &b in &self.blocks {
            let mut image = 0;
            for x in mask_elements(b) {
                if x > sigma.n() {
                    return Err(Error::SizeMismatch {
                        left: sigma.n(),
                        right: x,
                    });
                }
                image |= 1 << sigma.apply(x);
            }
            ground |= image;
            blocks.push(image);
        }
        Self::from_masks(ground, blocks)
    }

    /// Every noncrossing partition of `ground`, sorted.
    pub fn all(ground: GroundSet) -> Vec<NCPartition> {
        let elems = ground.elements();
        let mut out: Vec<NCPartition> = nc_rec(&elems)
            .into_iter()
            .map(|blocks| NCPartition::from_masks_unchecked(ground.mask, blocks))
            .collect();
        out.sort();
        out
    }
}

/// Noncrossing partitions of an ordered list: choose the block of the first
/// element; the gaps it leaves are filled independently.
fn nc_rec(elems: &[usize]) -> Vec<Vec<Mask>> {
    let Some((&first, rest)) = elems.split_first() else {
        return vec![Vec::new()];
    };
    let mut out = Vec::new();
    for choice in 0u64..(1 << rest.len()) {
        let mut block: Mask = 1 << first;
        let mut segments: Vec<Vec<usize>> = vec![Vec::new()];
        for (k, &x) in rest.iter().enumerate() {
            if choice >> k & 1 == 1 {
                block |= 1 << x;
                segments.push(Vec::new());
            } else {
                segments.last_mut().unwrap().push(x);
            }
        }
        let mut partial: Vec<Vec<Mask>> = vec![vec![block]];
        for seg in segments.iter().filter(|s| !s.is_empty()) {
            let sub = nc_rec(seg);
            let mut next = Vec::with_capacity(partial.len() * sub.len());
            for p in &partial {
                for s in &sub {
                    let mut v = p.clone();
                    v.extend_from_slice(s);
                    next.push(v);
                }
            }
            partial = next;
        }
        out.extend(partial);
    }
    out
}

/// Shape of `p` under the induced order of its ground set.
pub fn classify_shape(p: &NCPartition) -> Shape {
    p.shape()
}

impl fmt::Display for NCPartition {
    /// Paper-style block notation such as `{13|2}`; elements are separated
    /// by commas once labels reach two digits.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sep = if self.ground.last() >= 10 { "," } else { "" };
        let blocks: Vec<String> = self
            .blocks()
            .iter()
            .map(|b| {
                b.iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(sep)
            })
            .collect();
        write!(f, "{{{}}}", blocks.join("|"))
    }
}

impl fmt::Debug for NCPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn std_part(n: usize, blocks: &[&[usize]]) -> NCPartition {
        let b: Vec<Vec<usize>> = blocks.iter().map(|x| x.to_vec()).collect();
        NCPartition::standard(n, &b).unwrap()
    }

    #[test]
    fn noncrossing_predicate() {
        assert!(!is_noncrossing(&[vec![1, 3], vec![2, 4]]));
        assert!(is_noncrossing(&[vec![1, 3], vec![2]]));
        assert!(is_noncrossing(&[vec![1, 4], vec![2, 3]]));
        assert!(!is_noncrossing(&[vec![1, 2], vec![2, 3]]));
        assert_eq!(
            NCPartition::standard(4, &[vec![1, 3], vec![2, 4]]),
            Err(Error::Crossing)
        );
    }

    #[test]
    fn shapes() {
        assert_eq!(
            std_part(5, &[&[1, 2], &[3], &[4, 5]]).shape(),
            Shape::Interval
        );
        assert_eq!(std_part(3, &[&[1, 3], &[2]]).shape(), Shape::NearInterval);
        assert_eq!(
            std_part(5, &[&[1, 2, 4, 5], &[3]]).shape(),
            Shape::NearInterval
        );
        assert_eq!(std_part(5, &[&[1, 3, 5], &[2], &[4]]).shape(), Shape::Other);
        // merging the two blocks of a 2-block interval partition gives 1̂
        assert_eq!(std_part(3, &[&[1, 2, 3]]).shape(), Shape::Interval);
        // induced order on a subset
        let g = GroundSet::new(&[2, 5, 7]).unwrap();
        let p = NCPartition::new(g, &[vec![2, 7], vec![5]]).unwrap();
        assert_eq!(p.shape(), Shape::NearInterval);
    }

    #[test]
    fn refinement() {
        let g = GroundSet::standard(3).unwrap();
        let bottom = NCPartition::bottom(g);
        for q in NCPartition::all(g) {
            assert!(bottom.refines(&q).unwrap());
        }
        let a = std_part(3, &[&[1, 2], &[3]]);
        assert!(!a.refines(&bottom).unwrap());
        let other = NCPartition::bottom(GroundSet::standard(4).unwrap());
        assert_eq!(a.refines(&other), Err(Error::GroundMismatch));
    }

    #[test]
    fn embedding_examples() {
        let p = std_part(3, &[&[1, 2], &[3]]);
        assert_eq!(
            p.to_permutation(),
            Permutation::transposition(3, 1, 2).unwrap()
        );
        for n in 1..6 {
            let g = GroundSet::standard(n).unwrap();
            assert_eq!(
                NCPartition::top(g).to_permutation(),
                Permutation::long_cycle(n).unwrap()
            );
            assert!(NCPartition::bottom(g).to_permutation().is_identity());
        }
    }

    #[test]
    fn geodesic_inverse() {
        let id = Permutation::identity(3);
        assert_eq!(
            NCPartition::from_geodesic_permutation(&id).unwrap(),
            NCPartition::bottom(GroundSet::standard(3).unwrap())
        );
        let s = Permutation::transposition(3, 1, 3).unwrap();
        assert_eq!(
            NCPartition::from_geodesic_permutation(&s).unwrap(),
            std_part(3, &[&[1, 3], &[2]])
        );
        let back = Permutation::from_cycles(3, &[vec![1, 3, 2]]).unwrap();
        assert!(NCPartition::from_geodesic_permutation(&back).is_none());
    }

    #[test]
    fn split_block_examples() {
        let g = GroundSet::standard(3).unwrap();
        let top = NCPartition::top(g);
        assert_eq!(
            top.split_block(&[1, 2, 3], &[vec![1, 3], vec![2]]).unwrap(),
            std_part(3, &[&[1, 3], &[2]])
        );
        let g4 = GroundSet::standard(4).unwrap();
        let singles: Vec<Vec<usize>> = (1..=4).map(|x| vec![x]).collect();
        assert_eq!(
            NCPartition::top(g4)
                .split_block(&[1, 2, 3, 4], &singles)
                .unwrap(),
            NCPartition::bottom(g4)
        );
        assert_eq!(
            NCPartition::top(g4).split_block(&[1, 2, 3, 4], &[vec![1, 3], vec![2, 4]]),
            Err(Error::Crossing)
        );
        assert!(top.split_block(&[1, 2], &[vec![1], vec![2]]).is_err());
    }

    #[test]
    fn catalan_counts() {
        let expected = [1, 2, 5, 14, 42, 132, 429, 1430];
        for (i, &c) in expected.iter().enumerate() {
            let g = GroundSet::standard(i + 1).unwrap();
            assert_eq!(NCPartition::all(g).len(), c, "n = {}", i + 1);
        }
    }

    #[test]
    fn json_roundtrip() {
        let p = std_part(5, &[&[1, 5], &[2, 3], &[4]]);
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"ground":[1,2,3,4,5],"blocks":[[1,5],[2,3],[4]]}"#);
        assert_eq!(serde_json::from_str::<NCPartition>(&s).unwrap(), p);
        assert!(serde_json::from_str::<NCPartition>(
            r#"{"ground":[1,2,3,4],"blocks":[[1,3],[2,4]]}"#
        )
        .is_err());
    }

    #[test]
    fn display() {
        assert_eq!(std_part(3, &[&[1, 3], &[2]]).to_string(), "{13|2}");
    }

    #[test]
    fn mask_helpers() {
        assert!(is_run(0b1110));
        assert!(!is_run(0b1010));
        assert_eq!(run_count(0b1101_1001), 3);
        assert_eq!(range_mask(2, 4), 0b11100);
        assert_eq!(range_mask(3, 2), 0);
        let g = 0b1011_0100;
        assert_eq!(expand(compress(0b1000_0100, g), g), 0b1000_0100);
    }
}
