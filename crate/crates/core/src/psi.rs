//! The map merging the last two steps of a chain.
//!
//! For `Π = (π_0, …, π_r) ∈ N(a)` with `r ≥ 2`, [`psi`] returns a chain
//! `Γ ∈ N(a')`, where `a' = (a_1, …, a_{r-2}, a_{r-1} + a_r − 1)`, together
//! with a bar position in `1..=n`. `Γ` is `(σ(π_0), …, σ(π_{r-2}), 1̂)` for
//! a permutation `σ` that is increasing on every block of `π_{r-2}`; which
//! `σ` is used depends on how `π_{r-2}` sits inside `π_{r-1}`, and there are
//! ten such configurations ([`CaseTag`]).
//!
//! Every configuration is described by three layouts, for `π_{r-1}`,
//! `π_{r-2}` and `σ(π_{r-2})`: sequences of runs tagged by the block they
//! belong to. A block of `π_{r-2}` and its image carry the same tag, which
//! fixes `σ`. Bars are given in the coordinates of `σ(π_{r-2})`: position
//! `i` is the gap just left of `i`.
//!
//! Notation for partitions follows the usual constructors: [`shift`],
//! [`oplus`] (`π ⊕ ρ`) and [`wrap`] (`(i, j) ↷ π`). Lists `i`, `j`, `k` in a
//! [`CaseTag`] are interval partitions given by their block sizes.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::chains::{Chain, FactorizationType};
use crate::error::{Error, Result};
use crate::ncpart::{
    compress, mask_max, mask_min, range_mask, run_count, GroundSet, Mask, NCPartition, Shape,
    MAX_LABEL,
};
use crate::perm::Permutation;

/// `π` with every label moved up by `i`.
pub fn shift(p: &NCPartition, i: usize) -> Result<NCPartition> {
    if p.ground().last() + i > MAX_LABEL {
        return Err(Error::LabelOutOfRange(p.ground().last() + i));
    }
    let blocks: Vec<Mask> = p.masks().iter().map(|&b| b << i).collect();
    Ok(NCPartition::from_masks_unchecked(
        p.ground().mask() << i,
        blocks,
    ))
}

/// The one-block partition of `{1..i}`.
pub fn block(i: usize) -> Result<NCPartition> {
    Ok(NCPartition::top(GroundSet::standard(i)?))
}

/// `π ⊕ ρ = π ∪ ρ^{[j]}` for `π` a partition of `{1..j}`.
pub fn oplus(p: &NCPartition, q: &NCPartition) -> Result<NCPartition> {
    if !p.ground().is_standard() {
        return Err(Error::InvalidArgument(format!(
            "{p} is not a partition of 1..j"
        )));
    }
    let q = shift(q, p.ground().len())?;
    let mut blocks = p.masks().to_vec();
    blocks.extend_from_slice(q.masks());
    Ok(NCPartition::from_masks_unchecked(
        p.ground().mask() | q.ground().mask(),
        blocks,
    ))
}

/// `(i, j) ↷ π = {{1..i} ∪ {n−j+1..n}} ∪ π^{[i]}` with `n = i + j + m` for
/// `π` a partition of `{1..m}`.
pub fn wrap(i: usize, j: usize, p: &NCPartition) -> Result<NCPartition> {
    if i == 0 || j == 0 {
        return Err(Error::InvalidArgument("wrap needs positive sizes".into()));
    }
    if !p.ground().is_standard() {
        return Err(Error::InvalidArgument(format!(
            "{p} is not a partition of 1..m"
        )));
    }
    let n = i + j + p.ground().len();
    if n > MAX_LABEL {
        return Err(Error::LabelOutOfRange(n));
    }
    let inner = shift(p, i)?;
    let mut blocks = inner.masks().to_vec();
    blocks.push(range_mask(1, i) | range_mask(n - j + 1, n));
    Ok(NCPartition::from_masks_unchecked(range_mask(1, n), blocks))
}

/// Which of the ten configurations of `(π_{r-1}, π_{r-2})` applies, with
/// its parameters. `B` is the block of `π_{r-1}` that splits.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseTag {
    /// `π_{r-1} = I ⊕ c ⊕ J`, `π_{r-2} = I ⊕ K ⊕ J`.
    One {
        i: Vec<usize>,
        k: Vec<usize>,
        j: Vec<usize>,
    },
    /// `π_{r-1} = (a,b) ↷ I`, `π_{r-2} = J ⊕ I ⊕ K` with `|J| = a`, `|K| = b`.
    Two {
        j: Vec<usize>,
        i: Vec<usize>,
        k: Vec<usize>,
    },
    /// `π_{r-1} = (a,b) ↷ (I ⊕ c ⊕ J)`, `π_{r-2} = (a,b) ↷ (I ⊕ K ⊕ J)`.
    Three {
        a: usize,
        b: usize,
        i: Vec<usize>,
        k: Vec<usize>,
        j: Vec<usize>,
    },
    /// `π_{r-1} = (a,b) ↷ I`, `π_{r-2} = J ⊕ (a',b') ↷ I ⊕ K`.
    Four {
        a_prime: usize,
        b_prime: usize,
        j: Vec<usize>,
        i: Vec<usize>,
        k: Vec<usize>,
    },
    /// `π_{r-1} = I ⊕ a ⊕ J`, `π_{r-2} = I ⊕ (b,c) ↷ K ⊕ J`.
    Five {
        b: usize,
        c: usize,
        i: Vec<usize>,
        k: Vec<usize>,
        j: Vec<usize>,
    },
    /// `π_{r-1} = (a,b) ↷ I`, `π_{r-2} = (a',b') ↷ (J ⊕ I ⊕ K)`.
    Six {
        a_prime: usize,
        b_prime: usize,
        j: Vec<usize>,
        i: Vec<usize>,
        k: Vec<usize>,
    },
    /// `π_{r-1} = (a,b) ↷ (I ⊕ c ⊕ J)`, `π_{r-2} = (a,b) ↷ (I ⊕ (d,e) ↷ K ⊕ J)`.
    Seven {
        a: usize,
        b: usize,
        d: usize,
        e: usize,
        i: Vec<usize>,
        k: Vec<usize>,
        j: Vec<usize>,
    },
    /// `π_{r-1} = (a,b) ↷ I`, `π_{r-2} = (a',b') ↷ (J ⊕ (d,e) ↷ I ⊕ K)`.
    Eight {
        a_prime: usize,
        b_prime: usize,
        d: usize,
        e: usize,
        j: Vec<usize>,
        i: Vec<usize>,
        k: Vec<usize>,
    },
    /// `π_{r-2}` has a three-run block `C` (runs `a`, `b`, `c`) around `I`
    /// and `J`; `π_{r-1}` joins `C` with the blocks of `I`.
    Nine {
        a: usize,
        b: usize,
        c: usize,
        i: Vec<usize>,
        j: Vec<usize>,
    },
    /// Same shape of `π_{r-2}`; `π_{r-1}` joins `C` with the blocks of `J`.
    Ten {
        a: usize,
        b: usize,
        c: usize,
        i: Vec<usize>,
        j: Vec<usize>,
    },
}

impl CaseTag {
    pub fn id(&self) -> u8 {
        match self {
            CaseTag::One { .. } => 1,
            CaseTag::Two { .. } => 2,
            CaseTag::Three { .. } => 3,
            CaseTag::Four { .. } => 4,
            CaseTag::Five { .. } => 5,
            CaseTag::Six { .. } => 6,
            CaseTag::Seven { .. } => 7,
            CaseTag::Eight { .. } => 8,
            CaseTag::Nine { .. } => 9,
            CaseTag::Ten { .. } => 10,
        }
    }

    /// Side conditions: named sizes are positive, listed block sizes are
    /// positive, and the pieces a case needs are present.
    fn is_well_formed(&self) -> bool {
        let pos = |xs: &[usize]| xs.iter().all(|&x| x > 0);
        match self {
            CaseTag::One { i, k, j } => !k.is_empty() && pos(i) && pos(k) && pos(j),
            CaseTag::Two { j, i, k } => {
                !j.is_empty() && !k.is_empty() && !i.is_empty() && pos(i) && pos(j) && pos(k)
            }
            CaseTag::Three { a, b, i, k, j } => {
                *a > 0 && *b > 0 && !k.is_empty() && pos(i) && pos(k) && pos(j)
            }
            CaseTag::Four {
                a_prime,
                b_prime,
                j,
                i,
                k,
            } => *a_prime > 0 && *b_prime > 0 && !i.is_empty() && pos(i) && pos(j) && pos(k),
            CaseTag::Five { b, c, i, k, j } => *b > 0 && *c > 0 && pos(i) && pos(k) && pos(j),
            CaseTag::Six {
                a_prime,
                b_prime,
                j,
                i,
                k,
            } => *a_prime > 0 && *b_prime > 0 && !i.is_empty() && pos(i) && pos(j) && pos(k),
            CaseTag::Seven {
                a,
                b,
                d,
                e,
                i,
                k,
                j,
            } => *a > 0 && *b > 0 && *d > 0 && *e > 0 && pos(i) && pos(k) && pos(j),
            CaseTag::Eight {
                a_prime,
                b_prime,
                d,
                e,
                j,
                i,
                k,
            } => {
                *a_prime > 0
                    && *b_prime > 0
                    && *d > 0
                    && *e > 0
                    && !i.is_empty()
                    && pos(i)
                    && pos(j)
                    && pos(k)
            }
            CaseTag::Nine { a, b, c, i, j } | CaseTag::Ten { a, b, c, i, j } => {
                *a > 0 && *b > 0 && *c > 0 && pos(i) && pos(j)
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Tag {
    W,
    C,
    I(usize),
    J(usize),
    K(usize),
}

/// A partition of `{1..n}` as a left-to-right sequence of tagged runs.
#[derive(Clone, Debug, Default)]
struct Layout(Vec<(Tag, usize)>);

impl Layout {
    fn run(mut self, tag: Tag, len: usize) -> Self {
        self.0.push((tag, len));
        self
    }

    fn group(mut self, tag: fn(usize) -> Tag, sizes: &[usize]) -> Self {
        self.0
            .extend(sizes.iter().enumerate().map(|(x, &len)| (tag(x), len)));
        self
    }

    fn len(&self) -> usize {
        self.0.iter().map(|&(_, l)| l).sum()
    }

    fn positions(&self) -> BTreeMap<Tag, Vec<usize>> {
        let mut out: BTreeMap<Tag, Vec<usize>> = BTreeMap::new();
        let mut at = 1;
        for &(tag, len) in &self.0 {
            out.entry(tag).or_default().extend(at..at + len);
            at += len;
        }
        out
    }

    fn partition(&self) -> Result<NCPartition> {
        let n = self.len();
        if n == 0 || n > MAX_LABEL {
            return Err(Error::InvalidArgument(format!("layout of size {n}")));
        }
        let blocks: Vec<Mask> = self
            .positions()
            .into_values()
            .filter(|ps| !ps.is_empty())
            .map(|ps| ps.iter().fold(0, |m, &x| m | 1 << x))
            .collect();
        NCPartition::from_masks(range_mask(1, n), blocks)
    }
}

struct Layouts {
    upper: Layout,
    lower: Layout,
    image: Layout,
    bar: usize,
}

fn sum(xs: &[usize]) -> usize {
    xs.iter().sum()
}

fn layouts(case: &CaseTag) -> Layouts {
    use Tag::{C, I, J, K, W};
    let new = Layout::default;
    match case {
        CaseTag::One { i, k, j } => {
            let lower = new().group(I, i).group(K, k).group(J, j);
            Layouts {
                upper: new().group(I, i).run(C, sum(k)).group(J, j),
                image: lower.clone(),
                lower,
                bar: sum(i) + 1,
            }
        }
        CaseTag::Two { j, i, k } => {
            let lower = new().group(J, j).group(I, i).group(K, k);
            let n = lower.len();
            Layouts {
                upper: new().run(W, sum(j)).group(I, i).run(W, sum(k)),
                image: lower.clone(),
                lower,
                bar: n - sum(k) + 1,
            }
        }
        CaseTag::Three { a, b, i, k, j } => Layouts {
            upper: new()
                .run(W, *a)
                .group(I, i)
                .run(C, sum(k))
                .group(J, j)
                .run(W, *b),
            lower: new()
                .run(W, *a)
                .group(I, i)
                .group(K, k)
                .group(J, j)
                .run(W, *b),
            image: new().group(I, i).run(W, a + b).group(K, k).group(J, j),
            bar: a + sum(i) + 1,
        },
        CaseTag::Four {
            a_prime,
            b_prime,
            j,
            i,
            k,
        } => Layouts {
            upper: new()
                .run(W, sum(j) + a_prime)
                .group(I, i)
                .run(W, b_prime + sum(k)),
            lower: new()
                .group(J, j)
                .run(C, *a_prime)
                .group(I, i)
                .run(C, *b_prime)
                .group(K, k),
            image: new()
                .group(J, j)
                .group(I, i)
                .run(C, a_prime + b_prime)
                .group(K, k),
            bar: sum(j) + sum(i) + a_prime + 1,
        },
        CaseTag::Five { b, c, i, k, j } => Layouts {
            upper: new().group(I, i).run(C, b + sum(k) + c).group(J, j),
            lower: new()
                .group(I, i)
                .run(W, *b)
                .group(K, k)
                .run(W, *c)
                .group(J, j),
            image: new()
                .run(W, *b)
                .group(I, i)
                .group(K, k)
                .group(J, j)
                .run(W, *c),
            bar: match i.last() {
                None => 1,
                Some(last) => b + sum(i) - last + 1,
            },
        },
        CaseTag::Six {
            a_prime,
            b_prime,
            j,
            i,
            k,
        } => {
            let lower = new()
                .run(W, *a_prime)
                .group(J, j)
                .group(I, i)
                .group(K, k)
                .run(W, *b_prime);
            let n = lower.len();
            Layouts {
                upper: new()
                    .run(C, a_prime + sum(j))
                    .group(I, i)
                    .run(C, sum(k) + b_prime),
                image: lower.clone(),
                lower,
                bar: n - sum(k) - b_prime + 1,
            }
        }
        CaseTag::Seven {
            a,
            b,
            d,
            e,
            i,
            k,
            j,
        } => Layouts {
            upper: new()
                .run(W, *a)
                .group(I, i)
                .run(C, d + sum(k) + e)
                .group(J, j)
                .run(W, *b),
            lower: new()
                .run(W, *a)
                .group(I, i)
                .run(C, *d)
                .group(K, k)
                .run(C, *e)
                .group(J, j)
                .run(W, *b),
            image: new()
                .run(W, *a)
                .group(I, i)
                .run(C, d + e)
                .group(J, j)
                .group(K, k)
                .run(W, *b),
            bar: a + sum(i) + d + 1,
        },
        CaseTag::Eight {
            a_prime,
            b_prime,
            d,
            e,
            j,
            i,
            k,
        } => Layouts {
            upper: new()
                .run(W, a_prime + sum(j) + d)
                .group(I, i)
                .run(W, e + sum(k) + b_prime),
            lower: new()
                .run(W, *a_prime)
                .group(J, j)
                .run(C, *d)
                .group(I, i)
                .run(C, *e)
                .group(K, k)
                .run(W, *b_prime),
            image: new()
                .run(W, *a_prime)
                .group(J, j)
                .group(I, i)
                .run(C, d + e)
                .group(K, k)
                .run(W, *b_prime),
            bar: a_prime + sum(j) + sum(i) + d + 1,
        },
        CaseTag::Nine { a, b, c, i, j } => Layouts {
            upper: new().run(W, a + sum(i) + b).group(J, j).run(W, *c),
            lower: new()
                .run(W, *a)
                .group(I, i)
                .run(W, *b)
                .group(J, j)
                .run(W, *c),
            image: new().run(W, a + b).group(I, i).group(J, j).run(W, *c),
            bar: a + 1,
        },
        CaseTag::Ten { a, b, c, i, j } => {
            let lower = new()
                .run(W, *a)
                .group(I, i)
                .run(W, *b)
                .group(J, j)
                .run(W, *c);
            let n = lower.len();
            Layouts {
                upper: new().run(W, *a).group(I, i).run(W, b + sum(j) + c),
                image: new().run(W, *a).group(I, i).group(J, j).run(W, b + c),
                lower,
                bar: n - c + 1,
            }
        }
    }
}

/// The permutation sending each block of `lower` increasingly onto the
/// block of `image` with the same tag.
fn sigma_of(l: &Layouts) -> Result<Permutation> {
    let n = l.lower.len();
    let from = l.lower.positions();
    let to = l.image.positions();
    let mut images = vec![0; n];
    for (tag, src) in &from {
        let dst = to
            .get(tag)
            .filter(|d| d.len() == src.len())
            .ok_or_else(|| {
                Error::Internal(format!(
                    "layout tag {tag:?} has no image of size {}",
                    src.len()
                ))
            })?;
        for (&x, &y) in src.iter().zip(dst) {
            images[x - 1] = y;
        }
    }
    Permutation::from_images(images)
}

/// Sizes of masks, in order.
fn sizes(blocks: &[Mask]) -> Vec<usize> {
    blocks.iter().map(|b| b.count_ones() as usize).collect()
}

/// `π_{r-1}` viewed as an interval partition, or as `(a,b) ↷ middle`.
enum Upper {
    Interval(Vec<Mask>),
    Near {
        w: Mask,
        a: usize,
        b: usize,
        middle: Vec<Mask>,
    },
}

/// Front and back run lengths of a block containing both ends of `span`.
fn wrap_runs(w: Mask, span: Mask) -> (usize, usize) {
    let lo = mask_min(span);
    let hi = mask_max(span);
    let front = (!(w >> lo)).trailing_zeros() as usize;
    let back = (!(w << (63 - hi))).leading_zeros() as usize;
    (front, back)
}

fn analyse_upper(u: &NCPartition, n: usize) -> Option<Upper> {
    match u.shape() {
        Shape::Interval => Some(Upper::Interval(u.masks().to_vec())),
        Shape::NearInterval => {
            let w = u.mask_of(1)?;
            let (a, b) = wrap_runs(w, range_mask(1, n));
            let middle = u.masks().iter().copied().filter(|&m| m != w).collect();
            Some(Upper::Near { w, a, b, middle })
        }
        Shape::Other => None,
    }
}

/// Everything the template matchers read off `(π_{r-1}, π_{r-2})`.
struct Context {
    n: usize,
    upper: Upper,
    block: Mask,
    parts: Vec<Mask>,
}

impl Context {
    fn new(u: &NCPartition, l: &NCPartition) -> Result<Self> {
        let n = u.ground().len();
        let split = l
            .split_from(u)
            .ok_or_else(|| Error::InvalidChain(format!("{l} does not split one block of {u}")))?;
        let upper = analyse_upper(u, n).ok_or_else(|| {
            Error::InvalidChain(format!("{u} is neither interval nor near-interval"))
        })?;
        let mut parts = split.parts;
        parts.sort_unstable_by_key(|&p| p.trailing_zeros());
        Ok(Context {
            n,
            upper,
            block: split.block,
            parts,
        })
    }

    /// For a split of the wrapping block: parts inside the front run, parts
    /// inside the back run, and parts meeting both (excluding `skip`).
    fn sides(&self, a: usize, b: usize, skip: Option<Mask>) -> (Vec<Mask>, Vec<Mask>, Vec<Mask>) {
        let front = range_mask(1, a);
        let back = range_mask(self.n - b + 1, self.n);
        let (mut left, mut right, mut both) = (Vec::new(), Vec::new(), Vec::new());
        for &p in self.parts.iter().filter(|&&p| Some(p) != skip) {
            match (p & front != 0, p & back != 0) {
                (true, true) => both.push(p),
                (true, false) => left.push(p),
                _ => right.push(p),
            }
        }
        (left, right, both)
    }
}

/// The part of a split containing `min B`, with its front run length and
/// the rest, for near-interval splits read in the order of `B`.
fn local_wrap(ctx: &Context) -> Option<(Mask, usize, usize, Vec<Mask>)> {
    let first = ctx
        .parts
        .iter()
        .copied()
        .find(|&p| p & ctx.block & ctx.block.wrapping_neg() != 0)?;
    let local = compress(first, ctx.block);
    let m = ctx.block.count_ones() as usize;
    let (front, back) = wrap_runs(local << 1, range_mask(1, m));
    let rest = ctx.parts.iter().copied().filter(|&p| p != first).collect();
    Some((first, front, back, rest))
}

/// Index of `block` in `blocks`.
fn position(blocks: &[Mask], block: Mask) -> Option<usize> {
    blocks.iter().position(|&b| b == block)
}

type Matcher = fn(&Context) -> Option<CaseTag>;

fn match_one(ctx: &Context) -> Option<CaseTag> {
    let Upper::Interval(blocks) = &ctx.upper else {
        return None;
    };
    let at = position(blocks, ctx.block)?;
    Some(CaseTag::One {
        i: sizes(&blocks[..at]),
        k: sizes(&ctx.parts),
        j: sizes(&blocks[at + 1..]),
    })
}

fn match_five(ctx: &Context) -> Option<CaseTag> {
    let Upper::Interval(blocks) = &ctx.upper else {
        return None;
    };
    let at = position(blocks, ctx.block)?;
    let (_, b, c, rest) = local_wrap(ctx)?;
    Some(CaseTag::Five {
        b,
        c,
        i: sizes(&blocks[..at]),
        k: sizes(&rest),
        j: sizes(&blocks[at + 1..]),
    })
}

fn match_three(ctx: &Context) -> Option<CaseTag> {
    let Upper::Near { a, b, middle, .. } = &ctx.upper else {
        return None;
    };
    let at = position(middle, ctx.block)?;
    Some(CaseTag::Three {
        a: *a,
        b: *b,
        i: sizes(&middle[..at]),
        k: sizes(&ctx.parts),
        j: sizes(&middle[at + 1..]),
    })
}

fn match_seven(ctx: &Context) -> Option<CaseTag> {
    let Upper::Near { a, b, middle, .. } = &ctx.upper else {
        return None;
    };
    let at = position(middle, ctx.block)?;
    let (_, d, e, rest) = local_wrap(ctx)?;
    Some(CaseTag::Seven {
        a: *a,
        b: *b,
        d,
        e,
        i: sizes(&middle[..at]),
        k: sizes(&rest),
        j: sizes(&middle[at + 1..]),
    })
}

fn match_two(ctx: &Context) -> Option<CaseTag> {
    let Upper::Near { w, a, b, middle } = &ctx.upper else {
        return None;
    };
    if *w != ctx.block {
        return None;
    }
    let (left, right, both) = ctx.sides(*a, *b, None);
    if !both.is_empty() {
        return None;
    }
    Some(CaseTag::Two {
        j: sizes(&left),
        i: sizes(middle),
        k: sizes(&right),
    })
}

fn match_four(ctx: &Context) -> Option<CaseTag> {
    let Upper::Near { w, a, b, middle } = &ctx.upper else {
        return None;
    };
    if *w != ctx.block {
        return None;
    }
    let (left, right, both) = ctx.sides(*a, *b, None);
    let [x] = both[..] else { return None };
    let a_prime = (x & range_mask(1, *a)).count_ones() as usize;
    let b_prime = (x & range_mask(ctx.n - b + 1, ctx.n)).count_ones() as usize;
    Some(CaseTag::Four {
        a_prime,
        b_prime,
        j: sizes(&left),
        i: sizes(middle),
        k: sizes(&right),
    })
}

fn match_six(ctx: &Context) -> Option<CaseTag> {
    let Upper::Near { w, a, b, middle } = &ctx.upper else {
        return None;
    };
    if *w != ctx.block {
        return None;
    }
    let p = ctx.parts.iter().copied().find(|&p| p & 2 != 0)?;
    let (left, right, both) = ctx.sides(*a, *b, Some(p));
    if !both.is_empty() {
        return None;
    }
    let (a_prime, b_prime) = wrap_runs(p, range_mask(1, ctx.n));
    Some(CaseTag::Six {
        a_prime,
        b_prime,
        j: sizes(&left),
        i: sizes(middle),
        k: sizes(&right),
    })
}

fn match_eight(ctx: &Context) -> Option<CaseTag> {
    let Upper::Near { w, a, b, middle } = &ctx.upper else {
        return None;
    };
    if *w != ctx.block {
        return None;
    }
    let p = ctx.parts.iter().copied().find(|&p| p & 2 != 0)?;
    let (left, right, both) = ctx.sides(*a, *b, Some(p));
    let [x] = both[..] else { return None };
    let (a_prime, b_prime) = wrap_runs(p, range_mask(1, ctx.n));
    Some(CaseTag::Eight {
        a_prime,
        b_prime,
        d: (x & range_mask(1, *a)).count_ones() as usize,
        e: (x & range_mask(ctx.n - b + 1, ctx.n)).count_ones() as usize,
        j: sizes(&left),
        i: sizes(middle),
        k: sizes(&right),
    })
}

/// The three runs of the part of the split containing 1.
fn three_runs(ctx: &Context) -> Option<(Mask, [usize; 3])> {
    let p = ctx.parts.iter().copied().find(|&p| p & 2 != 0)?;
    if run_count(p) != 3 {
        return None;
    }
    let mut lens = [0; 3];
    let mut rest = p;
    for len in &mut lens {
        let shifted = rest >> rest.trailing_zeros();
        *len = shifted.trailing_ones() as usize;
        rest &= !range_mask(mask_min(rest), mask_min(rest) + *len - 1);
    }
    Some((p, lens))
}

fn match_nine(ctx: &Context) -> Option<CaseTag> {
    let Upper::Near { w, middle, .. } = &ctx.upper else {
        return None;
    };
    if *w != ctx.block {
        return None;
    }
    let (p, [a, b, c]) = three_runs(ctx)?;
    let between: Vec<Mask> = ctx.parts.iter().copied().filter(|&q| q != p).collect();
    Some(CaseTag::Nine {
        a,
        b,
        c,
        i: sizes(&between),
        j: sizes(middle),
    })
}

fn match_ten(ctx: &Context) -> Option<CaseTag> {
    let Upper::Near { w, middle, .. } = &ctx.upper else {
        return None;
    };
    if *w != ctx.block {
        return None;
    }
    let (p, [a, b, c]) = three_runs(ctx)?;
    let between: Vec<Mask> = ctx.parts.iter().copied().filter(|&q| q != p).collect();
    Some(CaseTag::Ten {
        a,
        b,
        c,
        i: sizes(middle),
        j: sizes(&between),
    })
}

const MATCHERS: [Matcher; 10] = [
    match_one,
    match_two,
    match_three,
    match_four,
    match_five,
    match_six,
    match_seven,
    match_eight,
    match_nine,
    match_ten,
];

/// Every template whose rebuilt layouts reproduce `(upper, lower)`.
pub fn matching_cases(upper: &NCPartition, lower: &NCPartition) -> Result<Vec<CaseTag>> {
    let ctx = Context::new(upper, lower)?;
    let mut out = Vec::new();
    for m in MATCHERS {
        let Some(case) = m(&ctx) else { continue };
        if !case.is_well_formed() {
            continue;
        }
        let l = layouts(&case);
        if l.upper.partition().ok().as_ref() == Some(upper)
            && l.lower.partition().ok().as_ref() == Some(lower)
        {
            out.push(case);
        }
    }
    Ok(out)
}

/// The configuration of the last two steps of `chain`.
pub fn classify_case(chain: &Chain) -> Result<CaseTag> {
    let ps = chain.partitions();
    let r = ps.len() - 1;
    if r < 2 {
        return Err(Error::InvalidArgument(
            "the map needs chains with at least two steps".into(),
        ));
    }
    let mut found = matching_cases(&ps[r - 1], &ps[r - 2])?;
    match found.len() {
        1 => Ok(found.pop().expect("one match")),
        0 => Err(Error::Internal(format!(
            "no configuration matches {} < {}",
            ps[r - 2],
            ps[r - 1]
        ))),
        _ => Err(Error::Internal(format!(
            "configurations {:?} all match {} < {}",
            found.iter().map(CaseTag::id).collect::<Vec<_>>(),
            ps[r - 2],
            ps[r - 1]
        ))),
    }
}

/// Result of [`psi`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PsiImage {
    pub case: u8,
    pub params: CaseTag,
    pub gamma: Chain,
    pub bar: usize,
    pub sigma: Permutation,
}

/// `(Ψ(Π), β(Π))`.
pub fn psi(chain: &Chain) -> Result<PsiImage> {
    let case = classify_case(chain)?;
    let l = layouts(&case);
    let sigma = sigma_of(&l)?;
    let ps = chain.partitions();
    let r = ps.len() - 1;
    let a_prime = chain.factorization_type().truncate_last_two()?;
    let mut gamma: Vec<NCPartition> = ps[..r - 1]
        .iter()
        .map(|p| p.map_by(&sigma))
        .collect::<Result<_>>()?;
    gamma.push(ps[r].clone());
    debug_assert_eq!(gamma[r - 2], l.image.partition()?);
    let gamma = Chain::new(a_prime, gamma)
        .map_err(|e| Error::Internal(format!("image is not a chain: {e}")))?;
    Ok(PsiImage {
        case: case.id(),
        params: case,
        gamma,
        bar: l.bar,
        sigma,
    })
}

/// Reads the configuration off `σ(π_{r-2})` and the bar. `s = a_{r-1}`,
/// `t = a_r`.
pub fn decide_case(image: &NCPartition, bar: usize, s: usize, t: usize) -> Result<CaseTag> {
    let n = image.ground().len();
    let bad = || Error::Internal(format!("no configuration for {image} with bar {bar}"));
    if bar == 0 || bar > n {
        return Err(Error::InvalidArgument(format!("bar {bar} outside 1..={n}")));
    }
    let y = |blocks: &[Mask]| sizes(blocks);
    let locate = |blocks: &[Mask]| -> Option<(usize, bool)> {
        blocks
            .iter()
            .position(|&b| b >> bar & 1 == 1)
            .map(|at| (at, mask_min(blocks[at]) == bar))
    };
    match analyse_upper(image, n).ok_or_else(bad)? {
        Upper::Interval(blocks) => {
            let z = y(&blocks);
            let m = z.len();
            let (at, starts) = locate(&blocks).ok_or_else(bad)?;
            if starts {
                let right = m - at;
                if right >= s {
                    Ok(CaseTag::One {
                        i: z[..at].to_vec(),
                        k: z[at..at + s].to_vec(),
                        j: z[at + s..].to_vec(),
                    })
                } else {
                    let front = s - right;
                    Ok(CaseTag::Two {
                        j: z[..front].to_vec(),
                        i: z.get(front..at).ok_or_else(bad)?.to_vec(),
                        k: z[at..].to_vec(),
                    })
                }
            } else {
                let right = m - at - 1;
                let off = bar - mask_min(blocks[at]);
                if right >= s {
                    Ok(CaseTag::Three {
                        a: off,
                        b: z[at] - off,
                        i: z[..at].to_vec(),
                        k: z[at + 1..at + 1 + s].to_vec(),
                        j: z[at + 1 + s..].to_vec(),
                    })
                } else {
                    let nj = s - 1 - right;
                    Ok(CaseTag::Four {
                        a_prime: off,
                        b_prime: z[at] - off,
                        j: z[..nj].to_vec(),
                        i: z.get(nj..at).ok_or_else(bad)?.to_vec(),
                        k: z[at + 1..].to_vec(),
                    })
                }
            }
        }
        Upper::Near {
            a: p, b: q, middle, ..
        } => {
            let z = y(&middle);
            let len = z.len();
            let tail = |count: usize| len.checked_sub(count).ok_or_else(bad);
            if bar == 1 {
                return Ok(CaseTag::Five {
                    b: p,
                    c: q,
                    i: Vec::new(),
                    k: z.get(..s - 1).ok_or_else(bad)?.to_vec(),
                    j: z[s - 1..].to_vec(),
                });
            }
            if bar <= p {
                return Ok(CaseTag::Nine {
                    a: bar - 1,
                    b: p - (bar - 1),
                    c: q,
                    i: z.get(..s - 1).ok_or_else(bad)?.to_vec(),
                    j: z[s - 1..].to_vec(),
                });
            }
            if bar >= n - q + 2 {
                let c = n - bar + 1;
                let cut = tail(s - 1)?;
                return Ok(CaseTag::Ten {
                    a: p,
                    b: q - c,
                    c,
                    i: z[..cut].to_vec(),
                    j: z[cut..].to_vec(),
                });
            }
            // bar at the start of the back run, or somewhere in the middle
            let (at, starts) = if bar == n - q + 1 {
                (len, true)
            } else {
                locate(&middle).ok_or_else(bad)?
            };
            if starts {
                let from = len - at;
                if from >= s {
                    Ok(CaseTag::Five {
                        b: p,
                        c: q,
                        i: z[..=at].to_vec(),
                        k: z[at + 1..at + s].to_vec(),
                        j: z[at + s..].to_vec(),
                    })
                } else {
                    let i_start = at.checked_sub(t - 1).ok_or_else(bad)?;
                    Ok(CaseTag::Six {
                        a_prime: p,
                        b_prime: q,
                        j: z[..i_start].to_vec(),
                        i: z[i_start..at].to_vec(),
                        k: z[at..].to_vec(),
                    })
                }
            } else {
                let right = len - at - 1;
                let off = bar - mask_min(middle[at]);
                if right + 1 >= s {
                    let cut = tail(s - 1)?;
                    Ok(CaseTag::Seven {
                        a: p,
                        b: q,
                        d: off,
                        e: z[at] - off,
                        i: z[..at].to_vec(),
                        j: z[at + 1..cut].to_vec(),
                        k: z[cut..].to_vec(),
                    })
                } else {
                    let nj = s - 2 - right;
                    Ok(CaseTag::Eight {
                        a_prime: p,
                        b_prime: q,
                        d: off,
                        e: z[at] - off,
                        j: z[..nj].to_vec(),
                        i: z.get(nj..at).ok_or_else(bad)?.to_vec(),
                        k: z[at + 1..].to_vec(),
                    })
                }
            }
        }
    }
}

/// The unique `Π ∈ N(a)` with `psi(Π) = (gamma, bar)`.
pub fn psi_inverse(gamma: &Chain, bar: usize, a: &FactorizationType) -> Result<Chain> {
    let r = a.r();
    if r < 2 {
        return Err(Error::InvalidArgument(
            "the map needs types with at least two parts".into(),
        ));
    }
    let a_prime = a.truncate_last_two()?;
    if gamma.factorization_type() != &a_prime {
        return Err(Error::InvalidArgument(format!(
            "chain has type {}, expected {a_prime}",
            gamma.factorization_type()
        )));
    }
    let gs = gamma.partitions();
    let image = &gs[r - 2];
    let case = decide_case(image, bar, a.parts()[r - 2], a.parts()[r - 1])?;
    if !case.is_well_formed() {
        return Err(Error::Internal(format!(
            "decoded configuration {case:?} is malformed"
        )));
    }
    let l = layouts(&case);
    if l.image.partition()? != *image || l.bar != bar {
        return Err(Error::Internal(format!(
            "decoded configuration {} does not reproduce {image} with bar {bar}",
            case.id()
        )));
    }
    let inverse = sigma_of(&l)?.inverse();
    let mut ps: Vec<NCPartition> = gs[..r - 2]
        .iter()
        .map(|p| p.map_by(&inverse))
        .collect::<Result<_>>()?;
    ps.push(l.lower.partition()?);
    ps.push(l.upper.partition()?);
    ps.push(gs[r - 1].clone());
    Chain::new(a.clone(), ps).map_err(|e| Error::Internal(format!("preimage is not a chain: {e}")))
}

#[cfg(test)]
mod tests {
    use std::collections::HashSet;

    use super::*;
    use crate::chains::enumerate_chains;
    use crate::poly::Polynomial;

    fn part(n: usize, blocks: &[&[usize]]) -> NCPartition {
        let b: Vec<Vec<usize>> = blocks.iter().map(|x| x.to_vec()).collect();
        NCPartition::standard(n, &b).unwrap()
    }

    /// Interval partition with the given block sizes.
    fn ip(sizes: &[usize]) -> Option<NCPartition> {
        sizes
            .iter()
            .map(|&s| block(s).unwrap())
            .reduce(|p, q| oplus(&p, &q).unwrap())
    }

    fn cat(parts: &[Option<NCPartition>]) -> NCPartition {
        parts
            .iter()
            .flatten()
            .cloned()
            .reduce(|p, q| oplus(&p, &q).unwrap())
            .unwrap()
    }

    fn b(s: usize) -> Option<NCPartition> {
        Some(block(s).unwrap())
    }

    #[test]
    fn constructors() {
        let p = part(2, &[&[1], &[2]]);
        assert_eq!(shift(&p, 3).unwrap().blocks(), vec![vec![4], vec![5]]);
        assert_eq!(shift(&p, 0).unwrap(), p);
        let q = part(3, &[&[1, 3], &[2]]);
        assert_eq!(
            shift(&shift(&q, 2).unwrap(), 3).unwrap(),
            shift(&q, 5).unwrap()
        );
        assert_eq!(
            oplus(&block(2).unwrap(), &block(3).unwrap()).unwrap(),
            part(5, &[&[1, 2], &[3, 4, 5]])
        );
        assert_eq!(
            oplus(&block(2).unwrap(), &q).unwrap(),
            part(5, &[&[1, 2], &[3, 5], &[4]])
        );
        let (x, y, z) = (block(1).unwrap(), q.clone(), block(2).unwrap());
        assert_eq!(
            oplus(&oplus(&x, &y).unwrap(), &z).unwrap(),
            oplus(&x, &oplus(&y, &z).unwrap()).unwrap()
        );
        assert_eq!(
            wrap(1, 1, &block(1).unwrap()).unwrap(),
            part(3, &[&[1, 3], &[2]])
        );
        assert_eq!(wrap(2, 1, &p).unwrap(), part(5, &[&[1, 2, 5], &[3], &[4]]));
        let w = wrap(2, 1, &ip(&[1, 2, 1]).unwrap()).unwrap();
        assert_eq!(w.shape(), Shape::NearInterval);
        assert!(oplus(&shift(&p, 1).unwrap(), &p).is_err());
    }

    /// Each layout agrees with the constructor expression for its case.
    #[test]
    fn layouts_match_constructor_expressions() {
        let (i, j, k) = (vec![1, 2], vec![2], vec![1, 1]);
        let (pi, pj, pk) = (ip(&i), ip(&j), ip(&k));
        let w = |x, y, p: NCPartition| wrap(x, y, &p).unwrap();

        let l = layouts(&CaseTag::Three {
            a: 2,
            b: 1,
            i: i.clone(),
            k: k.clone(),
            j: j.clone(),
        });
        assert_eq!(
            l.upper.partition().unwrap(),
            w(2, 1, cat(&[pi.clone(), b(2), pj.clone()]))
        );
        assert_eq!(
            l.lower.partition().unwrap(),
            w(2, 1, cat(&[pi.clone(), pk.clone(), pj.clone()]))
        );
        assert_eq!(
            l.image.partition().unwrap(),
            cat(&[pi.clone(), b(3), pk.clone(), pj.clone()])
        );

        let l = layouts(&CaseTag::Four {
            a_prime: 2,
            b_prime: 1,
            j: j.clone(),
            i: i.clone(),
            k: k.clone(),
        });
        assert_eq!(l.upper.partition().unwrap(), w(4, 3, pi.clone().unwrap()));
        assert_eq!(
            l.lower.partition().unwrap(),
            cat(&[pj.clone(), Some(w(2, 1, pi.clone().unwrap())), pk.clone()])
        );
        assert_eq!(
            l.image.partition().unwrap(),
            cat(&[pj.clone(), pi.clone(), b(3), pk.clone()])
        );

        let l = layouts(&CaseTag::Five {
            b: 1,
            c: 2,
            i: i.clone(),
            k: k.clone(),
            j: j.clone(),
        });
        assert_eq!(
            l.upper.partition().unwrap(),
            cat(&[pi.clone(), b(5), pj.clone()])
        );
        assert_eq!(
            l.lower.partition().unwrap(),
            cat(&[pi.clone(), Some(w(1, 2, pk.clone().unwrap())), pj.clone()])
        );
        assert_eq!(
            l.image.partition().unwrap(),
            w(1, 2, cat(&[pi.clone(), pk.clone(), pj.clone()]))
        );
        assert_eq!(l.bar, 1 + 1 + 1);

        let l = layouts(&CaseTag::Six {
            a_prime: 1,
            b_prime: 2,
            j: j.clone(),
            i: i.clone(),
            k: k.clone(),
        });
        assert_eq!(l.upper.partition().unwrap(), w(3, 4, pi.clone().unwrap()));
        assert_eq!(
            l.lower.partition().unwrap(),
            w(1, 2, cat(&[pj.clone(), pi.clone(), pk.clone()]))
        );

        let l = layouts(&CaseTag::Seven {
            a: 1,
            b: 1,
            d: 2,
            e: 1,
            i: i.clone(),
            k: k.clone(),
            j: j.clone(),
        });
        assert_eq!(
            l.upper.partition().unwrap(),
            w(1, 1, cat(&[pi.clone(), b(5), pj.clone()]))
        );
        assert_eq!(
            l.lower.partition().unwrap(),
            w(
                1,
                1,
                cat(&[pi.clone(), Some(w(2, 1, pk.clone().unwrap())), pj.clone()])
            )
        );
        assert_eq!(
            l.image.partition().unwrap(),
            w(1, 1, cat(&[pi.clone(), b(3), pj.clone(), pk.clone()]))
        );

        let l = layouts(&CaseTag::Eight {
            a_prime: 1,
            b_prime: 1,
            d: 1,
            e: 2,
            j: j.clone(),
            i: i.clone(),
            k: k.clone(),
        });
        assert_eq!(l.upper.partition().unwrap(), w(4, 5, pi.clone().unwrap()));
        assert_eq!(
            l.lower.partition().unwrap(),
            w(
                1,
                1,
                cat(&[pj.clone(), Some(w(1, 2, pi.clone().unwrap())), pk.clone()])
            )
        );
        assert_eq!(
            l.image.partition().unwrap(),
            w(1, 1, cat(&[pj.clone(), pi.clone(), b(3), pk.clone()]))
        );

        let l = layouts(&CaseTag::Nine {
            a: 1,
            b: 2,
            c: 1,
            i: i.clone(),
            j: j.clone(),
        });
        assert_eq!(l.upper.partition().unwrap(), w(6, 1, pj.clone().unwrap()));
        assert_eq!(
            l.image.partition().unwrap(),
            w(3, 1, cat(&[pi.clone(), pj.clone()]))
        );
        assert_eq!(l.bar, 2);

        let l = layouts(&CaseTag::Ten {
            a: 1,
            b: 2,
            c: 1,
            i: i.clone(),
            j: j.clone(),
        });
        assert_eq!(l.upper.partition().unwrap(), w(1, 5, pi.clone().unwrap()));
        assert_eq!(
            l.image.partition().unwrap(),
            w(1, 3, cat(&[pi.clone(), pj.clone()]))
        );
        assert_eq!(l.bar, l.image.len());
    }

    #[test]
    fn case_one_is_identity_with_bar_at_min() {
        let a = FactorizationType::new(vec![2, 2, 2]).unwrap();
        for chain in enumerate_chains(&a) {
            let out = psi(&chain).unwrap();
            if out.case == 1 {
                assert!(out.sigma.is_identity());
                let split = chain.partitions()[1]
                    .split_from(&chain.partitions()[2])
                    .unwrap();
                assert_eq!(out.bar, mask_min(split.block));
            }
        }
    }

    #[test]
    fn every_case_occurs() {
        let mut ids = HashSet::new();
        for a in FactorizationType::all_for(6)
            .into_iter()
            .filter(|a| a.r() >= 2)
        {
            for chain in enumerate_chains(&a) {
                ids.insert(classify_case(&chain).unwrap().id());
            }
        }
        assert_eq!(ids, (1..=10).collect());
    }

    #[test]
    fn n3_fiber_is_every_bar() {
        let a = FactorizationType::new(vec![2, 2]).unwrap();
        let bars: HashSet<usize> = enumerate_chains(&a).map(|c| psi(&c).unwrap().bar).collect();
        assert_eq!(bars, HashSet::from([1, 2, 3]));
    }

    #[test]
    fn exhaustive_small() {
        for n in 3..=6 {
            for a in FactorizationType::all_for(n)
                .into_iter()
                .filter(|a| a.r() >= 2)
            {
                let r = a.r();
                let mut fibers: BTreeMap<Vec<NCPartition>, Polynomial> = BTreeMap::new();
                let mut seen = HashSet::new();
                for chain in enumerate_chains(&a) {
                    let out = psi(&chain).unwrap_or_else(|e| panic!("{a} {chain}: {e}"));
                    assert!(
                        seen.insert((out.gamma.clone(), out.bar)),
                        "{a}: collision at {chain}"
                    );
                    let back = psi_inverse(&out.gamma, out.bar, &a)
                        .unwrap_or_else(|e| panic!("{a} {chain}: {e}"));
                    assert_eq!(back, chain);
                    *fibers.entry(out.gamma.partitions().to_vec()).or_default() +=
                        &Polynomial::monomial(chain.weight(), 1);
                }
                let a_prime = a.truncate_last_two().unwrap();
                let factor = Polynomial::linear(
                    (r - 1) as u32,
                    (n - a.parts()[r - 1]) as i64,
                    a.parts()[r - 1] as i64,
                );
                let mut count = 0;
                for gamma in enumerate_chains(&a_prime) {
                    count += 1;
                    let expected = &Polynomial::monomial(gamma.weight(), 1) * &factor;
                    assert_eq!(
                        fibers.get(gamma.partitions()),
                        Some(&expected),
                        "{a} fiber over {gamma}"
                    );
                }
                assert_eq!(seen.len(), count * n);
            }
        }
    }
}
