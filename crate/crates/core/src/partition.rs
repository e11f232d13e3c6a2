//! Noncrossing partitions between a row of upper points and a row of lower
//! points, together with the diagram operations (tensor product, vertical
//! composition, adjoint) and enumeration.
//!
//! Points are linearized as `u1, …, uk, l_l, …, l_1`: the lower row is bent
//! around the right edge of the strip so that planarity becomes the usual
//! noncrossing condition on a circle. Blocks are numbered in order of their
//! first point in that linear order, which gives every partition a unique
//! canonical representation.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::union_find::UnionFind;

/// Default bound on `k + l` for enumeration.
pub const DEFAULT_MAX_POINTS: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PartitionError {
    #[error("size limit exceeded: {points} points requested, limit is {limit}")]
    SizeLimit { points: usize, limit: usize },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("invalid partition: {0}")]
    Validation(String),
    #[error("cannot parse point {0:?}; expected u<i> or l<j>")]
    Point(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Upper,
    Lower,
}

/// A point of a diagram. `index` is 1-based, counted left to right.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PointRef {
    pub side: Side,
    pub index: usize,
}

impl PointRef {
    pub fn upper(index: usize) -> Self {
        PointRef {
            side: Side::Upper,
            index,
        }
    }

    pub fn lower(index: usize) -> Self {
        PointRef {
            side: Side::Lower,
            index,
        }
    }
}

impl fmt::Display for PointRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.side {
            Side::Upper => write!(f, "u{}", self.index),
            Side::Lower => write!(f, "l{}", self.index),
        }
    }
}

impl FromStr for PointRef {
    type Err = PartitionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || PartitionError::Point(s.to_string());
        let (side, rest) = match s.trim() {
            t if t.starts_with('u') => (Side::Upper, &t[1..]),
            t if t.starts_with('l') => (Side::Lower, &t[1..]),
            _ => return Err(bad()),
        };
        let index: usize = rest.parse().map_err(|_| bad())?;
        if index == 0 {
            return Err(bad());
        }
        Ok(PointRef { side, index })
    }
}

/// One block, as 0-based positions within each row (both ascending).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Block {
    pub upper: Vec<usize>,
    pub lower: Vec<usize>,
}

impl Block {
    pub fn is_through(&self) -> bool {
        !self.upper.is_empty() && !self.lower.is_empty()
    }

    pub fn points(&self) -> impl Iterator<Item = PointRef> + '_ {
        self.upper
            .iter()
            .map(|&i| PointRef::upper(i + 1))
            .chain(self.lower.iter().map(|&j| PointRef::lower(j + 1)))
    }
}

/// An element of NC(k, l).
///
/// Stored as one block label per point, upper points first (left to right),
/// then lower points (left to right). Labels are canonical, so structural
/// equality is partition equality.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "PartitionRepr", into = "PartitionRepr")]
pub struct Partition {
    upper: usize,
    lower: usize,
    labels: Vec<usize>,
    block_count: usize,
}

/// Result of stacking `p` on top of `q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Composition {
    /// The composite `qp`.
    pub result: Partition,
    /// Blocks made only of middle points, removed from the composite.
    pub central_blocks: usize,
    /// Closed cycles, `l + b(qp) + cb − b(p) − b(q)`.
    pub cycles: usize,
}

impl Partition {
    /// Builds a partition from explicit blocks of points, validating that
    /// every point is covered exactly once and that no two blocks cross.
    pub fn from_blocks<I, B>(upper: usize, lower: usize, blocks: I) -> Result<Self, PartitionError>
    where
        I: IntoIterator<Item = B>,
        B: IntoIterator<Item = PointRef>,
    {
        const UNSET: usize = usize::MAX;
        let mut labels = vec![UNSET; upper + lower];
        for (index, block) in blocks.into_iter().enumerate() {
            let mut empty = true;
            for point in block {
                empty = false;
                let id = match point.side {
                    Side::Upper if (1..=upper).contains(&point.index) => point.index - 1,
                    Side::Lower if (1..=lower).contains(&point.index) => upper + point.index - 1,
                    _ => {
                        return Err(PartitionError::Validation(format!(
                            "point {point} out of range for NC({upper},{lower})"
                        )))
                    }
                };
                if labels[id] != UNSET {
                    return Err(PartitionError::Validation(format!(
                        "point {point} appears more than once"
                    )));
                }
                labels[id] = index;
            }
            if empty {
                return Err(PartitionError::Validation("empty block".into()));
            }
        }
        if let Some(id) = labels.iter().position(|&l| l == UNSET) {
            let point = Self::point_of(upper, id);
            return Err(PartitionError::Validation(format!(
                "point {point} is not covered by any block"
            )));
        }
        if !labels_noncrossing(upper, lower, &labels) {
            return Err(PartitionError::Validation(
                "blocks cross each other".into(),
            ));
        }
        Ok(Self::from_labels(upper, lower, &labels))
    }

    /// Canonicalizes raw per-point labels (upper then lower, left to right).
    /// The caller guarantees the labelling is noncrossing.
    pub(crate) fn from_labels(upper: usize, lower: usize, raw: &[usize]) -> Self {
        debug_assert_eq!(raw.len(), upper + lower);
        debug_assert!(labels_noncrossing(upper, lower, raw));
        let max = raw.iter().copied().max().map_or(0, |m| m + 1);
        let mut rename = vec![usize::MAX; max];
        let mut labels = vec![0; raw.len()];
        let mut next = 0;
        for pos in 0..raw.len() {
            let id = linear_to_id(upper, lower, pos);
            let r = raw[id];
            if rename[r] == usize::MAX {
                rename[r] = next;
                next += 1;
            }
            labels[id] = rename[r];
        }
        Partition {
            upper,
            lower,
            labels,
            block_count: next,
        }
    }

    fn point_of(upper: usize, id: usize) -> PointRef {
        if id < upper {
            PointRef::upper(id + 1)
        } else {
            PointRef::lower(id - upper + 1)
        }
    }

    /// The identity diagram in NC(k, k): `k` vertical strings.
    pub fn identity(k: usize) -> Self {
        let labels: Vec<usize> = (0..k).chain(0..k).collect();
        Self::from_labels(k, k, &labels)
    }

    /// The empty diagram in NC(0, 0).
    pub fn empty() -> Self {
        Self::from_labels(0, 0, &[])
    }

    /// The one-block diagram with `upper` and `lower` points.
    pub fn one_block(upper: usize, lower: usize) -> Self {
        Self::from_labels(upper, lower, &vec![0; upper + lower])
    }

    /// Diagram of the multiplication map, the single block in NC(2, 1).
    pub fn multiplication() -> Self {
        Self::one_block(2, 1)
    }

    /// Diagram of the unit map, the lower singleton in NC(0, 1).
    pub fn unit() -> Self {
        Self::one_block(0, 1)
    }

    pub fn upper_count(&self) -> usize {
        self.upper
    }

    pub fn lower_count(&self) -> usize {
        self.lower
    }

    pub fn total_points(&self) -> usize {
        self.upper + self.lower
    }

    /// Number of blocks, `b(p)`.
    pub fn block_count(&self) -> usize {
        self.block_count
    }

    /// Block index of the `i`-th upper point (0-based).
    pub fn upper_block(&self, i: usize) -> usize {
        self.labels[i]
    }

    /// Block index of the `j`-th lower point (0-based).
    pub fn lower_block(&self, j: usize) -> usize {
        self.labels[self.upper + j]
    }

    /// Blocks in canonical order.
    pub fn blocks(&self) -> Vec<Block> {
        let mut blocks = vec![Block::default(); self.block_count];
        for i in 0..self.upper {
            blocks[self.labels[i]].upper.push(i);
        }
        for j in 0..self.lower {
            blocks[self.labels[self.upper + j]].lower.push(j);
        }
        blocks
    }

    /// Horizontal concatenation `p ⊗ q`, with `q` placed to the right.
    pub fn tensor(&self, other: &Partition) -> Partition {
        let shift = self.block_count;
        let mut raw = Vec::with_capacity(self.total_points() + other.total_points());
        raw.extend_from_slice(&self.labels[..self.upper]);
        raw.extend(other.labels[..other.upper].iter().map(|&b| b + shift));
        raw.extend_from_slice(&self.labels[self.upper..]);
        raw.extend(other.labels[other.upper..].iter().map(|&b| b + shift));
        Partition::from_labels(self.upper + other.upper, self.lower + other.lower, &raw)
    }

    /// Reflection through a horizontal line; `p* ∈ NC(l, k)`.
    pub fn adjoint(&self) -> Partition {
        let mut raw = Vec::with_capacity(self.total_points());
        raw.extend_from_slice(&self.labels[self.upper..]);
        raw.extend_from_slice(&self.labels[..self.upper]);
        Partition::from_labels(self.lower, self.upper, &raw)
    }

    /// Vertical composition with `self` on top and `below` underneath,
    /// identifying the lower row of `self` with the upper row of `below`.
    pub fn compose(&self, below: &Partition) -> Result<Composition, PartitionError> {
        if self.lower != below.upper {
            return Err(PartitionError::Shape(format!(
                "cannot compose NC({},{}) with NC({},{}): middle rows have {} and {} points",
                self.upper, self.lower, below.upper, below.lower, self.lower, below.upper
            )));
        }
        let (k, m, w) = (self.upper, self.lower, below.lower);
        // Point ids: upper row of self, then the shared middle row, then the
        // lower row of below.
        let mut uf = UnionFind::new(k + m + w);
        glue_blocks(&mut uf, &self.labels, self.block_count, |id| id);
        glue_blocks(&mut uf, &below.labels, below.block_count, |id| k + id);

        let mut outer_root = vec![usize::MAX; k + m + w];
        let mut raw = Vec::with_capacity(k + w);
        let mut next = 0;
        for id in (0..k).chain(k + m..k + m + w) {
            let root = uf.find(id);
            if outer_root[root] == usize::MAX {
                outer_root[root] = next;
                next += 1;
            }
            raw.push(outer_root[root]);
        }
        let mut central = 0;
        let mut seen = vec![false; k + m + w];
        for id in k..k + m {
            let root = uf.find(id);
            if outer_root[root] == usize::MAX && !seen[root] {
                seen[root] = true;
                central += 1;
            }
        }
        let result = Partition::from_labels(k, w, &raw);
        let cycles = (m + result.block_count + central) as isize
            - self.block_count as isize
            - below.block_count as isize;
        debug_assert!(cycles >= 0, "negative cycle count");
        Ok(Composition {
            result,
            central_blocks: central,
            cycles: cycles.max(0) as usize,
        })
    }
}

fn glue_blocks(uf: &mut UnionFind, labels: &[usize], blocks: usize, id_of: impl Fn(usize) -> usize) {
    let mut first = vec![usize::MAX; blocks];
    for (local, &b) in labels.iter().enumerate() {
        let id = id_of(local);
        if first[b] == usize::MAX {
            first[b] = id;
        } else {
            uf.union(first[b], id);
        }
    }
}

/// Point id (upper first, then lower left to right) at a linear position.
fn linear_to_id(upper: usize, lower: usize, pos: usize) -> usize {
    if pos < upper {
        pos
    } else {
        upper + (lower - 1 - (pos - upper))
    }
}

fn labels_noncrossing(upper: usize, lower: usize, labels: &[usize]) -> bool {
    let linear: Vec<usize> = (0..upper + lower)
        .map(|pos| labels[linear_to_id(upper, lower, pos)])
        .collect();
    linear_noncrossing(&linear)
}

/// Stack test: when a block reappears, every block opened after it must
/// already be finished for good.
fn linear_noncrossing(linear: &[usize]) -> bool {
    let max = linear.iter().copied().max().map_or(0, |m| m + 1);
    let mut state = vec![0u8; max]; // 0 unseen, 1 open, 2 closed
    let mut stack: Vec<usize> = Vec::new();
    for &b in linear {
        match state[b] {
            0 => {
                state[b] = 1;
                stack.push(b);
            }
            1 => {
                while let Some(&top) = stack.last() {
                    if top == b {
                        break;
                    }
                    state[top] = 2;
                    stack.pop();
                }
            }
            _ => return false,
        }
    }
    true
}

/// Checks whether `blocks` is a noncrossing partition of the `k + l`
/// points. Fails if the blocks are not a set partition of those points.
pub fn is_noncrossing<I, B>(blocks: I, upper: usize, lower: usize) -> Result<bool, PartitionError>
where
    I: IntoIterator<Item = B>,
    B: IntoIterator<Item = PointRef>,
{
    match Partition::from_blocks(upper, lower, blocks) {
        Ok(_) => Ok(true),
        Err(PartitionError::Validation(msg)) if msg == "blocks cross each other" => Ok(false),
        Err(e) => Err(e),
    }
}

fn check_bound(points: usize, limit: usize) -> Result<(), PartitionError> {
    if points > limit {
        Err(PartitionError::SizeLimit { points, limit })
    } else {
        Ok(())
    }
}

/// Calls `visit` on every element of NC(k, l) in canonical order without
/// materializing the whole list.
pub fn for_each_partition(
    upper: usize,
    lower: usize,
    max_points: usize,
    mut visit: impl FnMut(&Partition),
) -> Result<(), PartitionError> {
    let n = upper + lower;
    check_bound(n, max_points)?;
    let mut linear = vec![0; n];
    let mut stack = Vec::with_capacity(n);
    let mut scratch = Partition {
        upper,
        lower,
        labels: vec![0; n],
        block_count: 0,
    };
    grow(0, 0, &mut linear, &mut stack, &mut |linear, blocks| {
        for (pos, &b) in linear.iter().enumerate() {
            scratch.labels[linear_to_id(upper, lower, pos)] = b;
        }
        scratch.block_count = blocks;
        visit(&scratch);
    });
    Ok(())
}

/// Restricted growth strings of noncrossing set partitions, in
/// lexicographic order. `stack` holds the blocks that may still grow.
fn grow(
    pos: usize,
    next_block: usize,
    linear: &mut [usize],
    stack: &mut Vec<usize>,
    emit: &mut dyn FnMut(&[usize], usize),
) {
    if pos == linear.len() {
        emit(linear, next_block);
        return;
    }
    for depth in 0..stack.len() {
        let closed = stack.split_off(depth + 1);
        linear[pos] = stack[depth];
        grow(pos + 1, next_block, linear, stack, emit);
        stack.extend(closed);
    }
    linear[pos] = next_block;
    stack.push(next_block);
    grow(pos + 1, next_block + 1, linear, stack, emit);
    stack.pop();
}

/// Every element of NC(k, l), each exactly once, in canonical order.
pub fn enumerate(upper: usize, lower: usize) -> Result<Vec<Partition>, PartitionError> {
    enumerate_with_limit(upper, lower, DEFAULT_MAX_POINTS)
}

pub fn enumerate_with_limit(
    upper: usize,
    lower: usize,
    max_points: usize,
) -> Result<Vec<Partition>, PartitionError> {
    let mut out = Vec::new();
    for_each_partition(upper, lower, max_points, |p| out.push(p.clone()))?;
    Ok(out)
}

/// |NC(k, l)| by enumeration.
pub fn count(upper: usize, lower: usize, max_points: usize) -> Result<u64, PartitionError> {
    let mut n = 0u64;
    for_each_partition(upper, lower, max_points, |_| n += 1)?;
    Ok(n)
}

/// Catalan number `C_k` from `C_{j+1} = Σ_{i≤j} C_i C_{j−i}`.
pub fn catalan(k: usize) -> BigUint {
    let mut c: Vec<BigUint> = Vec::with_capacity(k + 1);
    c.push(BigUint::from(1u32));
    for j in 0..k {
        let next = (0..=j).map(|i| &c[i] * &c[j - i]).sum();
        c.push(next);
    }
    c.pop().unwrap()
}

#[derive(Serialize, Deserialize)]
struct PartitionRepr {
    upper: usize,
    lower: usize,
    blocks: Vec<Vec<String>>,
}

impl From<Partition> for PartitionRepr {
    fn from(p: Partition) -> Self {
        PartitionRepr {
            upper: p.upper,
            lower: p.lower,
            blocks: p
                .blocks()
                .iter()
                .map(|b| b.points().map(|pt| pt.to_string()).collect())
                .collect(),
        }
    }
}

impl TryFrom<PartitionRepr> for Partition {
    type Error = PartitionError;

    fn try_from(repr: PartitionRepr) -> Result<Self, Self::Error> {
        let blocks = repr
            .blocks
            .iter()
            .map(|b| b.iter().map(|s| s.parse()).collect::<Result<Vec<PointRef>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        Partition::from_blocks(repr.upper, repr.lower, blocks)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NC({},{})", self.upper, self.lower)?;
        for block in self.blocks() {
            let pts: Vec<String> = block.points().map(|p| p.to_string()).collect();
            write!(f, " {{{}}}", pts.join(","))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
