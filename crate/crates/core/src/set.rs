//! Fixed-universe bitsets over the point indices `0..n`.

use std::fmt;

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

const BLOCK_BITS: usize = 64;

/// A subset of the points `0..n`, stored as a bitset.
///
/// All set operations require both operands to share the same universe size;
/// mixing sizes is a logic error and panics.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PointSet {
    n: usize,
    blocks: Vec<u64>,
}

impl PointSet {
    pub fn empty(n: usize) -> Self {
        PointSet {
            n,
            blocks: vec![0; n.div_ceil(BLOCK_BITS)],
        }
    }

    pub fn full(n: usize) -> Self {
        let mut s = Self::empty(n);
        for b in &mut s.blocks {
            *b = u64::MAX;
        }
        s.trim();
        s
    }

    pub fn singleton(n: usize, x: usize) -> Self {
        let mut s = Self::empty(n);
        s.insert(x);
        s
    }

    pub fn from_members<I: IntoIterator<Item = usize>>(n: usize, members: I) -> Self {
        let mut s = Self::empty(n);
        for x in members {
            s.insert(x);
        }
        s
    }

    /// Builds a set from the low `n` bits of `mask`.
    pub fn from_mask(n: usize, mask: u64) -> Self {
        assert!(n <= 64, "mask constructor only covers n <= 64");
        let mut s = Self::empty(n);
        if n > 0 {
            s.blocks[0] = mask;
            s.trim();
        }
        s
    }

    /// Size of the universe, not of the subset.
    pub fn universe(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.blocks.iter().map(|b| b.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.iter().all(|&b| b == 0)
    }

    pub fn contains(&self, x: usize) -> bool {
        debug_assert!(x < self.n);
        self.blocks[x / BLOCK_BITS] >> (x % BLOCK_BITS) & 1 == 1
    }

    pub fn insert(&mut self, x: usize) {
        assert!(x < self.n, "point {x} outside universe 0..{}", self.n);
        self.blocks[x / BLOCK_BITS] |= 1 << (x % BLOCK_BITS);
    }

    pub fn remove(&mut self, x: usize) {
        assert!(x < self.n);
        self.blocks[x / BLOCK_BITS] &= !(1 << (x % BLOCK_BITS));
    }

    pub fn union(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn intersect(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a & !b)
    }

    pub fn complement(&self) -> Self {
        let mut out = self.clone();
        for b in &mut out.blocks {
            *b = !*b;
        }
        out.trim();
        out
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        assert_eq!(self.n, other.n, "universe mismatch");
        self.blocks
            .iter()
            .zip(&other.blocks)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn intersects(&self, other: &Self) -> bool {
        assert_eq!(self.n, other.n, "universe mismatch");
        self.blocks.iter().zip(&other.blocks).any(|(a, b)| a & b != 0)
    }

    pub fn min_element(&self) -> Option<usize> {
        self.iter().next()
    }

    /// Members in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.blocks.iter().enumerate().flat_map(|(i, &block)| {
            let mut b = block;
            std::iter::from_fn(move || {
                if b == 0 {
                    None
                } else {
                    let tz = b.trailing_zeros() as usize;
                    b &= b - 1;
                    Some(i * BLOCK_BITS + tz)
                }
            })
        })
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    fn zip_with(&self, other: &Self, op: impl Fn(u64, u64) -> u64) -> Self {
        assert_eq!(self.n, other.n, "universe mismatch");
        let blocks = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(&a, &b)| op(a, b))
            .collect();
        let mut out = PointSet { n: self.n, blocks };
        out.trim();
        out
    }

    fn trim(&mut self) {
        let used = self.n % BLOCK_BITS;
        if used != 0 {
            if let Some(last) = self.blocks.last_mut() {
                *last &= (1u64 << used) - 1;
            }
        }
    }
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Serializes as the sorted member list, which keeps reports stable.
impl Serialize for PointSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.len()))?;
        for x in self.iter() {
            seq.serialize_element(&x)?;
        }
        seq.end()
    }
}
