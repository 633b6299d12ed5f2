//! Clopen subsets of the Cantor space as finite unions of cylinders.

use std::fmt;

use bitvec::prelude::*;
use num_bigint::BigInt;

use crate::{check_depth, residue, Dyadic, Error, Result};

pub(crate) type Bits = BitVec<u64, Lsb0>;

/// A union of depth-`d` cylinders, stored at its minimal depth.
///
/// Bit `s` of the table is set when the cylinder with little-endian prefix `s`
/// belongs to the set.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ClopenSet {
    depth: u32,
    bits: Bits,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetOp {
    Union,
    Intersection,
    Complement,
    Difference,
}

impl ClopenSet {
    /// Union of the depth-`depth` cylinders named by `prefixes`.
    pub fn new(depth: u32, prefixes: impl IntoIterator<Item = u64>) -> Result<Self> {
        check_depth(depth)?;
        let size = 1u64 << depth;
        let mut bits = bitvec![u64, Lsb0; 0; size as usize];
        for p in prefixes {
            if p >= size {
                return Err(Error::PrefixOutOfRange { prefix: p, depth });
            }
            bits.set(p as usize, true);
        }
        Ok(Self::from_bits(depth, bits))
    }

    pub fn empty() -> Self {
        ClopenSet {
            depth: 0,
            bits: bitvec![u64, Lsb0; 0; 1],
        }
    }

    pub fn full() -> Self {
        ClopenSet {
            depth: 0,
            bits: bitvec![u64, Lsb0; 1; 1],
        }
    }

    /// The single cylinder `[s]_depth`.
    pub fn cylinder(depth: u32, prefix: u64) -> Result<Self> {
        Self::new(depth, [prefix])
    }

    /// Wraps a membership table of length `2^depth` and canonicalizes it.
    pub(crate) fn from_bits(mut depth: u32, mut bits: Bits) -> Self {
        debug_assert_eq!(bits.len(), 1usize << depth);
        while depth > 0 {
            let half = 1usize << (depth - 1);
            if bits[..half] != bits[half..] {
                break;
            }
            bits.truncate(half);
            depth -= 1;
        }
        ClopenSet { depth, bits }
    }

    /// Minimal depth at which the set is a union of cylinders.
    pub fn depth(&self) -> u32 {
        self.depth
    }

    /// Number of member cylinders at the canonical depth.
    pub fn len(&self) -> u64 {
        self.bits.count_ones() as u64
    }

    /// Number of member cylinders once refined to `depth`.
    pub fn len_at(&self, depth: u32) -> u64 {
        assert!(depth >= self.depth);
        self.len() << (depth - self.depth)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.not_any()
    }

    pub fn is_full(&self) -> bool {
        self.bits.all()
    }

    /// Whether the depth-`depth` cylinder `[prefix]` lies in the set.
    /// `depth` must be at least the canonical depth.
    pub fn contains(&self, depth: u32, prefix: u64) -> bool {
        assert!(depth >= self.depth, "query depth below canonical depth");
        let mask = (1u64 << self.depth) - 1;
        self.bits[(prefix & mask) as usize]
    }

    /// Member prefixes at the canonical depth, ascending.
    pub fn members(&self) -> impl Iterator<Item = u64> + '_ {
        self.bits.iter_ones().map(|i| i as u64)
    }

    /// Member prefixes after refinement to `depth`, ascending.
    pub fn members_at(&self, depth: u32) -> Vec<u64> {
        assert!(depth >= self.depth);
        self.refined_bits(depth).iter_ones().map(|i| i as u64).collect()
    }

    /// Membership table at `depth >= self.depth()`.
    pub(crate) fn refined_bits(&self, depth: u32) -> Bits {
        assert!(depth >= self.depth);
        if depth == self.depth {
            self.bits.clone()
        } else {
            self.bits.repeat(1usize << (depth - self.depth))
        }
    }

    pub fn measure(&self) -> Dyadic {
        Dyadic::new(self.len(), u64::from(self.depth))
    }

    fn zip_words(&self, other: &ClopenSet, f: impl Fn(u64, u64) -> u64) -> ClopenSet {
        let depth = self.depth.max(other.depth);
        let mut a = self.refined_bits(depth);
        let b = other.refined_bits(depth);
        for (x, y) in a.as_raw_mut_slice().iter_mut().zip(b.as_raw_slice()) {
            *x = f(*x, *y);
        }
        ClopenSet::from_bits(depth, a)
    }

    pub fn union(&self, other: &ClopenSet) -> ClopenSet {
        self.zip_words(other, |x, y| x | y)
    }

    pub fn intersection(&self, other: &ClopenSet) -> ClopenSet {
        self.zip_words(other, |x, y| x & y)
    }

    pub fn difference(&self, other: &ClopenSet) -> ClopenSet {
        self.zip_words(other, |x, y| x & !y)
    }

    pub fn symmetric_difference(&self, other: &ClopenSet) -> ClopenSet {
        self.zip_words(other, |x, y| x ^ y)
    }

    pub fn complement(&self) -> ClopenSet {
        ClopenSet::from_bits(self.depth, !self.bits.clone())
    }

    /// Dispatches a boolean operation; `Complement` ignores `other`, the
    /// binary operations treat a missing operand as the empty set.
    pub fn boolean(op: SetOp, a: &ClopenSet, b: Option<&ClopenSet>) -> ClopenSet {
        let empty = ClopenSet::empty();
        let b = b.unwrap_or(&empty);
        match op {
            SetOp::Union => a.union(b),
            SetOp::Intersection => a.intersection(b),
            SetOp::Difference => a.difference(b),
            SetOp::Complement => a.complement(),
        }
    }

    pub fn is_subset(&self, other: &ClopenSet) -> bool {
        self.difference(other).is_empty()
    }

    pub fn is_disjoint(&self, other: &ClopenSet) -> bool {
        self.intersection(other).is_empty()
    }

    /// The image `T^k(A)`: cylinder `s` goes to `s + k mod 2^d`.
    pub fn translate(&self, k: impl Into<BigInt>) -> ClopenSet {
        let shift = residue(&k.into(), self.depth) as usize;
        let mut bits = self.bits.clone();
        bits.rotate_right(shift);
        ClopenSet {
            depth: self.depth,
            bits,
        }
    }
}

impl fmt::Debug for ClopenSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ClopenSet(d={}, ", self.depth)?;
        f.debug_set().entries(self.members()).finish()?;
        write!(f, ")")
    }
}

impl fmt::Display for ClopenSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let members: Vec<String> = self.members().map(|s| s.to_string()).collect();
        write!(f, "depth {} {{{}}}", self.depth, members.join(","))
    }
}
