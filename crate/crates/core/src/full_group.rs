//! Elements of the topological full group of the dyadic odometer.
//!
//! An element is a depth-`d` cocycle table `n(s)`; it acts by
//! `x ↦ T^{n(s(x))}(x)` where `s(x)` is the depth-`d` prefix of `x`. On
//! cylinders this induces the prefix map `π(s) = s + n(s) mod 2^d`, which must
//! be a permutation.

use std::fmt;

use bitvec::prelude::*;
use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::clopen::Bits;
use crate::{check_depth, residue, ClopenSet, Dyadic, Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FullGroupElement {
    depth: u32,
    cocycle: Vec<BigInt>,
    perm: Vec<u64>,
}

/// Which distance [`FullGroupElement::metric`] computes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    /// `∫ |n_U - n_V|`.
    L1,
    /// Measure of the set where the two elements differ.
    Uniform,
    /// `∫ |n_U - n_V|^p`, i.e. the p-th power of the Lᵖ distance.
    Lp(u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CycleClass {
    Trivial,
    Periodic,
    Positive,
    Negative,
}

/// One cycle of the prefix permutation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitCycle {
    /// `s, π(s), π²(s), …` starting from the smallest prefix of the cycle.
    pub prefixes: Vec<u64>,
    /// Sum of the cocycle over the cycle.
    pub displacement: BigInt,
    pub class: CycleClass,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitDecomposition {
    pub depth: u32,
    /// Ordered by smallest prefix.
    pub cycles: Vec<OrbitCycle>,
}

impl OrbitDecomposition {
    pub fn nontrivial(&self) -> impl Iterator<Item = &OrbitCycle> {
        self.cycles.iter().filter(|c| c.class != CycleClass::Trivial)
    }
}

impl FullGroupElement {
    /// Checks that `cocycle` defines a bijection and returns it in canonical form.
    pub fn validate(depth: u32, cocycle: Vec<BigInt>) -> Result<Self> {
        check_depth(depth)?;
        let expected = 1usize << depth;
        if cocycle.len() != expected {
            return Err(Error::TableLength {
                depth,
                expected,
                got: cocycle.len(),
            });
        }
        let mut seen: Vec<Option<u64>> = vec![None; expected];
        for (s, n) in cocycle.iter().enumerate() {
            let s = s as u64;
            let target = (s + residue(n, depth)) & mask(depth);
            if let Some(first) = seen[target as usize] {
                return Err(Error::NotBijective {
                    first,
                    second: s,
                    target,
                });
            }
            seen[target as usize] = Some(s);
        }
        Ok(Self::from_table(depth, cocycle))
    }

    /// Convenience constructor from machine integers.
    pub fn from_i64(depth: u32, cocycle: &[i64]) -> Result<Self> {
        Self::validate(depth, cocycle.iter().map(|&n| BigInt::from(n)).collect())
    }

    /// Canonicalizes a table already known to be a valid cocycle.
    pub(crate) fn from_table(mut depth: u32, mut cocycle: Vec<BigInt>) -> Self {
        while depth > 0 {
            let half = 1usize << (depth - 1);
            if cocycle[..half] != cocycle[half..] {
                break;
            }
            cocycle.truncate(half);
            depth -= 1;
        }
        let m = mask(depth);
        let perm = cocycle
            .iter()
            .enumerate()
            .map(|(s, n)| (s as u64 + residue(n, depth)) & m)
            .collect();
        FullGroupElement {
            depth,
            cocycle,
            perm,
        }
    }

    pub fn identity() -> Self {
        Self::from_table(0, vec![BigInt::zero()])
    }

    /// The odometer `T`.
    pub fn odometer() -> Self {
        Self::odometer_power(1)
    }

    /// `T^k`, a depth-0 element.
    pub fn odometer_power(k: impl Into<BigInt>) -> Self {
        Self::from_table(0, vec![k.into()])
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn cocycle(&self) -> &[BigInt] {
        &self.cocycle
    }

    /// The prefix permutation `π` at the canonical depth.
    pub fn prefix_map(&self) -> &[u64] {
        &self.perm
    }

    /// Cocycle value on the depth-`depth` cylinder `[prefix]`.
    pub fn value_at(&self, depth: u32, prefix: u64) -> &BigInt {
        debug_assert!(depth >= self.depth);
        &self.cocycle[(prefix & mask(self.depth)) as usize]
    }

    /// Cocycle table refined to `depth`.
    pub fn cocycle_at(&self, depth: u32) -> Vec<BigInt> {
        assert!(depth >= self.depth);
        let m = mask(self.depth);
        (0..1u64 << depth)
            .map(|s| self.cocycle[(s & m) as usize].clone())
            .collect()
    }

    /// Prefix permutation refined to `depth`.
    pub fn prefix_map_at(&self, depth: u32) -> Vec<u64> {
        assert!(depth >= self.depth);
        if depth == self.depth {
            return self.perm.clone();
        }
        let m = mask(self.depth);
        let big = mask(depth);
        // one residue per canonical entry, reused across the 2^(depth - d) copies
        let res: Vec<u64> = self.cocycle.iter().map(|n| residue(n, depth)).collect();
        (0..1u64 << depth)
            .map(|s| (s + res[(s & m) as usize]) & big)
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        self.depth == 0 && self.cocycle[0].is_zero()
    }

    /// Every cocycle value is non-negative.
    pub fn is_positive(&self) -> bool {
        self.cocycle.iter().all(|n| n.sign() != Sign::Minus)
    }

    pub fn is_involution(&self) -> bool {
        self.compose(self).is_identity()
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &FullGroupElement) -> FullGroupElement {
        let depth = self.depth.max(other.depth);
        let other_perm = other.prefix_map_at(depth);
        let mu = mask(self.depth);
        let mv = mask(other.depth);
        let cocycle = (0..1u64 << depth)
            .map(|s| {
                let nv = &other.cocycle[(s & mv) as usize];
                let nu = &self.cocycle[(other_perm[s as usize] & mu) as usize];
                nv + nu
            })
            .collect();
        Self::from_table(depth, cocycle)
    }

    pub fn inverse(&self) -> FullGroupElement {
        let mut cocycle = vec![BigInt::zero(); self.cocycle.len()];
        for (s, n) in self.cocycle.iter().enumerate() {
            cocycle[self.perm[s] as usize] = -n;
        }
        Self::from_table(self.depth, cocycle)
    }

    pub fn power(&self, k: i64) -> FullGroupElement {
        let mut base = if k < 0 { self.inverse() } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = Self::identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.compose(&base);
            }
        }
        acc
    }

    /// `U V U⁻¹ V⁻¹`.
    pub fn commutator(&self, other: &FullGroupElement) -> FullGroupElement {
        self.compose(other)
            .compose(&self.inverse())
            .compose(&other.inverse())
    }

    /// `T^k U T^{-k}`.
    pub fn conjugate_by_odometer(&self, k: &BigInt) -> FullGroupElement {
        FullGroupElement::odometer_power(k.clone())
            .compose(self)
            .compose(&FullGroupElement::odometer_power(-k))
    }

    /// The index `∫ n`, which is always an integer.
    pub fn index(&self) -> BigInt {
        let total: BigInt = self.cocycle.iter().sum();
        let (q, r) = total.div_rem(&(BigInt::one() << self.depth));
        debug_assert!(r.is_zero(), "index of a valid element is an integer");
        q
    }

    /// The index as an exact dyadic, without assuming integrality.
    pub fn index_dyadic(&self) -> Dyadic {
        Dyadic::new(self.cocycle.iter().sum::<BigInt>(), u64::from(self.depth))
    }

    /// Union of the cylinders that the element moves.
    pub fn support(&self) -> ClopenSet {
        let bits: Bits = self.cocycle.iter().map(|n| !n.is_zero()).collect();
        ClopenSet::from_bits(self.depth, bits)
    }

    /// The image `U(A)`.
    pub fn apply_to_set(&self, set: &ClopenSet) -> ClopenSet {
        let depth = self.depth.max(set.depth());
        let perm = self.prefix_map_at(depth);
        let mut bits = bitvec![u64, Lsb0; 0; 1usize << depth];
        for s in set.members_at(depth) {
            bits.set(perm[s as usize] as usize, true);
        }
        ClopenSet::from_bits(depth, bits)
    }

    pub fn metric(&self, other: &FullGroupElement, kind: Metric) -> Dyadic {
        let depth = self.depth.max(other.depth);
        let diffs = (0..1u64 << depth)
            .map(|s| (self.value_at(depth, s) - other.value_at(depth, s)).abs());
        let total: BigInt = match kind {
            Metric::L1 | Metric::Lp(1) => diffs.sum(),
            Metric::Uniform => BigInt::from(diffs.filter(|d| !d.is_zero()).count()),
            Metric::Lp(p) => diffs.map(|d| num_traits::pow(d, p as usize)).sum(),
        };
        Dyadic::new(total, u64::from(depth))
    }

    /// Cocycle sums `N_1(s), …, N_k(s)` along the prefix orbit of `s`,
    /// where `U^j(x) = T^{N_j(s)}(x)` for `x ∈ [s]`.
    pub fn partial_sums(&self, prefix: u64, k: usize) -> Vec<BigInt> {
        let mut out = Vec::with_capacity(k);
        let mut acc = BigInt::zero();
        let mut s = prefix & mask(self.depth);
        for _ in 0..k {
            acc += &self.cocycle[s as usize];
            out.push(acc.clone());
            s = self.perm[s as usize];
        }
        out
    }

    pub fn orbit_decomposition(&self) -> OrbitDecomposition {
        let size = self.cocycle.len();
        let mut visited = bitvec![u64, Lsb0; 0; size];
        let mut cycles = Vec::new();
        for start in 0..size {
            if visited[start] {
                continue;
            }
            let mut prefixes = Vec::new();
            let mut displacement = BigInt::zero();
            let mut all_zero = true;
            let mut s = start;
            while !visited[s] {
                visited.set(s, true);
                prefixes.push(s as u64);
                let n = &self.cocycle[s];
                all_zero &= n.is_zero();
                displacement += n;
                s = self.perm[s] as usize;
            }
            let class = if all_zero {
                CycleClass::Trivial
            } else {
                match displacement.sign() {
                    Sign::NoSign => CycleClass::Periodic,
                    Sign::Plus => CycleClass::Positive,
                    Sign::Minus => CycleClass::Negative,
                }
            };
            cycles.push(OrbitCycle {
                prefixes,
                displacement,
                class,
            });
        }
        OrbitDecomposition {
            depth: self.depth,
            cycles,
        }
    }

    /// `Some(period)` when every orbit is finite; the period is the lcm of
    /// the nontrivial cycle lengths (1 for the identity).
    pub fn is_periodic(&self) -> Option<BigUint> {
        let mut period = BigUint::one();
        for c in self.orbit_decomposition().cycles {
            match c.class {
                CycleClass::Trivial => {}
                CycleClass::Periodic => period = period.lcm(&BigUint::from(c.prefixes.len())),
                _ => return None,
            }
        }
        Some(period)
    }
}

pub(crate) fn mask(depth: u32) -> u64 {
    (1u64 << depth) - 1
}

impl fmt::Display for FullGroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vals: Vec<String> = self.cocycle.iter().map(|n| n.to_string()).collect();
        write!(f, "depth {} [{}]", self.depth, vals.join(","))
    }
}

impl fmt::Debug for FullGroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Uniform permutation plus independent wrap counts in `[-W, W]`:
/// `n(s) = ((π(s) - s) mod 2^d) + 2^d w(s)`.
pub fn random_element_with<R: Rng + ?Sized>(
    rng: &mut R,
    depth: u32,
    wrap_bound: u64,
) -> Result<FullGroupElement> {
    check_depth(depth)?;
    let size = 1u64 << depth;
    let mut perm: Vec<u64> = (0..size).collect();
    perm.shuffle(rng);
    let w = i128::from(wrap_bound);
    let cocycle = perm
        .iter()
        .enumerate()
        .map(|(s, &t)| {
            let step = (t + size - s as u64) % size;
            let wrap = rng.random_range(-w..=w);
            BigInt::from(step) + (BigInt::from(wrap) << depth)
        })
        .collect();
    Ok(FullGroupElement::from_table(depth, cocycle))
}

/// Deterministic in `seed`; see [`random_element_with`].
pub fn random_element(depth: u32, wrap_bound: u64, seed: u64) -> Result<FullGroupElement> {
    random_element_with(&mut ChaCha8Rng::seed_from_u64(seed), depth, wrap_bound)
}
