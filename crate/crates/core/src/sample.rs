//! Random sets and elements for property suites.

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::{check_depth, induce, ClopenSet, FullGroupElement, Result};

/// Each depth-`depth` cylinder is kept with probability `density`.
pub fn random_set<R: Rng + ?Sized>(rng: &mut R, depth: u32, density: f64) -> Result<ClopenSet> {
    check_depth(depth)?;
    let members: Vec<u64> = (0..1u64 << depth)
        .filter(|_| rng.random_bool(density))
        .collect();
    ClopenSet::new(depth, members)
}

/// Like [`random_set`] but never empty.
pub fn random_nonempty_set<R: Rng + ?Sized>(
    rng: &mut R,
    depth: u32,
    density: f64,
) -> Result<ClopenSet> {
    let a = random_set(rng, depth, density)?;
    if !a.is_empty() {
        return Ok(a);
    }
    let s = rng.random_range(0..1u64 << depth);
    ClopenSet::cylinder(depth, s)
}

/// A random element all of whose prefix cycles have zero displacement.
///
/// Wrap counts are drawn in `[-W, W]` for every position of a cycle but the
/// last, which absorbs whatever makes the cycle sum vanish.
pub fn random_periodic<R: Rng + ?Sized>(
    rng: &mut R,
    depth: u32,
    wrap_bound: u64,
) -> Result<FullGroupElement> {
    check_depth(depth)?;
    let size = 1u64 << depth;
    let mut perm: Vec<u64> = (0..size).collect();
    perm.shuffle(rng);
    let w = i64::try_from(wrap_bound).unwrap_or(i64::MAX);
    let mut cocycle = vec![BigInt::from(0); size as usize];
    let mut seen = vec![false; size as usize];
    for start in 0..size as usize {
        if seen[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut s = start;
        while !seen[s] {
            seen[s] = true;
            cycle.push(s);
            s = perm[s] as usize;
        }
        let mut sum = BigInt::from(0);
        let last = cycle.len() - 1;
        for (i, &s) in cycle.iter().enumerate() {
            let step = BigInt::from((perm[s] + size - s as u64) % size);
            let n = if i < last {
                step + (BigInt::from(rng.random_range(-w..=w)) << depth)
            } else {
                // steps around a cycle add up to a multiple of 2^depth
                -&sum
            };
            sum += &n;
            cocycle[s] = n;
        }
    }
    Ok(FullGroupElement::validate(depth, cocycle).expect("cycle construction is bijective"))
}

/// Product of `count` maps induced by `T` on random nonempty sets.
pub fn random_induced_product<R: Rng + ?Sized>(
    rng: &mut R,
    max_depth: u32,
    count: usize,
) -> Result<FullGroupElement> {
    let t = FullGroupElement::odometer();
    let mut acc = FullGroupElement::identity();
    for _ in 0..count {
        let depth = rng.random_range(0..=max_depth);
        let density = rng.random_range(0.1..0.9);
        let a = random_nonempty_set(rng, depth, density)?;
        acc = acc.compose(&induce(&t, &a)?.element);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn periodic_samples_are_periodic() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let d = rng.random_range(0..=6);
            let u = random_periodic(&mut rng, d, 3).unwrap();
            assert!(u.is_periodic().is_some());
            assert_eq!(u.index(), BigInt::from(0));
        }
    }

    #[test]
    fn induced_products_are_positive() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for k in 0..5 {
            let u = random_induced_product(&mut rng, 5, k).unwrap();
            assert!(u.is_positive());
            assert_eq!(u.index(), BigInt::from(k));
        }
    }

    #[test]
    fn nonempty_sets() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            assert!(!random_nonempty_set(&mut rng, 3, 0.01).unwrap().is_empty());
        }
    }
}
