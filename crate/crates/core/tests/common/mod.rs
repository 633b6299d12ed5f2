//! Pointwise oracles. A point of the Cantor space is modelled as a 2-adic
//! integer truncated to 128 bits, so the odometer is `x ↦ x + 1` and the
//! depth-`d` prefix of `x` is `x mod 2^d`.

#![allow(dead_code)]

use ergo_core::{ClopenSet, FullGroupElement};
use num_traits::ToPrimitive;
use rand::Rng;

pub fn prefix(x: u128, depth: u32) -> u64 {
    (x & ((1u128 << depth) - 1)) as u64
}

pub fn in_set(a: &ClopenSet, x: u128) -> bool {
    a.contains(a.depth(), prefix(x, a.depth()))
}

/// `U(x) = T^{n(s(x))}(x)`.
pub fn apply(u: &FullGroupElement, x: u128) -> u128 {
    let n = u.cocycle()[prefix(x, u.depth()) as usize]
        .to_i128()
        .expect("oracle cocycles fit in i128");
    x.wrapping_add(n as u128)
}

/// A random point of the cylinder `[s]_depth`.
pub fn point_in<R: Rng>(rng: &mut R, depth: u32, s: u64) -> u128 {
    let high: u128 = rng.random();
    (high << depth) | u128::from(s)
}

/// Number of `U`-steps from `x` back into `A`, and the point reached.
pub fn first_return(u: &FullGroupElement, a: &ClopenSet, x: u128, limit: u64) -> (u64, u128) {
    let mut y = x;
    for k in 1..=limit {
        y = apply(u, y);
        if in_set(a, y) {
            return (k, y);
        }
    }
    panic!("no return within {limit} steps");
}

/// Least `k ≥ 1` with `x + k` or `x - k` outside `A`, by walking.
pub fn escape_walk(a: &ClopenSet, x: u128) -> Option<u64> {
    let limit = 1u64 << (a.depth() + 1);
    (1..=limit).find(|&k| {
        let k = u128::from(k);
        !in_set(a, x.wrapping_add(k)) || !in_set(a, x.wrapping_sub(k))
    })
}

/// Images of the member cylinders of `A` (at `depth`) under `T_A`, found by
/// walking a representative point forward until it re-enters `A`.
pub fn induced_cylinder_map(a: &ClopenSet, depth: u32) -> Vec<(u64, u64)> {
    let t = FullGroupElement::odometer();
    a.members_at(depth)
        .into_iter()
        .map(|s| {
            let (_, y) = first_return(&t, a, u128::from(s), 1 << (depth + 1));
            (s, prefix(y, depth))
        })
        .collect()
}

/// Exhaustive search over all unions `B` of depth-`depth` member cylinders
/// for one with `A = B ⊔ T_A(B) ⊔ … ⊔ T_A^{m-1}(B)`.
pub fn brute_ncycle(a: &ClopenSet, depth: u32, m: u64) -> bool {
    let map = induced_cylinder_map(a, depth);
    let n = map.len();
    assert!(n <= 16, "brute force limited to 16 cylinders");
    let index_of = |s: u64| map.iter().position(|&(c, _)| c == s).unwrap();
    let next: Vec<usize> = map.iter().map(|&(_, img)| index_of(img)).collect();
    let full = (1u32 << n) - 1;
    (1..=full).any(|b| {
        let mut covered = 0u32;
        let mut cur = b;
        for _ in 0..m {
            if covered & cur != 0 {
                return false;
            }
            covered |= cur;
            let mut moved = 0u32;
            for (i, &j) in next.iter().enumerate() {
                if cur & (1 << i) != 0 {
                    moved |= 1 << j;
                }
            }
            cur = moved;
        }
        covered == full
    })
}
