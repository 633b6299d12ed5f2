//! Exact cocycle arithmetic for the L¹ and topological full groups of the
//! dyadic odometer, together with finite Kakutani skyscraper systems.
//!
//! Points of the Cantor space `{0,1}^N` are binary sequences and the odometer
//! `T` adds one with carry in coordinate 0. A depth-`d` cylinder is encoded by
//! its prefix read as a little-endian integer `s = Σ xᵢ 2^i`, so `T` acts on
//! depth-`d` cylinders as `s ↦ s + 1 mod 2^d`.
//!
//! Elements of the topological full group are stored as finite cocycle tables
//! ([`FullGroupElement`]): the element sends `x` to `T^{n(s)}(x)` where `s` is
//! the depth-`d` prefix of `x`. Everything is computed exactly; measures and
//! distances are [`Dyadic`] rationals.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

pub mod clopen;
pub mod constructions;
pub mod dyadic;
mod error;
pub mod full_group;
pub mod json;
pub mod sample;
pub mod skyscraper;

pub use clopen::{ClopenSet, SetOp};
pub use constructions::{
    decompose_pnp, escape_time, escape_tower_family, factor_periodic_into_involutions,
    factor_positive, induce, kac_check, ncycle_support_test, normal_form, positivize,
    transposition, EscapeIntegral, EscapeRow, EscapeTime, Factor, FactorizationCertificate,
    InducedResult, NCycleVerdict, Pnp, Positivized,
};
pub use dyadic::Dyadic;
pub use error::{Error, Result};
pub use full_group::{
    random_element, random_element_with, CycleClass, FullGroupElement, Metric, OrbitCycle, OrbitDecomposition,
};
pub use skyscraper::{
    counterexample_element, counterexample_levels, counterexample_report, counterexample_system,
    tower_metric, CounterexampleReport, CounterexampleRow, Tower, TowerElement, TowerSystem,
};

/// Depth cap used when `ERGO_DEPTH_CAP` is unset.
pub const DEFAULT_DEPTH_CAP: u32 = 24;

/// Prefixes are `u64` and tables are materialized, so no cap can go past this.
const HARD_DEPTH_LIMIT: u32 = 40;

/// The maximum table depth, read once from `ERGO_DEPTH_CAP`.
pub fn depth_cap() -> u32 {
    static CAP: OnceLock<u32> = OnceLock::new();
    *CAP.get_or_init(|| {
        std::env::var("ERGO_DEPTH_CAP")
            .ok()
            .and_then(|v| v.trim().parse::<u32>().ok())
            .map_or(DEFAULT_DEPTH_CAP, |c| c.min(HARD_DEPTH_LIMIT))
    })
}

pub(crate) fn check_depth(depth: u32) -> Result<()> {
    let cap = depth_cap();
    if depth > cap {
        return Err(Error::DepthOverCap { depth, cap });
    }
    Ok(())
}

/// `n mod 2^depth` as a non-negative prefix.
pub(crate) fn residue(n: &BigInt, depth: u32) -> u64 {
    let mask = (1u64 << depth) - 1;
    match n.to_i64() {
        Some(v) => (v as u64) & mask,
        None => {
            let m = n & BigInt::from(mask);
            m.to_u64().expect("masked value fits")
        }
    }
}
