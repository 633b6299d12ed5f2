use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("prefix {prefix} out of range for depth {depth}")]
    PrefixOutOfRange { prefix: u64, depth: u32 },

    #[error("depth {depth} exceeds the depth cap {cap}")]
    DepthOverCap { depth: u32, cap: u32 },

    #[error("cocycle table has {got} entries, depth {depth} needs {expected}")]
    TableLength {
        depth: u32,
        expected: usize,
        got: usize,
    },

    /// Two prefixes land on the same cylinder, so the table is not a bijection.
    #[error("not bijective: prefixes {first} and {second} both map to {target}")]
    NotBijective { first: u64, second: u64, target: u64 },

    #[error("set is empty")]
    EmptySet,

    #[error("set meets its own translate at prefix {prefix}")]
    Overlap { prefix: u64 },

    #[error("element is not almost positive: cycle through prefix {prefix} has displacement {displacement}")]
    NotAlmostPositive { prefix: u64, displacement: String },

    #[error("element is not positive: cocycle is {value} at prefix {prefix}")]
    NotPositive { prefix: u64, value: String },

    #[error("element is not periodic: cycle through prefix {prefix} has displacement {displacement}")]
    NotPeriodic { prefix: u64, displacement: String },

    #[error("n-cycle search and closed-form criterion disagree for m = {m}, {count} cylinders")]
    CriterionMismatch { m: u64, count: u64 },

    #[error("tower system mass {mass} exceeds 1")]
    MassExceedsOne { mass: String },

    #[error("invalid tower: {0}")]
    InvalidTower(String),

    #[error("tower {tower}: level {level} shifted by {shift} leaves the tower")]
    CrossesTop { tower: usize, level: u64, shift: i64 },

    #[error("tower {tower}: levels {first} and {second} both map to {target}")]
    TowerNotBijective {
        tower: usize,
        first: u64,
        second: u64,
        target: u64,
    },

    #[error("elements live on different tower systems")]
    SystemMismatch,

    #[error("tower {tower}: level {level} is not in the level set")]
    NotInLevelSet { tower: usize, level: u64 },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
