use thiserror::Error;

/// Errors produced by the covering, transform, interpolation and kernel routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected n = {expected}, found n = {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("dimension n = {n} exceeds the exhaustive cap of {max}")]
    DimensionTooLarge { n: usize, max: usize },
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("cover family is empty")]
    EmptyFamily,
    #[error("m = {m} gives n = {n}, beyond the exhaustive cap of {max}")]
    MTooLarge { m: u32, n: usize, max: usize },
    #[error("m must be at least 1")]
    ZeroM,
    #[error("balanced cover needs an even dimension, got n = {0}")]
    OddDimension(usize),
    #[error("modulus m = {0} must be at least 2")]
    BadModulus(usize),
    #[error("modulus m = {0} must be even")]
    OddModulus(usize),
    #[error("degree d = {d} out of range for n = {n}")]
    DegreeOutOfRange { d: usize, n: usize },
    #[error("degree d = {d} violates d <= n/m - 1/2 (n = {n}, m = {m}; needs n >= {needed})")]
    DegreeTooHigh { n: usize, m: usize, d: usize, needed: usize },
    #[error("subset has {found} elements, expected {expected}")]
    BadSubsetSize { expected: usize, found: usize },
    #[error("invalid subset: {0}")]
    InvalidSubset(String),
    #[error("no value available at point {0:#b}")]
    MissingValue(u32),
    #[error("codomain dimension mismatch: expected k = {expected}, found k = {found}")]
    CodomainMismatch { expected: usize, found: usize },
    #[error("conflicting signs while merging atoms at point {0:#b}")]
    SignConflict(u32),
    #[error("coefficient a_{0} is zero")]
    ZeroCoefficient(usize),
    #[error("system with {rows} rows exceeds the limit of {max}")]
    SystemTooLarge { rows: u128, max: u128 },
    #[error("candidate pool estimate {estimate} exceeds the limit of {max}")]
    PoolTooLarge { estimate: u128, max: u128 },
    #[error("candidate pool cannot cover the cube ({uncovered} points left)")]
    PoolInsufficient { uncovered: usize },
    #[error("invalid search configuration: {0}")]
    BadConfig(String),
    #[error("line {line}: plane has n = {found}, expected n = {expected}")]
    LineDimension { line: usize, expected: usize, found: usize },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
