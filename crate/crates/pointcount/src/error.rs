use thiserror::Error;

/// Errors shared by all modules of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {context} (expected {expected}, got {got})")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("nonpositive coefficient at index {index}")]
    NonpositiveCoefficient { index: usize },

    #[error("duplicate divisor label `{0}`")]
    DuplicateLabel(String),

    #[error("kappa coefficient at index {index} is below 1")]
    KappaBelowOne { index: usize },

    #[error("restriction table is missing pair ({0}, {1})")]
    IncompleteRestrictionTable(usize, usize),

    #[error("zero matrix has no normal form")]
    ZeroMatrix,

    #[error("singular matrix (det = 0) does not represent a group element")]
    SingularMatrix,

    #[error("matrix entries overflow the working integer range")]
    EntryOverflow,

    #[error("invalid model configuration: {0}")]
    InvalidConfig(String),

    #[error("index pair ({i}, {j}) out of range for r = {r}")]
    IndexOutOfRange { i: usize, j: usize, r: usize },

    #[error("resource guard: {what} = {got} exceeds limit {limit}")]
    ResourceGuard {
        what: &'static str,
        got: u128,
        limit: u128,
    },

    #[error("histogram too short: bound {bound} < required {required} for T = {t}")]
    HistogramTooShort { bound: u32, required: u32, t: u128 },

    #[error("empty height ball at T = {0}")]
    EmptyBall(u128),

    #[error("degenerate fit grid: {0}")]
    DegenerateGrid(String),

    #[error("s = {s} is at or below the abscissa {abscissa}")]
    BelowAbscissa { s: f64, abscissa: f64 },

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("line bundle is balanced; saturation profile is undefined (use the near-diagonal fraction instead)")]
    BalancedBundle,

    #[error("witness pair ({0}, {1}) does not clamp a single factor (requires i = 1)")]
    WitnessNotClampable(usize, usize),

    #[error("multiplication table is not a group: {0}")]
    NotAGroup(String),

    #[error("cannot parse group input: {0}")]
    GroupParse(String),

    #[error("cache file corrupt: {0}")]
    CacheCorrupt(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
