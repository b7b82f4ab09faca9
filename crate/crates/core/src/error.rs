use thiserror::Error;

/// Everything that can go wrong across the crate. Domain violations are
/// reported here rather than panicking so the CLI can turn them into a
/// single-line diagnostic and a clean exit code.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("filling n = {0} outside the supported range (0, 1]")]
    FillingOutOfRange(f64),

    #[error("coupling u = {0} is not finite")]
    NonFiniteCoupling(f64),

    #[error("second derivative is singular at |u| = 4 approached from the mixed phase")]
    SingularPoint,

    #[error("iso-correlation curve leaves the supported filling range: n = {0}")]
    CurveOutOfRange(f64),

    #[error("a paired block spans whole (k, -k) slots and must contain an even mode count, got {0}")]
    OddPairedBlock(usize),

    #[error("block touches {touched} slots but only L' = {l_prime} are available")]
    BlockTooLarge { touched: usize, l_prime: usize },

    #[error("exact reduction supports even 2 <= L' <= {max}, got L' = {got}")]
    OracleSize { got: usize, max: usize },

    #[error("pair count N_d = {n_d} exceeds the slot count L' = {l_prime}")]
    TooManyPairs { n_d: usize, l_prime: usize },

    #[error("brute-force average over C({l_prime}, {d}) = {count} blocks exceeds the {max} cap")]
    TooManyBlocks {
        l_prime: usize,
        d: usize,
        count: u128,
        max: u128,
    },

    #[error("invalid parameter: {0}")]
    BadParameter(String),

    #[error("window around the critical point resolves only {0} usable points per side; need at least 8")]
    InsufficientResolution(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
