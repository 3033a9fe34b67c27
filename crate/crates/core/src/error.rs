use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("original sample is empty (N = 0)")]
    EmptySample,
    #[error("zero variance at N={n}, A={a}: no normal approximation exists")]
    ZeroVariance { n: u32, a: u32 },
    #[error("expected a vector of length {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("index {index} out of range for {len} categories")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("covariance needs two distinct categories, got {0} twice")]
    SameCategory(usize),
    #[error("category {index} has size 0")]
    EmptyCategory { index: usize },
    #[error("profile has no categories")]
    NoCategories,
    #[error("{what}: {count} exceeds the cap of {cap}")]
    CapExceeded {
        what: &'static str,
        count: String,
        cap: u64,
    },
    #[error("moment order {t} exceeds the cap of {cap}")]
    MomentOrderCap { t: u32, cap: u32 },
    #[error("vectors have different lengths ({0} and {1})")]
    LengthMismatch(usize, usize),
    #[error("probability vector sums to {0}, not 1")]
    NotNormalized(f64),
    #[error("invalid binomial parameters: {0}")]
    InvalidBinomial(String),
    #[error("outcome {j} outside 0..={n_b}")]
    OutcomeOutOfRange { j: u32, n_b: u32 },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

impl Error {
    /// Whether the error reports a resource cap rather than bad input.
    pub fn is_cap(&self) -> bool {
        matches!(self, Error::CapExceeded { .. } | Error::MomentOrderCap { .. })
    }
}
