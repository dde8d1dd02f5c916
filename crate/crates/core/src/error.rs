use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("indeterminate roots")]
    IndeterminateRoots,

    #[error("stratum empty for this normal form")]
    StratumEmpty,

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("outside half-space")]
    OutsideHalfSpace,

    #[error("use solve_pair_top")]
    UseSolvePairTop,

    #[error("unknown model `{0}`")]
    UnknownModel(String),

    #[error("invalid parameters for model `{model}`: {reason}")]
    InvalidParams { model: String, reason: String },

    /// The resolved multiple-point manifold has dimension n - (r-1)(k+1) != 0.
    #[error(
        "positive-dimensional; unsupported: n - (r-1)(k+1) = {n} - ({r}-1)({k}+1) = {dim}, only dimension 0 is solved"
    )]
    Dimension { n: usize, k: usize, r: usize, dim: i64 },

    #[error("unsupported stratum: Σ^{{1_{j}}} on a {n}-dimensional source")]
    UnsupportedStratum { n: usize, j: usize },

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }
}
