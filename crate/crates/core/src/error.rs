use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("pole: {0}")]
    Pole(String),

    #[error("unsupported domain: {0}")]
    UnsupportedDomain(String),

    #[error("singular Euler product: factor for p = {0} vanishes")]
    SingularProduct(u64),

    #[error(
        "insufficient cut: tail bound {tail} exceeds allowance {allowed} at s = 2 + {epsilon}"
    )]
    InsufficientCut {
        epsilon: f64,
        tail: f64,
        allowed: f64,
    },

    #[error("argument {value} outside the tabulated range [{lo}, {hi}]")]
    TableRange { value: f64, lo: f64, hi: f64 },

    #[error("no convergence: {0}")]
    NoConvergence(String),

    #[error("malformed sieve cache: {0}")]
    Cache(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
