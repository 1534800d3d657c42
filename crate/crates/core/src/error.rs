use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("operation not available for family {0}")]
    InvalidFamily(String),

    #[error("matrix is not skew-symmetric (residual {residual:e})")]
    NotSkew { residual: f64 },

    #[error("eigenvalue iteration did not converge")]
    NoConvergence,

    #[error("family {0} is not exponential")]
    NotExponentialFamily(String),

    #[error("point is not in V (|x*_4| = {x4:e}, |x*_5| = {x5:e})")]
    NotInV { x4: f64, x5: f64 },

    #[error("trajectory left V at step {step}")]
    LeftV { step: usize },

    #[error("overflow: {0}")]
    Overflow(String),

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
