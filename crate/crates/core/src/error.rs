use thiserror::Error;

#[derive(Debug, Error)]
pub enum FlowError {
    #[error("degenerate curve: edge {edge} has zero length")]
    DegenerateCurve { edge: usize },
    #[error("invalid curve: {0}")]
    InvalidCurve(String),
    #[error("argument out of domain: {0}")]
    OutOfDomain(String),
    #[error("curve length {length:e} is below the constant-map guard")]
    ConstantMapGuard { length: f64 },
    #[error("field has {got} vectors, curve has {expected} vertices")]
    FieldLength { expected: usize, got: usize },
    #[error("path frames do not match: {0}")]
    MismatchedFrames(String),
    #[error("twist profile is not an orientation-preserving bijection: {0}")]
    NonMonotoneTwist(String),
    #[error("invalid tooth count {teeth} for {n} vertices")]
    InvalidTeeth { teeth: usize, n: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = FlowError> = std::result::Result<T, E>;
