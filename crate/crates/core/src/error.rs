use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("modulus must be a positive integer")]
    ZeroModulus,
    #[error("modulus mismatch: {left} vs {right}")]
    ModulusMismatch { left: u64, right: u64 },
    #[error("element {element} is out of range for modulus {modulus}")]
    OutOfRange { element: u64, modulus: u64 },
    #[error("duplicate element {0}")]
    Duplicate(u64),
    #[error("{order} does not divide {modulus}")]
    NotADivisor { order: u64, modulus: u64 },
    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("operation requires a nonempty set")]
    EmptySet,
    #[error("set has {actual} elements, expected {expected}")]
    WrongCardinality { expected: usize, actual: usize },
    #[error("set of size {size} exceeds the configured bound {bound}")]
    SizeOverBound { size: usize, bound: usize },
    #[error("modulus {modulus} exceeds the configured bound {bound}")]
    ModulusOverBound { modulus: u64, bound: u64 },
    #[error("point {index} is not on the unit circle (|z| = {modulus})")]
    NotUnitModulus { index: usize, modulus: f64 },
    #[error("integer {0} exceeds the magnitude bound 2^30")]
    MagnitudeOverBound(i64),
    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),
    #[error("malformed witness: {0}")]
    MalformedWitness(String),
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
