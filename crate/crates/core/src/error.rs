use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parameter spec mismatch: {0}")]
    SpecMismatch(String),
    #[error("invalid parameter spec: {0}")]
    Spec(String),
    #[error("unknown parameter `{0}`")]
    UnknownParam(String),
    #[error("laurent floor exceeded: exponent {exponent} is below floor {floor}")]
    LaurentFloor { exponent: i64, floor: i64 },
    #[error("series is not invertible: {0}")]
    NotInvertible(String),
    #[error("window error: {0}")]
    Window(String),
    #[error("substitution leaves no exactly known coefficient: {0}")]
    EmptyWindow(String),
    #[error("divergent product: {0}")]
    DivergentProduct(String),
    #[error("tail sum did not stabilize: {0}")]
    NonStabilizedTail(String),
    #[error("insufficient parameter cap: {0}")]
    Cap(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("unknown identity `{0}`")]
    UnknownIdentity(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
