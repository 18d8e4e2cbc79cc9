use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("operands use different series contexts ({0})")]
    ContextMismatch(String),
    #[error("division by a series that vanishes to the working precision")]
    ZeroDenominator,
    #[error("evaluation point is degenerate for {0}")]
    DegeneratePoint(String),
    #[error("theta(0) appears in a denominator: {0}")]
    Pole(String),
    #[error("specialization hits a pole: {0}")]
    SpecializedPole(String),
    #[error("invalid word: {0}")]
    InvalidWord(String),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("unsupported root datum: {0}")]
    UnsupportedDatum(String),
    #[error("size bound exceeded: {0}")]
    BoundExceeded(String),
    #[error("slope out of range: {0}")]
    SlopeOutOfRange(String),
    #[error("q -> 0 limit does not exist: {0}")]
    LimitDoesNotExist(String),
    #[error("pipe levels disagree with the wiring: {0}")]
    InconsistentLevels(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("non-invertible element: {0}")]
    NotInvertible(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code for the command-line tool: 2 for bad input, 4 for
    /// size bounds, 3 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidWord(_)
            | Error::InvalidPermutation(_)
            | Error::UnsupportedDatum(_)
            | Error::Parse(_)
            | Error::InvalidArgument(_)
            | Error::SlopeOutOfRange(_) => 2,
            Error::BoundExceeded(_) => 4,
            _ => 3,
        }
    }
}
