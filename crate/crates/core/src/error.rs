use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("unknown generator symbol `{0}`")]
    UnknownGenerator(char),
    #[error("relator {relator} uses a generator beyond the {generators} declared")]
    GeneratorOutOfRange { relator: usize, generators: usize },
    #[error("relator {0} is empty after reduction")]
    EmptyRelator(usize),
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    /// A guaranteed property failed on a finite instance.
    #[error("verification failure: {0}")]
    Verification(String),
    #[error("budget exhausted: {0}")]
    Budget(String),
    #[error("not a cancellable pair: {0}")]
    NotCancellable(String),
    #[error("diagram is not reduced")]
    NotReduced,
    #[error("diagram has spurs")]
    HasSpurs,
    /// The ball is too small to decide.
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error("unsupported format `{0}`")]
    UnsupportedFormat(String),
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
