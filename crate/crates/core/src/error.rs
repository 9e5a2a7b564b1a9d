use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("the disk needs at least 3 punctures, got n = {0}")]
    TooFewPunctures(usize),

    #[error("braid word is empty")]
    EmptyWord,

    #[error("zero is not a generator index")]
    ZeroLetter,

    #[error("generator index {letter} is out of range for B_{n} (expected 1..={max})", max = n - 1)]
    LetterOutOfRange { letter: i64, n: usize },

    #[error("cannot parse {0:?} as a signed generator index")]
    BadToken(String),

    #[error("cannot parse {0:?} as a number")]
    BadNumber(String),

    #[error("malformed {0}")]
    Malformed(String),

    #[error("{what}: expected {expected} entries, found {found}")]
    Length {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("coordinate vector is zero")]
    ZeroVector,

    #[error("coordinates live on D_{coords} but the braid word is in B_{word}")]
    DimensionMismatch { coords: usize, word: usize },

    #[error("{0} is odd but must be even")]
    Parity(String),

    #[error("invalid triangle coordinates: {0}")]
    InvalidTriangle(String),

    #[error("coordinates collapsed numerically after {step} applications")]
    Collapse { step: usize },

    #[error("branch signature does not match the word: {0}")]
    SignatureMismatch(String),

    #[error("matrix entry does not fit in a 64-bit integer")]
    Overflow,

    #[error("matrix must be square and nonempty")]
    NotSquare,

    #[error("power iteration did not converge in {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("no sign change of the polynomial found above {low}")]
    NoRoot { low: f64 },

    #[error("parameters out of range: {0}")]
    Parameters(String),

    #[error("{context}: {source}")]
    Context {
        context: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub fn context(self, context: impl Into<String>) -> Self {
        Error::Context {
            context: context.into(),
            source: Box::new(self),
        }
    }
}
