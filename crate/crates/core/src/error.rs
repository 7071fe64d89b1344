use thiserror::Error;

/// Errors produced by the analysis library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("alphabet must contain at least one letter")]
    EmptyAlphabet,
    #[error("duplicate letter '{0}' in alphabet")]
    DuplicateLetter(char),
    #[error("letter names must be a single symbol, got {0:?}")]
    MultiCharLetter(String),
    #[error("alphabet has {0} letters; at most {max} are supported", max = crate::word::MAX_LETTERS)]
    AlphabetTooLarge(usize),
    #[error("unknown symbol '{symbol}' in {context}")]
    UnknownSymbol { symbol: char, context: String },
    #[error("letter index {index} out of range for an alphabet of size {size}")]
    LetterOutOfRange { index: usize, size: usize },
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),
    #[error("missing rule for letter '{0}'")]
    MissingRule(char),
    #[error("rule given for '{0}', which is not in the source alphabet")]
    UnexpectedRule(String),
    #[error("letter '{0}' is mapped to the empty word; substitutions must be non-erasing")]
    ErasingSubstitution(char),
    #[error("seed pair (k={power}, a={a}, b={b}) is not valid for this substitution: {reason}")]
    InvalidSeed {
        power: usize,
        a: char,
        b: char,
        reason: String,
    },
    #[error("no seed pair exists up to power {0}")]
    NoSeedPair(usize),
    #[error("expansion would exceed {limit} letters")]
    ExpansionTooLarge { limit: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("invalid normal vector: {0}")]
    InvalidNormal(String),
    #[error("invalid lengths: {0}")]
    InvalidLengths(String),
    #[error("eigenvalue has multiplicity {0}; only simple eigenvalues are supported here")]
    RepeatedEigenvalue(usize),
    #[error("eigenvector residual {residual:e} exceeds bound {bound:e}")]
    EigenvectorResidual { residual: f64, bound: f64 },
    #[error("image of the hyperplane spans the whole target space (dimension {0})")]
    HyperplaneSpansTarget(usize),
    #[error("image window is empty: the morphism erases every letter of the source window")]
    ErasedWindow,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("spec parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
