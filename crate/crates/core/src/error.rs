use thiserror::Error;

/// Everything that can go wrong while building or analysing substitutive systems.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: undeclared letter `{token}`")]
    UndeclaredLetter { line: usize, token: String },
    #[error("line {line}: empty image for `{token}`")]
    EmptyImage { line: usize, token: String },
    #[error("line {line}: duplicate rule for `{token}`")]
    DuplicateRule { line: usize, token: String },
    #[error("no rule for letter `{0}`")]
    MissingRule(String),
    #[error("duplicate letter `{0}` in alphabet")]
    DuplicateLetter(String),
    #[error("alphabet is empty")]
    EmptyAlphabet,
    #[error("invalid token `{0}`")]
    InvalidToken(String),
    #[error("coding is not defined on `{0}`")]
    PartialCoding(String),
    #[error("substitution is not growing; bounded letters: {0}")]
    NotGrowing(String),
    #[error("substitution is not of constant length")]
    NotConstantLength,
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),
    #[error("letter set is not closed under the substitution")]
    NotClosed,
    #[error("relation offset undetermined: {0}")]
    Undetermined(String),
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
    #[error("denominator {q} is not invertible in base {k}")]
    NotKAdic { q: String, k: u32 },
    #[error("`{0}` is not in the language of the system")]
    NotInLanguage(String),
    #[error("{0}")]
    InvalidArgument(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
