use thiserror::Error;

/// Errors raised by the library.
///
/// Failed verifications are never errors: they come back as report values.
/// An `Error` means the input was invalid or a precondition did not hold.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("modulus m must be at least 1")]
    ZeroM,
    #[error("operands live in different rings (m = {0} vs m = {1})")]
    RingMismatch(u64, u64),
    #[error("zero has no Euclidean norm")]
    ZeroNorm,
    #[error("division by zero")]
    DivisionByZero,
    #[error("matrix is not unimodular (determinant {0})")]
    NotUnimodular(String),
    #[error("residue modulus {r} is not coprime to m = {m}")]
    NotCoprime { r: u64, m: u64 },
    #[error("residue modulus must be at least 2, got {0}")]
    BadModulus(u64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("no image given for generator `{0}`")]
    MissingGenerator(String),
    #[error("generator index {0} out of range")]
    GeneratorOutOfRange(usize),
    #[error("invalid generator name `{0}`")]
    BadGeneratorName(String),
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
    #[error("exponent overflow")]
    ExponentOverflow,
    #[error("group enumeration exceeded the cap of {0} elements")]
    ElementCapExceeded(usize),
    #[error(transparent)]
    Parse(#[from] crate::text::ParseError),
}

pub type Result<T> = std::result::Result<T, Error>;
