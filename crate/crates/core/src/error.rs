use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus degree mismatch: expected a monic polynomial of degree {expected}, got {got}")]
    DegreeMismatch { expected: u32, got: String },
    #[error("modulus {0} is reducible")]
    ReducibleModulus(String),
    #[error("field of order {p}^{n} exceeds the table cap of 2^24 elements")]
    FieldTooLarge { p: u64, n: u32 },
    #[error("invalid field specification `{0}`")]
    FieldSpec(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("{m} does not divide the extension degree {n}")]
    NotADivisor { m: u32, n: u32 },
    #[error("element index {0} is out of range for this field")]
    ElementOutOfRange(u64),
    #[error("invalid element literal `{0}`")]
    ElementLiteral(String),
    #[error("operation requires odd characteristic")]
    EvenCharacteristic,
    #[error("operation requires characteristic 2")]
    OddCharacteristic,
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown symbol `{name}` at position {pos}")]
    UnknownSymbol { pos: usize, name: String },
    #[error("exponent `{0}` is out of range")]
    ExponentOutOfRange(String),
    #[error("function `{0}` takes values outside the declared subfield")]
    ImageNotInSubfield(String),
    #[error("switching coefficient u must be nonzero")]
    ZeroSwitchCoefficient,
    #[error("base function is not PcN at c = {0}; the switching criterion does not apply")]
    BaseNotPcN(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("unknown table row `{0}`")]
    UnknownRow(String),
    #[error("manifest error: {0}")]
    Manifest(String),
    #[error("grid of {size} points exceeds the cap of {cap}")]
    GridTooLarge { size: usize, cap: usize },
}
