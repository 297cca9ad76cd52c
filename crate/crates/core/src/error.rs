use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unsupported field GF({p}^{n})")]
    UnsupportedField { p: u32, n: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("no cube root")]
    NoCubeRoot,
    #[error("arithmetic across different fields")]
    FieldMismatch,
    #[error("zero parameter for an n or h letter")]
    ZeroParameter,
    #[error("invalid root index {0}")]
    InvalidRoot(i32),
    #[error("not in U: {0}")]
    NotUnipotent(String),
    #[error("unsupported parabolic: {0}")]
    UnsupportedParabolic(String),
    #[error("incompatible characteristic: {0}")]
    IncompatibleCharacteristic(String),
    #[error("no rational conjugator in this field; extend the field")]
    NoRationalConjugator,
    #[error("group larger than cap {cap}")]
    CapExceeded { cap: usize },
    #[error("chop failed: {0}")]
    ChopFailed(String),
    #[error("unrecognized factor: {0}")]
    UnrecognizedFactor(String),
    #[error("relation certificate failed: {0}")]
    CertificateFailed(String),
    #[error("inconsistent ambient data: {0}")]
    Inconsistent(String),
    #[error("not a complement: {0}")]
    NotComplement(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("singular matrix")]
    Singular,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown suite {0:?}")]
    UnknownSuite(String),
}

pub type Result<T> = std::result::Result<T, Error>;
