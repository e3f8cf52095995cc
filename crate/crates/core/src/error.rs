use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("variable registries differ")]
    RegistryMismatch,

    #[error("invalid variable registry: {0}")]
    InvalidRegistry(String),

    #[error("term of total degree {degree} is not divisible by the homogeneity modulus {modulus}")]
    ThetaViolation { degree: u32, modulus: u32 },

    #[error("exponent vector has length {found}, registry has {expected} variables")]
    ExponentLength { expected: usize, found: usize },

    #[error("q-part {part} is not homogeneous of degree {expected}")]
    HomogeneityViolation { part: u32, expected: u32 },

    #[error("geometric expansion needs a series without constant term")]
    NonzeroConstant,

    #[error("odot of an empty list")]
    EmptyProduct,

    #[error("index out of range: {0}")]
    IndexRange(String),

    #[error("exact division by {divisor} left a nonzero remainder")]
    NonzeroRemainder { divisor: String },

    #[error("closed-form odot needs distinct sums u_i + v_j, but {left} and {right} coincide")]
    DistinctnessViolation { left: String, right: String },

    #[error("closed-form odot needs at most {max} numerator forms, found {found}")]
    Inadmissible { found: u32, max: u32 },

    #[error("not a permutation of 1..={0}")]
    InvalidPermutation(usize),

    #[error("invalid moment key: {0}")]
    InvalidKey(String),

    #[error("coefficient overflow in integer polynomial kernel")]
    Overflow,

    #[error("parse error: {0}")]
    Parse(String),
}
