use thiserror::Error;

/// Errors raised by the field, character, Bohr set and Burgess machinery.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} exceeds 2^31")]
    TooLarge(u64),
    #[error("modulus {0} is below 3")]
    TooSmall(u64),
    #[error("argument is zero modulo p")]
    ZeroArgument,
    #[error("the trivial character is not allowed here")]
    TrivialCharacter,
    #[error("{k} does not divide p - 1 = {p_minus_one}")]
    NotDivisor { k: u64, p_minus_one: u64 },
    #[error("length {got} does not match modulus {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("frequency set contains 0")]
    ZeroFrequency,
    #[error("frequency set is empty")]
    EmptyGamma,
    #[error("frequency {0} appears more than once")]
    DuplicateFrequency(u32),
    #[error("radius must be positive")]
    InvalidRadius,
    #[error("Bohr set is empty")]
    EmptyBohrSet,
    #[error("no regular value found in ({lo}, {hi})")]
    NotFound { lo: String, hi: String },
    #[error("set of size {size} is too large: need |A| < sqrt({p})")]
    SetTooLarge { size: usize, p: u32 },
    #[error("set of size {0} is too small")]
    SetTooSmall(usize),
    #[error("radius is not a regular value")]
    NotRegular,
    #[error("shift {0} lies outside B(Gamma, eta)")]
    ShiftOutOfRange(u32),
    #[error("multiplier {n} outside [0, {max}]")]
    MultiplierOutOfRange { n: u64, max: u64 },
    #[error("repeated root {0} in root specification")]
    RepeatedRoot(u32),
    #[error("no residue satisfies the predicate")]
    NoWitness,
}

pub type Result<T> = std::result::Result<T, Error>;
