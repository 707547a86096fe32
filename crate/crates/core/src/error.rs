use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus {0} is not prime")]
    NotPrime(u64),

    #[error("factor count mismatch: format has {factors} factors, bundle has {degrees} degrees")]
    LengthMismatch { factors: usize, degrees: usize },

    #[error("invalid format: {0}")]
    InvalidFormat(String),

    #[error("invalid divisor: {0}")]
    InvalidDivisor(String),

    #[error("point does not lie on the divisor")]
    PointNotOnDivisor,

    #[error("cannot twist by the divisor: degree on factor {factor} is already 0")]
    TwistUnderflow { factor: usize },

    #[error("matrix has {cols} columns, above the rational rank cap of {cap}")]
    RationalSizeCap { cols: usize, cap: usize },

    #[error("basis size overflows the machine word")]
    BasisOverflow,

    #[error("could not realize {wanted} distinct points after {attempts} attempts")]
    RealizationRetryCap { wanted: usize, attempts: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
