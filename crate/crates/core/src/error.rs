//! Error type shared by all modules.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Attempt to invert zero in F_p.
    ZeroInverse,
    /// Modulus is out of range or fails the primality check.
    BadPrime(u64),
    /// Polynomial division by the zero polynomial.
    DivisionByZeroPoly,
    /// Interpolation received two points with the same abscissa.
    DuplicateAbscissa,
    /// Operands live in rings truncated at different precisions.
    PrecisionMismatch { left: usize, right: usize },
    /// Euclidean division in y requires a normal divisor.
    NotNormal,
    /// Euclidean division in y requires v(dividend) >= v(divisor).
    ValuationTooLow,
    /// Normalization of the zero polynomial is undefined.
    ZeroInput,
    /// The pseudo-division operator is undefined on the zero pair.
    ZeroPair,
    /// The requested precision does not cover the pseudo-division step.
    PrecisionTooLow { needed: usize, available: usize },
    /// Both input polynomials are zero.
    BothZero,
    /// The characteristic must be at least the truncation order.
    CharacteristicTooSmall { p: u64, k: usize },
    /// Series data fed to the ODE solver is internally inconsistent.
    InconsistentData,
    /// A computed series violates a valuation bound it must satisfy.
    ValuationViolation,
    /// Not enough evaluation points in F_p for the requested degrees.
    FieldTooSmall { p: u64, needed: u64 },
    /// Brute-force ideal computation guarded against oversized instances.
    TooLarge,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::ZeroInverse => write!(f, "inverse of zero in F_p"),
            Error::BadPrime(p) => write!(f, "{p} is not an odd prime below 2^62"),
            Error::DivisionByZeroPoly => write!(f, "polynomial division by zero"),
            Error::DuplicateAbscissa => write!(f, "duplicate abscissa in interpolation"),
            Error::PrecisionMismatch { left, right } => {
                write!(f, "precision mismatch: {left} vs {right}")
            }
            Error::NotNormal => write!(f, "divisor is not a normal polynomial"),
            Error::ValuationTooLow => write!(f, "dividend valuation below divisor valuation"),
            Error::ZeroInput => write!(f, "normalization of the zero polynomial"),
            Error::ZeroPair => write!(f, "pseudo-division of the zero pair"),
            Error::PrecisionTooLow { needed, available } => {
                write!(f, "precision too low: need {needed}, have {available}")
            }
            Error::BothZero => write!(f, "both input polynomials are zero"),
            Error::CharacteristicTooSmall { p, k } => {
                write!(f, "characteristic {p} is smaller than the truncation order {k}")
            }
            Error::InconsistentData => write!(f, "inconsistent ODE data"),
            Error::ValuationViolation => write!(f, "series violates its valuation bound"),
            Error::FieldTooSmall { p, needed } => {
                write!(f, "field of size {p} has fewer than {needed} evaluation points")
            }
            Error::TooLarge => write!(f, "instance too large for brute-force computation"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
