use alloc::string::String;
use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Domain errors raised by the numerical kernels.
///
/// Every variant is a caller mistake (bad shape, out-of-range parameter,
/// invariant violated by an input); none are transient.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    DimensionMismatch { expected: usize, found: usize },
    IndexOutOfRange { index: usize, bound: usize },
    NotPowerOfTwo(usize),
    NotNormalized { norm: f64 },
    NotUnitary { deviation: f64 },
    NotHermitian { deviation: f64 },
    NonFinite,
    InvalidProbabilities { total: f64 },
    InvalidArgument(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::IndexOutOfRange { index, bound } => {
                write!(f, "index {index} out of range (must be < {bound})")
            }
            Error::NotPowerOfTwo(n) => write!(f, "dimension {n} is not a power of two"),
            Error::NotNormalized { norm } => write!(f, "state has norm {norm}, expected 1"),
            Error::NotUnitary { deviation } => {
                write!(f, "matrix is not unitary (max |U†U - I| = {deviation:e})")
            }
            Error::NotHermitian { deviation } => {
                write!(f, "matrix is not Hermitian (max |A - A†| = {deviation:e})")
            }
            Error::NonFinite => f.write_str("non-finite value"),
            Error::InvalidProbabilities { total } => {
                write!(f, "invalid probability vector (sum = {total})")
            }
            Error::InvalidArgument(msg) => f.write_str(msg),
        }
    }
}

impl core::error::Error for Error {}
