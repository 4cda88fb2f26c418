use alloc::string::String;
use core::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Input matrix is not Hermitian; carries the largest |a_ij - conj(a_ji)|.
    NonHermitianInput {
        deviation: f64,
    },
    /// Minimum eigenvalue below `-tol_psd`.
    NegativeEigenvalue {
        value: f64,
    },
    DimMismatch {
        expected: usize,
        found: usize,
    },
    InvalidDistribution(String),
    /// A loaded or constructed object broke one of its invariants.
    InvariantViolation {
        index: usize,
        detail: String,
    },
    /// Block length is not a power of two (or is zero).
    BadLength {
        len: usize,
    },
    LengthMismatch {
        expected: usize,
        found: usize,
    },
    BudgetExceeded {
        required: u64,
        budget: u64,
    },
    NonBinaryInput {
        alphabet: usize,
    },
    NonMonotonePath(String),
    RateInfeasible(String),
    InvalidFactorization(String),
    InvalidArgument(String),
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NonHermitianInput { deviation } => {
                write!(f, "matrix is not Hermitian (max deviation {deviation:e})")
            }
            Error::NegativeEigenvalue { value } => {
                write!(f, "matrix has negative eigenvalue {value:e}")
            }
            Error::DimMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::InvalidDistribution(why) => write!(f, "invalid distribution: {why}"),
            Error::InvariantViolation { index, detail } => {
                write!(f, "invariant violated at index {index}: {detail}")
            }
            Error::BadLength { len } => write!(f, "length {len} is not a power of two"),
            Error::LengthMismatch { expected, found } => {
                write!(f, "length mismatch: expected {expected}, found {found}")
            }
            Error::BudgetExceeded { required, budget } => write!(
                f,
                "exact enumeration needs ~{required} bytes, over the {budget} byte budget"
            ),
            Error::NonBinaryInput { alphabet } => {
                write!(
                    f,
                    "operation needs a binary input alphabet, got {alphabet} symbols"
                )
            }
            Error::NonMonotonePath(why) => write!(f, "invalid decoding path: {why}"),
            Error::RateInfeasible(why) => write!(f, "rate target infeasible: {why}"),
            Error::InvalidFactorization(why) => write!(f, "invalid factorization: {why}"),
            Error::InvalidArgument(why) => write!(f, "invalid argument: {why}"),
        }
    }
}

impl core::error::Error for Error {}
