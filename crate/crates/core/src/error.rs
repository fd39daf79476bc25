use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("cannot parse rational {0:?}")]
    ParseRational(String),
    #[error("cannot parse linear form {input:?}: {reason}")]
    ParseForm { input: String, reason: String },
    #[error("cannot parse parameter tuple {input:?}: {reason}")]
    ParseParams { input: String, reason: String },
    #[error("division by zero")]
    DivisionByZero,
    #[error("parameter {name} = {value} is not strictly positive")]
    NonPositiveParameter { name: char, value: String },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("cutoff must be positive, got {0}")]
    NonPositiveCutoff(String),
    #[error("the imaginary part of the eigenfunction for q = 0 vanishes identically")]
    DegenerateEigenfunction,
    #[error("grid cell center lies on the nodal set (q = {q:?}, offset = {offset})")]
    GridDegenerate { q: Vec<i64>, offset: String },
    #[error(
        "grid resolution {resolution} is too coarse for |q|_1 = {l1}; need at least {required}"
    )]
    ResolutionTooCoarse {
        resolution: usize,
        l1: u64,
        required: usize,
    },
    #[error("enumeration box of {cells} points exceeds the limit of {limit}")]
    EnumerationTooLarge { cells: u128, limit: u128 },
    #[error("integer overflow in exact lattice arithmetic")]
    Overflow,
    #[error("isospectrality violated at eigenvalue {eigenvalue}: {detail}")]
    IsospectralityViolation { eigenvalue: String, detail: String },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("parity classification failed for form {form}: {reason}")]
    Classification { form: String, reason: String },
    #[error("dominance certificate failed: {0}")]
    CertificateFailure(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error("golden list: {0}")]
    Golden(String),
}

impl Error {
    /// Errors caused by bad caller input, as opposed to internal
    /// consistency failures.
    pub fn is_invalid_input(&self) -> bool {
        matches!(
            self,
            Error::ParseRational(_)
                | Error::ParseForm { .. }
                | Error::ParseParams { .. }
                | Error::DivisionByZero
                | Error::NonPositiveParameter { .. }
                | Error::DimensionMismatch { .. }
                | Error::Singular
                | Error::NotSymmetric
                | Error::NotPositiveDefinite
                | Error::NonPositiveCutoff(_)
                | Error::DegenerateEigenfunction
                | Error::ResolutionTooCoarse { .. }
                | Error::EnumerationTooLarge { .. }
                | Error::Precondition(_)
                | Error::Golden(_)
        )
    }
}
