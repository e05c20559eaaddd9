use std::fmt;

/// Errors shared across the crate.
///
/// Variants carry enough context to print a one-line diagnostic; the CLI maps
/// each variant to a stable machine-readable code in JSON mode.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A group spec string could not be parsed, or a modulus was out of range.
    ParseGroup(String),
    /// The requested operation is undefined for this group (only L(Z4) lacks
    /// a basis of minimal vectors).
    NotWellRounded(String),
    /// An enumeration cap was exceeded (automorphism or stabilizer search).
    CapExceeded { what: &'static str, limit: u64, requested: u64 },
    /// A block construction's hypothesis is not satisfied by the operand;
    /// the caller should fall back to the randomized search.
    Hypothesis(String),
    /// The randomized fallback search ran out of restarts.
    FallbackBudget(String),
    /// A matrix or basis file failed to parse.
    ParseMatrix(String),
    /// A claimed certificate did not check out (membership, norm, or
    /// determinant mismatch).
    VerifyFailed(String),
    /// Dimension mismatch or other structural misuse of the linear algebra.
    Shape(String),
    Io(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::ParseGroup(s) => write!(f, "bad group spec: {s}"),
            Error::NotWellRounded(s) => write!(f, "{s} is not well-rounded: no basis of minimal vectors exists"),
            Error::CapExceeded { what, limit, requested } => {
                write!(f, "{what} cap exceeded: {requested} > {limit} (raise --cap to override)")
            }
            Error::Hypothesis(s) => write!(f, "construction hypothesis not satisfied: {s}"),
            Error::FallbackBudget(s) => write!(f, "fallback search budget exhausted for {s}"),
            Error::ParseMatrix(s) => write!(f, "bad matrix data: {s}"),
            Error::VerifyFailed(s) => write!(f, "verification failed: {s}"),
            Error::Shape(s) => write!(f, "shape error: {s}"),
            Error::Io(s) => write!(f, "io error: {s}"),
        }
    }
}

impl std::error::Error for Error {}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl Error {
    /// Stable short code used by the CLI's JSON error envelope.
    pub fn code(&self) -> &'static str {
        match self {
            Error::ParseGroup(_) => "parse_group",
            Error::NotWellRounded(_) => "not_well_rounded",
            Error::CapExceeded { .. } => "cap_exceeded",
            Error::Hypothesis(_) => "hypothesis",
            Error::FallbackBudget(_) => "fallback_budget",
            Error::ParseMatrix(_) => "parse_matrix",
            Error::VerifyFailed(_) => "verify_failed",
            Error::Shape(_) => "shape",
            Error::Io(_) => "io",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
