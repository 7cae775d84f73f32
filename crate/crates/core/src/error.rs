use thiserror::Error;

/// Errors raised by the algebra kernels and the verification pipeline.
///
/// Each variant maps to a stable kind name (see [`Error::kind`]) that the
/// command line surfaces in reports and JSON records.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} variables, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("ideal is not m-primary: {0}")]
    NotMPrimary(String),

    #[error("LengthOverflow: not finite or guard too small (visited more than {guard} monomials)")]
    LengthOverflow { guard: u64 },

    #[error("stability failure: {0}")]
    StabilityFailure(String),

    #[error("genericity failure: {0}")]
    GenericityFailure(String),

    #[error("field artifact: prime-field and rational runs disagree ({0})")]
    FieldArtifact(String),

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("unsupported input: {0}")]
    UnsupportedInput(String),

    #[error("not a system of parameters: {0}")]
    NotSystemOfParameters(String),

    #[error("degree mismatch: type has total degree {type_degree}, polynomial has degree {expected}")]
    DegreeMismatch { type_degree: i64, expected: i64 },

    #[error("height undefined: V(I) misses Supp M")]
    HeightUndefined,

    #[error("{0} is not a minimal prime of the module ideal")]
    NotMinimalPrime(String),

    #[error("degenerate ideal: {0}")]
    DegenerateIdeal(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    /// Stable, machine-readable name of the error kind.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::NotMPrimary(_) => "NotMPrimary",
            Error::LengthOverflow { .. } => "LengthOverflow",
            Error::StabilityFailure(_) => "StabilityFailure",
            Error::GenericityFailure(_) => "GenericityFailure",
            Error::FieldArtifact(_) => "FieldArtifact",
            Error::HypothesisViolated(_) => "HypothesisViolated",
            Error::UnsupportedInput(_) => "UnsupportedInput",
            Error::NotSystemOfParameters(_) => "NotSystemOfParameters",
            Error::DegreeMismatch { .. } => "DegreeMismatch",
            Error::HeightUndefined => "HeightUndefined",
            Error::NotMinimalPrime(_) => "NotMinimalPrime",
            Error::DegenerateIdeal(_) => "DegenerateIdeal",
            Error::InvalidArgument(_) => "InvalidArgument",
            Error::Internal(_) => "Internal",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
