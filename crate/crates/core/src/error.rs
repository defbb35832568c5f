use alloc::string::String;
use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Everything that can go wrong in the numerical core.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Only dimensions 3 and 4 (and 2 for single qubits) are supported.
    InvalidDimension { expected: &'static str, found: usize },
    NotNormalized { norm: f64 },
    NotHermitian { deviation: f64 },
    /// A required orthogonality `<i|j> = 0` does not hold.
    NotOrthogonal { i: usize, j: usize, overlap: f64 },
    /// Two rays that must span a plane (or a larger subspace) are too close to parallel.
    Degenerate(&'static str),
    /// The cubic has a complex-conjugate root pair.
    ComplexRoots { discriminant: f64 },
    /// `sin^2 a * sin^2 b = 1`: the fifth family vector is undefined.
    SingularFamily,
    /// The largest eigenvalue does not exceed the classical bound 2.
    NoViolation { lambda_max: f64 },
    /// `<a1 b1|a2 b2> = 0` in Hardy's construction.
    HardyCollapse,
    /// A constrained search exhausted its restart budget.
    NotFound { restarts: usize },
    /// The graph contains no induced pentagon.
    NoPentagons,
    InvalidGraph(String),
    InvalidArgument(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidDimension { expected, found } => {
                write!(f, "invalid dimension {found}, expected {expected}")
            }
            Error::NotNormalized { norm } => write!(f, "state is not normalized (norm {norm})"),
            Error::NotHermitian { deviation } => {
                write!(f, "operator is not Hermitian (max deviation {deviation:e})")
            }
            Error::NotOrthogonal { i, j, overlap } => {
                write!(f, "vectors {i} and {j} are not orthogonal (|overlap| = {overlap:e})")
            }
            Error::Degenerate(what) => write!(f, "degenerate configuration: {what}"),
            Error::ComplexRoots { discriminant } => {
                write!(f, "cubic has complex roots (discriminant {discriminant:e})")
            }
            Error::SingularFamily => write!(f, "singular family point: sin^2 a sin^2 b = 1"),
            Error::NoViolation { lambda_max } => {
                write!(f, "largest eigenvalue {lambda_max} does not exceed 2")
            }
            Error::HardyCollapse => {
                write!(f, "<a1 b1|a2 b2> = 0: Hardy construction collapses")
            }
            Error::NotFound { restarts } => {
                write!(f, "no solution found within {restarts} restarts")
            }
            Error::NoPentagons => write!(f, "graph has no induced pentagon"),
            Error::InvalidGraph(msg) => write!(f, "invalid graph: {msg}"),
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
