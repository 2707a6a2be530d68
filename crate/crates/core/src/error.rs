use thiserror::Error;

/// Whether a failure is the caller's fault or a broken theoretical guarantee.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Precondition,
    Internal,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("gram matrix is not square")]
    NotSquare,

    #[error("gram matrix is not symmetric at ({0}, {1})")]
    NotSymmetric(usize, usize),

    #[error("degenerate form (determinant is zero)")]
    Degenerate,

    #[error("rescaling factor must be nonzero")]
    ZeroScale,

    #[error("zero vector has no primitivity")]
    ZeroVector,

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("generators do not span full rank: rank {rank} < {expected}")]
    RankDeficient { rank: usize, expected: usize },

    #[error("generated module carries a non-integral pairing at ({0}, {1})")]
    NonIntegral(usize, usize),

    #[error("lattice is not even: {0}")]
    NotEven(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(
        "p = 2 supersingular K3 Gram matrices are not covered by the classification used here"
    )]
    P2Unsupported,

    #[error("|det| = {det} is not an even power of {p}")]
    NotPPrimaryDiscriminant { det: String, p: i64 },

    #[error("{0} is not prime")]
    NotPrime(i64),

    #[error("search cap reached: {0}")]
    SearchCap(String),

    #[error("Mukai vector {0} is not primitive")]
    NotPrimitive(String),

    #[error("Mukai vector {0} is not coprime to p = {1}")]
    NotCoprimeToP(String, i64),

    #[error("spherical class must have square -2, got {0}")]
    NotSpherical(i64),

    #[error("moduli precondition failed: {0}")]
    ModuliPrecondition(String),

    #[error("{0}")]
    Precondition(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error("malformed input: {0}")]
    Parse(String),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::SearchCap(_) | Error::Internal(_) | Error::Overflow(_) => ErrorKind::Internal,
            _ => ErrorKind::Precondition,
        }
    }

    /// Process exit code: 2 for bad input, 3 for failed internal guarantees.
    pub fn exit_code(&self) -> i32 {
        match self.kind() {
            ErrorKind::Precondition => 2,
            ErrorKind::Internal => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
