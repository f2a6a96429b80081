use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (residual {residual:.3e})")]
    NonHermitianInput { residual: f64 },

    #[error("Jacobi eigensolver did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("pinned nullity {pinned} exceeds dimension {dim}")]
    PinnedNullityOutOfRange { pinned: usize, dim: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix of odd dimension {0} cannot be symplectic")]
    OddDimension(usize),

    #[error("theta must be nonzero")]
    ZeroTheta,

    #[error("theta = {re} + {im}i is not on the unit circle")]
    NotUnitModulus { re: f64, im: f64 },

    #[error("upper-left block is not invertible (condition estimate {condition:.3e}); no generating function of this form")]
    BlockNotInvertible { condition: f64 },

    #[error("I + B is singular; generating triple does not define a matrix")]
    SingularReconstruction,

    #[error("matrix is not symplectic (residual {residual:.3e})")]
    NotSymplectic { residual: f64 },

    #[error("no admissible discretization with k <= {k_max}")]
    KMaxExceeded { k_max: usize },

    #[error("path does not start at the identity")]
    NotStartingAtIdentity,

    #[error("invalid path: {0}")]
    InvalidPath(String),

    #[error("kinetic block alpha is not positive definite at t = {t}")]
    SingularAlpha { t: f64 },

    #[error("integrated flow lost symplecticity (residual {residual:.3e} at {steps} steps)")]
    SymplecticityLost { residual: f64, steps: usize },

    #[error("segment {segment} of {k} contains a conjugate point (velocity-to-position block singular)")]
    ConjugatePointInSegment { segment: usize, k: usize },

    #[error("degenerate time span [{t0}, {t1}]")]
    DegenerateTimeSpan { t0: f64, t1: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invariant violated: {0}")]
    InvariantViolation(String),
}

/// Coarse classification used by front ends to pick an exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Input,
    Numerical,
    Invariant,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        use Error::*;
        match self {
            InvariantViolation(_) => ErrorClass::Invariant,
            NoConvergence { .. }
            | BlockNotInvertible { .. }
            | SingularReconstruction
            | KMaxExceeded { .. }
            | SymplecticityLost { .. }
            | ConjugatePointInSegment { .. } => ErrorClass::Numerical,
            _ => ErrorClass::Input,
        }
    }
}
