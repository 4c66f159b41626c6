use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimensionless distance must be positive and finite, got {0}")]
    InvalidDistance(f64),

    #[error("unsupported integral order {0} (only 0, 1 and 2 occur in the dyadic error term)")]
    UnsupportedOrder(u32),

    #[error("expected a unit vector, got |v| = {0}")]
    NotUnitVector(f64),

    #[error("detuning must be finite, got {0}")]
    InvalidDetuning(f64),

    #[error("quadrature did not converge for I_{order}({s}): error estimate {error:e} after {subdivisions} subdivisions")]
    Quadrature {
        order: u32,
        s: f64,
        error: f64,
        subdivisions: usize,
    },

    #[error("RWA error term has a non-negligible imaginary part {imag:e} (magnitude {magnitude:e})")]
    ComplexRwaError { imag: f64, magnitude: f64 },

    #[error("emitters {0} and {1} occupy the same position")]
    CoincidentEmitters(usize, usize),

    #[error("at least two emitters are required, got {0}")]
    TooFewEmitters(usize),

    #[error("interaction ratio is undefined: Re[J_exact] = 0")]
    UndefinedRatio,

    #[error("interaction matrix is not square and symmetric (entry ({0}, {1}))")]
    NotSymmetric(usize, usize),

    #[error("interaction matrix has a non-zero diagonal entry at {0}")]
    NonZeroDiagonal(usize),

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("eigensolver failed to converge after {iterations} QR sweeps")]
    EigenNoConvergence { iterations: usize },

    #[error("sweep needs at least two points, got {0}")]
    SweepTooShort(usize),

    #[error("sweep parameters must be strictly increasing (index {0})")]
    UnsortedSweep(usize),

    #[error("branches are defined on different parameter grids")]
    MismatchedGrids,

    #[error("decay rate must be non-negative, got {0}")]
    NegativeRate(f64),

    #[error("a ring needs at least 3 emitters, got {0}")]
    RingTooSmall(usize),

    #[error("first row is not palindromic: J[0][{index}] != J[0][N-{index}]")]
    NotPalindromic { index: usize },

    #[error("first row must start with a zero self-coupling, got {0}")]
    NonZeroSelfCoupling(f64),

    #[error("ring interaction matrix is not circulant (deviation {0:e})")]
    NotCirculant(f64),

    #[error("ring decay rates differ between models by {0:e}, expected invariance")]
    RingInvarianceViolated(f64),
}
