use alloc::string::String;

/// Errors raised by the kernels, algebra constructions and module families.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("matrix contains NaN or infinite entries")]
    NonFinite,

    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("shape mismatch: expected {expected:?}, got {got:?}")]
    ShapeMismatch {
        expected: (usize, usize),
        got: (usize, usize),
    },

    #[error("matrix is not Hermitian (defect {defect:e})")]
    NotHermitian { defect: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("Jacobi iteration did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("elements belong to different algebras")]
    AlgebraMismatch,

    #[error("element is not positive: block {block} has eigenvalue {eigenvalue:e}")]
    NotPositive { block: usize, eigenvalue: f64 },

    #[error("invalid ideal: {0}")]
    InvalidIdeal(String),

    #[error("invalid homomorphism: {0}")]
    InvalidHom(String),

    #[error("homomorphism is not surjective")]
    NotSurjective,

    #[error("pair does not glue: compatibility residual {residual:e}")]
    GlueMismatch { residual: f64 },

    #[error("vector has {got} coordinates, module expects {expected}")]
    RankMismatch { expected: usize, got: usize },

    #[error("invalid fiber: {0}")]
    InvalidFiber(String),

    #[error("gluing maps are not compatible: {0}")]
    NotCompatible(String),

    #[error("module base is not the given pullback algebra")]
    NotPullbackBase,

    #[error("base algebra is not commutative")]
    NotCommutativeBase,

    #[error("dimension {0} is too small, need at least 2")]
    DimensionTooSmall(usize),

    #[error("vector must be a unit vector (norm {0})")]
    NotUnitVector(f64),

    #[error("algebra has no nonzero commutative ideal")]
    NoCommutativeIdeal,

    #[error("hilbertization refused on a module that must be Hilbert (defect {defect:e})")]
    HilbertizeRefused { defect: f64 },

    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),
}

pub type Result<T> = core::result::Result<T, Error>;
