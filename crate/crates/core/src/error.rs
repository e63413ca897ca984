use thiserror::Error;

/// Failures raised by the numeric core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix has non-finite entries")]
    NonFinite,

    #[error("operator is not normal (residual {residual:.3e})")]
    NotNormal { residual: f64 },

    #[error("operator is not Hermitian (residual {residual:.3e})")]
    NotHermitian { residual: f64 },

    #[error("operator is not unitary (residual {residual:.3e})")]
    NotUnitary { residual: f64 },

    #[error("not a density matrix: {reason}")]
    NotDensityMatrix { reason: String },

    #[error("eigenvalue cluster spans {span:.3e}, more than 10x the clustering tolerance {tol:.3e}")]
    DegenerateClustering { span: f64, tol: f64 },

    #[error("operator norm of {which} is zero")]
    ZeroNorm { which: &'static str },

    #[error("Kraus operators are incomplete (residual {residual:.3e})")]
    IncompleteChannel { residual: f64 },

    #[error("Kraus operator {index} is not Hermitian")]
    NonHermitianKraus { index: usize },

    #[error("Lindblad operator {index} is not Hermitian")]
    NonHermitianLindblad { index: usize },

    #[error("step dt={dt:.3e} exceeds the stability limit (dt * rate scale = {product:.3e} > 0.1)")]
    StepTooLarge { dt: f64, product: f64 },

    #[error("time {t} is outside the trajectory range [0, {t_end}]")]
    TOutsideTrajectory { t: f64, t_end: f64 },

    #[error("system size {n} exceeds the enumeration limit {max}")]
    TooLarge { n: usize, max: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
