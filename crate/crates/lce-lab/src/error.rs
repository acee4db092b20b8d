use thiserror::Error;

/// Errors reported by the conditioning and linear-algebra routines.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Input contains NaN or infinite entries, or is structurally invalid.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Matrix expected to be symmetric PSD is not, beyond tolerance.
    #[error("matrix is not symmetric positive semi-definite: {0}")]
    NotPsd(String),

    /// Operand shapes do not line up.
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    /// Douglas factorisation requested for `ran A ⊄ ran B`.
    #[error("incompatible ranges: ‖A − BQ‖ = {residual:.3e} exceeds tolerance")]
    IncompatibleRanges { residual: f64 },

    /// Moments do not arise from a genuine joint second-order structure.
    #[error("inconsistent moments: reconstruction residual {residual:.3e}")]
    InconsistentMoments { residual: f64 },

    /// The compatible-case LCE formula was requested but `ran C_VU ⊄ ran C_V`
    /// numerically; use the truncated or regularised estimator instead.
    #[error("incompatible case: relative residual {residual:.3e}; use a truncated or regularised estimator")]
    IncompatibleCase { residual: f64 },

    /// A scalar or index parameter is outside its admissible range.
    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    /// `C_V` is numerically singular but the invertible regime was requested.
    #[error("covariance block is numerically singular (rank {rank} < dim {dim})")]
    SingularCovariance { rank: usize, dim: usize },

    /// A distribution was built from no atoms.
    #[error("empty input: a finite distribution needs at least one atom")]
    EmptyInput,

    /// A negative weight was supplied.
    #[error("negative weight {0} at atom {1}")]
    NegativeWeight(f64, usize),
}
