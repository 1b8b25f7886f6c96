use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {left:?} vs {right:?}")]
    DimensionMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("kronecker product of dimension {requested} exceeds the limit {limit}")]
    SizeOverflow { requested: usize, limit: usize },
    #[error("matrix entry at ({row}, {col}) is not finite")]
    NonFinite { row: usize, col: usize },
    #[error("entry buffer of length {len} does not match shape {rows}x{cols}")]
    BadShape {
        rows: usize,
        cols: usize,
        len: usize,
    },
    #[error("matrix exponential did not converge: {0}")]
    ExpNonConvergence(String),
    #[error("operator is not diagonal in this basis: off-diagonal residual {0:e}")]
    OffDiagonalResidual(f64),
    #[error("diagonal entry has imaginary part {0:e}")]
    NonRealDiagonal(f64),
    #[error("value {0} is not a rational with small denominator")]
    NotRational(f64),
    #[error("cutoff {cutoff} too small for safe margin {safe_margin}")]
    CutoffTooSmall { cutoff: usize, safe_margin: usize },
    #[error("occupation {occupation:?} exceeds cutoff {cutoff}")]
    OccupationExceedsCutoff {
        occupation: [usize; 5],
        cutoff: usize,
    },
    #[error("convention mismatch between sectors: {0}")]
    ConventionMismatch(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("unknown {kind} '{name}'")]
    UnknownName { kind: &'static str, name: String },
}

impl Error {
    /// Numeric failures map to their own process exit code.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::ExpNonConvergence(_)
                | Error::NonFinite { .. }
                | Error::OffDiagonalResidual(_)
                | Error::NonRealDiagonal(_)
                | Error::NotRational(_)
        )
    }

    /// Errors caused by the caller's arguments or configuration.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::Config(_)
                | Error::UnknownName { .. }
                | Error::CutoffTooSmall { .. }
                | Error::OccupationExceedsCutoff { .. }
                | Error::ConventionMismatch(_)
        )
    }
}
