use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum QswError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix is not Hermitian (max deviation {0:.3e})")]
    NotHermitian(f64),
    #[error("iteration did not converge: {0}")]
    NoConvergence(String),
    #[error("vertex {0} is isolated")]
    IsolatedVertex(usize),
    #[error("graph is disconnected")]
    DisconnectedGraph,
    #[error("condensation has {0} sink components, expected exactly one")]
    MultipleSinks(usize),
    #[error("pair probability w_{0} w_{1} / |w|_1 exceeds one")]
    ProbabilityOverflow(usize, usize),
    #[error("Lindblad family for vertex {0} has non-orthogonal columns")]
    NonOrthogonalColumns(usize),
    #[error("wrong topology: {0}")]
    WrongTopology(String),
    #[error("density matrix invariant violated: {0}")]
    DensityInvariantViolated(String),
    #[error("largest eigenvalue is degenerate")]
    DegenerateTop,
    #[error("oracle did not succeed within {0} runs")]
    OracleNeverSucceeds(usize),
    #[error("generator dimension {0} exceeds the cap {1}")]
    DimensionCap(usize, usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl QswError {
    /// True for failures caused by the numerics rather than by the input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            QswError::NoConvergence(_)
                | QswError::DensityInvariantViolated(_)
                | QswError::DegenerateTop
                | QswError::OracleNeverSucceeds(_)
        )
    }
}

impl From<std::io::Error> for QswError {
    fn from(e: std::io::Error) -> Self {
        QswError::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, QswError>;
