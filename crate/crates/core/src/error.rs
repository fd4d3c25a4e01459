use thiserror::Error;

/// Errors reported by the design and simulation routines.
#[derive(Debug, Error)]
pub enum Error {
    /// A degree distribution violates a precondition (negative coefficient,
    /// zero mass, out-of-range degree, ...).
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    /// Projection produced the all-zero vector; there is nothing to normalize.
    #[error("degenerate distribution: all coefficients clamp to zero")]
    DegenerateDistribution,

    /// A configuration value is out of range or inconsistent.
    #[error("invalid config: {0}")]
    InvalidConfig(String),

    /// A degree sequence cannot sum to the requested edge count.
    #[error("infeasible degree sequence: {0}")]
    Infeasible(String),

    /// Graph repair exhausted its swap budget without removing all
    /// duplicate edges and 4-cycles.
    #[error("construction failed: {0}")]
    ConstructionFailed(String),

    /// The training loss became non-finite.
    #[error("training diverged at epoch {epoch}")]
    TrainingDiverged { epoch: usize },

    /// Malformed input file (alist or distribution JSON).
    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
