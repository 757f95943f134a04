use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Fewer gate uses than the protocol construction needs.
    #[error("insufficient uses: n = {n} but n must be >= 2d(d-1) = {required} for d = {d}")]
    InsufficientUses { n: u64, d: usize, required: u64 },

    /// The lattice size came out below 2, where the sine weights are not a distribution.
    #[error("degenerate weight regime: lattice size N = {capacity} (need N >= 2)")]
    DegenerateWeights { capacity: u64 },

    #[error("row budget mismatch: {left} vs {right}")]
    RowBudgetMismatch { left: usize, right: usize },

    #[error("invalid Young diagram: {0}")]
    InvalidDiagram(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("weight vector and score matrix refer to different diagram sets")]
    SetMismatch,

    #[error("eigensolver did not converge after {iterations} iterations (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),

    #[error("bound vacuous for all delta (d = {d}, eps = {epsilon:e})")]
    VacuousForAllDelta { d: usize, epsilon: f64 },

    #[error(
        "unreliable maximum: best start not reproduced by any other start (spread {spread:e})"
    )]
    UnreliableMaximum { spread: f64 },

    #[error("under-resolved grid: {nodes} nodes per direction, need more than {required}")]
    UnderResolvedGrid { nodes: usize, required: usize },

    #[error("seed stream {stream} reused across parallel workers")]
    SeedCollision { stream: u64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True when the error reflects bad caller input rather than a failed
    /// internal verification.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::InsufficientUses { .. }
                | Error::DegenerateWeights { .. }
                | Error::RowBudgetMismatch { .. }
                | Error::InvalidDiagram(_)
                | Error::InvalidArgument(_)
                | Error::SetMismatch
                | Error::VacuousForAllDelta { .. }
                | Error::UnderResolvedGrid { .. }
                | Error::Io(_)
                | Error::Json(_)
        )
    }
}
