//! Error type shared by every module in the crate.

/// Unified error enum; each variant corresponds to one rejection class in
/// the public API contracts.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A parameter violated a documented precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Two geometric objects live on tori of different dimension.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// The long-range spacing is too small for the tiling: no tile other
    /// than `c` itself has far-edge gap below `s / 2`.
    #[error("no partner tile: spacing s = {s} must exceed twice the tile side {side}")]
    NoPartner { s: f64, side: f64 },

    /// An operation that needs a unique stationary distribution was handed
    /// a disconnected graph.
    #[error("graph is not connected")]
    NotConnected,

    /// The random walk is undefined on a vertex with no neighbors.
    #[error("vertex {0} is isolated; the walk is undefined")]
    DegenerateVertex(usize),

    /// The iterative eigensolver ran out of its matrix-apply budget.
    #[error("eigensolver did not converge: residual {residual:e} after {applies} applies")]
    ConvergenceFailure { residual: f64, applies: usize },

    /// The mixing-time loop hit its iteration budget before reaching the
    /// target total-variation distance.
    #[error("mixing budget of {budget} steps exhausted; last distance {last_distance}")]
    BudgetExhausted { budget: usize, last_distance: f64 },

    /// An exhaustive computation was asked for on an instance above its
    /// hard size limit.
    #[error("instance too large: n = {n} exceeds limit {max}")]
    SizeLimit { n: usize, max: usize },

    /// A parameter search exhausted its range without finding a feasible
    /// value.
    #[error("search failed: {0}")]
    SearchFailure(String),

    /// A text artifact (point set, graph, schedule, config, CSV) failed to
    /// parse.
    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Shorthand used throughout the crate for precondition failures.
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
