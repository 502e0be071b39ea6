//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A precondition on an argument was violated. The message names the
    /// violated precondition.
    #[error("domain error: {0}")]
    Domain(String),

    /// Rejection sampling exhausted its attempt budget.
    #[error("sampling budget exhausted after {attempts} attempts: {context}")]
    SamplingBudget { attempts: u64, context: String },

    /// An input exceeded a size guard meant to prevent quadratic blowup.
    #[error("size guard exceeded: {0}")]
    SizeGuard(String),

    /// A random walk exceeded its hard step cap.
    #[error("walk budget exceeded: {0} steps")]
    WalkBudget(u64),

    /// The interior of a Dirichlet problem has a component with no boundary
    /// contact, so the linear system is singular.
    #[error("structural error: {0}")]
    Structural(String),

    /// Not enough data to fit the requested statistic.
    #[error("statistics error: {0}")]
    Statistics(String),

    /// An internal invariant that should be unreachable was violated.
    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("malformed file: {0}")]
    Format(String),
}
