use thiserror::Error;

/// Errors shared across the max-plus toolkit.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum TropError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("scalar must be finite")]
    InvalidScalar,

    #[error("Kleene star diverges: graph has a positive-weight cycle")]
    PositiveCycle,

    #[error("matrix must be irreducible (strongly connected digraph)")]
    Irreducibility,

    #[error("digraph is acyclic: no cycle mean to take")]
    Acyclic,

    #[error("instance too large for exhaustive search: {what} supports up to {limit}, got {actual}")]
    SizeLimit {
        what: &'static str,
        limit: usize,
        actual: usize,
    },

    #[error("iteration horizon {horizon} exhausted: {what}")]
    Horizon { what: String, horizon: u64 },

    #[error("no closed walk of the required lengths at node {node}")]
    NoClosedWalk { node: usize },

    #[error("degenerate spectral gap: lambda(B) equals lambda(A)")]
    DegenerateGap,

    #[error("factorization does not reproduce the matrix")]
    Factorization,

    #[error("internal structure violated: {0}")]
    Structure(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("subgraph is not part of the matrix digraph: {0}")]
    InvalidSubgraph(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, TropError>;
