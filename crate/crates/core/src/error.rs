use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("edge probability {0} must lie strictly between 0 and 1")]
    InvalidProbability(f64),

    #[error("n = {n} gives log_b(n) = {log_b_n:.6} <= 1, so log_b(log_b(n)) is undefined")]
    DegenerateScale { n: u64, log_b_n: f64 },

    #[error("no {k}-equipartition of {n} vertices (need 1 <= k <= n)")]
    InvalidShape { n: usize, k: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("{what}: requested {requested} exceeds the desk-scale limit {limit}")]
    ScaleGuard {
        what: &'static str,
        requested: u128,
        limit: u128,
    },

    #[error("{solver} refuses graphs with n = {n} (limit {limit})")]
    SolverLimit {
        solver: &'static str,
        n: usize,
        limit: usize,
    },

    #[error("search budget exhausted; chromatic number lies in [{lower}, {upper}]")]
    SearchBudget { lower: usize, upper: usize },

    #[error("partitions do not share a shape: {0}")]
    ShapeMismatch(String),

    #[error("lower-bound pipeline not applicable: {0}")]
    NotApplicable(String),

    #[error("no first-moment crossing for n = {0}")]
    NoCrossing(u64),

    #[error("edge list line {line}: {message}")]
    Parse { line: usize, message: String },
}
