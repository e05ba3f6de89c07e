use thiserror::Error;

pub type Result<T> = std::result::Result<T, CapacityError>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CapacityError {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("label count {labels} does not match point count {points}")]
    LabelCountMismatch { labels: usize, points: usize },

    #[error("point set must not be empty")]
    EmptyPointSet,

    #[error("duplicate point at index {index}")]
    DuplicatePoint { index: usize },

    #[error("{what} must be a subset of the Boolean cube")]
    NonBoolean { what: &'static str },

    #[error("{what} = {actual} exceeds the cap of {limit}")]
    CapExceeded {
        what: &'static str,
        limit: usize,
        actual: usize,
    },

    #[error("budget `{name}` exceeded: limit {limit}, needed at least {needed}")]
    BudgetExceeded {
        name: &'static str,
        limit: usize,
        needed: usize,
    },

    #[error("invalid architecture: {0}")]
    InvalidArchitecture(String),

    #[error("hypotheses violated: {0}")]
    Hypotheses(String),

    #[error("rank check failed: {0}")]
    RankCheck(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("bound unavailable: {0}")]
    Unavailable(String),
}
