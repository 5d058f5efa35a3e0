use thiserror::Error;

use crate::set::ElementId;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatroidError {
    #[error("element {id} is outside the ground set 0..{n}")]
    ElementOutOfRange { id: ElementId, n: usize },
    #[error("ground set of size {n} exceeds the exhaustive-check budget of {max}")]
    BudgetExceeded { n: usize, max: usize },
    #[error("invalid matroid: {0}")]
    InvalidMatroid(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolverError {
    #[error(transparent)]
    Matroid(#[from] MatroidError),
    #[error("matroids have different ground sets ({0} vs {1})")]
    GroundSizeMismatch(usize, usize),
    #[error("epsilon must lie in (0, 1], got {0}")]
    InvalidEpsilon(f64),
    #[error("contract violated: {0}")]
    Contract(String),
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
}
