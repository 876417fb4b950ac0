use thiserror::Error;

/// Errors raised by the library. Variants carry enough context to be shown
/// to a CLI user directly.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QgrError {
    #[error("division by zero in Q(q)")]
    DivisionByZero,
    #[error("pole at q = {0}")]
    Pole(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("root ({0},{1}) does not bracket r = {2}")]
    NotInPhiR(usize, usize, usize),
    #[error("generator {0} is not in the subalgebra K")]
    NotInK(String),
    #[error("rewrite budget exhausted after {steps} steps; last word {trace}")]
    RewriteBudget { steps: usize, trace: String },
    #[error("knondeg violation: pairing block of weight {0} has deficient rank")]
    RankDeficient(String),
    #[error("unsupported (N, r) = ({0}, {1}): {2}")]
    Unsupported(usize, usize, String),
    #[error("truncation audit refused: {0}")]
    AuditRefused(String),
    #[error("continuous family of candidate spaces: {0}")]
    InfiniteFamily(String),
    #[error("inconsistent data: {0}")]
    Inconsistent(String),
    #[error("cache error: {0}")]
    Cache(String),
}
