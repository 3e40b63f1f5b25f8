use thiserror::Error;

use crate::exact::Rat;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("not linearly independent: {0:?}")]
    NotIndependent(Vec<Vec<i64>>),

    #[error("tropical variety empty: a monomial has no tropical zeros")]
    EmptyTropicalVariety,

    #[error("section undefined at γ = {0}")]
    SectionUndefined(Rat),

    #[error("division by zero series")]
    DivisionByZero,

    #[error("truncation exhausted: {0}")]
    TruncationExhausted(String),

    #[error("need at least two terms, got {0}")]
    TooFewTerms(usize),

    #[error("not tropically simple at face {face}: dependent support {dependent:?}")]
    NotSimple {
        face: String,
        dependent: Vec<Vec<i64>>,
    },

    #[error("monomial map is not surjective (character matrix has rank {rank} < {rows} rows)")]
    NotSurjective { rank: usize, rows: usize },

    #[error("validation failed at face {face}: {property}")]
    Validation { face: String, property: String },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
