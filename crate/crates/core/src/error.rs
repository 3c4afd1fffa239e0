use thiserror::Error;

use crate::embeddings::Counterexample;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid field GF({p}^{e}): {reason}")]
    InvalidField { p: u32, e: u32, reason: String },

    #[error("resource cap exceeded: {0}")]
    CapExceeded(String),

    #[error("field mismatch: GF({0}) vs GF({1})")]
    FieldMismatch(u32, u32),

    #[error("ambient dimension mismatch: {0} vs {1}")]
    AmbientMismatch(usize, usize),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is singular")]
    Singular,

    #[error("entry {value} is not an element of GF({q})")]
    InvalidEntry { value: u64, q: u32 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("set is not pairwise adjacent: elements {0} and {1}")]
    NotPairwiseAdjacent(usize, usize),

    #[error("point set is not {m}-independent; dependent subset {witness:?}")]
    NotIndependent { m: usize, witness: Vec<usize> },

    #[error("embedding is not isometric: {0}")]
    NotIsometric(Counterexample),

    #[error("structural violation: {0}")]
    Structure(String),

    #[error("schema error at `{field}`: {reason}")]
    Schema { field: String, reason: String },

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub(crate) fn schema(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Schema {
            field: field.into(),
            reason: reason.into(),
        }
    }

    pub(crate) fn pre(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}
