use thiserror::Error;

use crate::families::Family;
use crate::series::SeriesError;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is a series-only family; its trees are not generated")]
    SeriesOnlyFamily(Family),
    #[error("domain error: {0}")]
    Domain(String),
    #[error(
        "resource budget exceeded: {reason} ({trees_done} trees, {evaluations} evaluations done)"
    )]
    BudgetExceeded {
        reason: String,
        trees_done: u64,
        evaluations: u64,
    },
    #[error("no catalog entry for family {family}, kind {kind}")]
    NotInCatalog { family: String, kind: String },
    #[error("integrity failure: {0}")]
    Integrity(String),
    #[error("tree syntax error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("no root of phi(t) = t phi'(t) found on (0, {0})")]
    NoRoot(f64),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
