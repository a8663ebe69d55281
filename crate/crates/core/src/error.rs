use thiserror::Error;

use crate::items::ItemSet;

/// Errors produced by the toolkit.
///
/// Agent and item indices carried in errors are zero-based, like the rest of
/// the library API.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("invalid allocation: {0}")]
    InvalidAllocation(String),

    #[error("sets have different sizes ({left} vs {right})")]
    SizeMismatch { left: usize, right: usize },

    #[error("table valuation over {items} items exceeds the limit of {limit}")]
    TableTooLarge { items: usize, limit: usize },

    #[error("agent {agent}: valuation is not ordered (item {item} is worth more than its predecessor)")]
    NotOrdered { agent: usize, item: usize },

    #[error("agent {agent}: {detail}")]
    SignViolation { agent: usize, detail: String },

    #[error("agent {agent}: valuation is not cancelable (S={s:?}, T={t:?}, g={g})")]
    NotCancelable {
        agent: usize,
        s: ItemSet,
        t: ItemSet,
        g: usize,
    },

    #[error(
        "agents {from} -> {to}: v_{from}(S) >= v_{from}(T) but v_{to}(S) = 0 < v_{to}(T) (S={s:?}, T={t:?})"
    )]
    CorrelationViolation {
        from: usize,
        to: usize,
        s: ItemSet,
        t: ItemSet,
    },

    #[error("operation requires a {0} instance")]
    WrongKind(&'static str),

    #[error("search budget exceeded: {0}")]
    Budget(String),

    #[error("agent {agent}: valuation is not strongly monotone")]
    NotStronglyMonotone { agent: usize },

    #[error("agent {agent}: bundle value {bundle} is below the maximin share {mms}")]
    BelowMaximinShare {
        agent: usize,
        bundle: String,
        mms: String,
    },

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
