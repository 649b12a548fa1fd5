use thiserror::Error;

use crate::rational::{Rational, RationalError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error(transparent)]
    Rational(#[from] RationalError),

    #[error("tie enumeration produced more than {cap} LD schedules")]
    TieExplosion { cap: usize },

    /// The oracle ran out of nodes. `upper` is the best makespan found so far,
    /// `lower` a proven lower bound, so callers can tell "unknown" from "verified".
    #[error("oracle node budget of {budget} exhausted (optimum lies in [{lower}, {upper}])")]
    BudgetExceeded { budget: u64, lower: Rational, upper: Rational },

    #[error("case enumeration for m={m}, k={k} needs {needed} LPs, above the cap of {cap}")]
    CaseCapExceeded { m: usize, k: usize, needed: u128, cap: u128 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
