use thiserror::Error;

use crate::graph::{ArcId, NodeId};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("more than {limit} simple source-sink paths")]
    PathLimitExceeded { limit: usize },
    #[error("enumeration of {required} candidates exceeds budget {budget}")]
    EnumerationBudgetExceeded { required: u128, budget: u128 },
    #[error("arc {0} has infinite capacity")]
    InfiniteCapacity(ArcId),
    #[error("not a flow: {0}")]
    NotAFlow(String),
    #[error("arc {0} does not have unit capacity")]
    NotUnitCapacity(ArcId),
    #[error("arc {0} has a capacity outside {{1, 2}}")]
    CapacityOutOfRange(ArcId),
    #[error("arc {0} has a non-integral or infinite capacity")]
    NonIntegralCapacity(ArcId),
    #[error("flow is not feasible: {0}")]
    NotFeasible(String),
    #[error("a source-sink path of infinite-capacity arcs exists")]
    UnboundedFlow,
    #[error("invalid clique size {kprime} for a graph on {vertices} vertices")]
    InvalidCliqueSize { kprime: usize, vertices: usize },
    #[error("scenario has {actual} arcs, expected {expected}")]
    SizeMismatch { expected: usize, actual: usize },
    #[error("invalid terminals: {0}")]
    InvalidTerminals(String),
    #[error("paths share arc {0}")]
    NotDisjoint(ArcId),
    #[error("node {0} is out of range")]
    NodeOutOfRange(NodeId),
    #[error("linear program is infeasible")]
    Infeasible,
    #[error("linear program is unbounded")]
    Unbounded,
}

impl Error {
    /// Budget gates are reported separately from input errors by the CLI.
    pub fn is_budget_gate(&self) -> bool {
        matches!(
            self,
            Error::PathLimitExceeded { .. } | Error::EnumerationBudgetExceeded { .. }
        )
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse { .. } => "Parse",
            Error::InvalidInstance(_) => "InvalidInstance",
            Error::PathLimitExceeded { .. } => "PathLimitExceeded",
            Error::EnumerationBudgetExceeded { .. } => "EnumerationBudgetExceeded",
            Error::InfiniteCapacity(_) => "InfiniteCapacity",
            Error::NotAFlow(_) => "NotAFlow",
            Error::NotUnitCapacity(_) => "NotUnitCapacity",
            Error::CapacityOutOfRange(_) => "CapacityOutOfRange",
            Error::NonIntegralCapacity(_) => "NonIntegralCapacity",
            Error::NotFeasible(_) => "NotFeasible",
            Error::UnboundedFlow => "UnboundedFlow",
            Error::InvalidCliqueSize { .. } => "InvalidCliqueSize",
            Error::SizeMismatch { .. } => "SizeMismatch",
            Error::InvalidTerminals(_) => "InvalidTerminals",
            Error::NotDisjoint(_) => "NotDisjoint",
            Error::NodeOutOfRange(_) => "NodeOutOfRange",
            Error::Infeasible => "Infeasible",
            Error::Unbounded => "Unbounded",
        }
    }
}
