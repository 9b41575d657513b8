use thiserror::Error;

use crate::dsl::ParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A child index is out of range for the branching at some ancestor.
    #[error(
        "invalid vertex {vertex}: index {index} at depth {depth} exceeds branching {branching}"
    )]
    Address {
        vertex: String,
        depth: usize,
        index: u64,
        branching: usize,
    },

    #[error("the root has no parent")]
    NoParent,

    #[error("vertex budget exceeded: {needed} > {limit}")]
    Budget { limit: usize, needed: usize },

    #[error("weight at {vertex} is {value}, expected a finite positive value")]
    NonPositiveWeight { vertex: String, value: f64 },

    #[error("branching at {vertex} is {value}, expected a positive integer")]
    InvalidBranching { vertex: String, value: String },

    #[error("evaluation error at {vertex}: {message}")]
    Eval { vertex: String, message: String },

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("vertex {0} is outside the finite instance")]
    OutsideInstance(String),

    #[error("invalid configuration: {0}")]
    Config(String),
}

impl Error {
    /// Budget errors are reported separately from specification errors.
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::Budget { .. })
    }
}
