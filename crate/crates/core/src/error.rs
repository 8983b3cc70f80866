use thiserror::Error;

use crate::nibble::CoverSample;
use crate::transversal::Transversal;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {0} is not a vertex of the instance")]
    InvalidVertex(usize),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("{k} classes exceed the subset-enumeration limit of {limit}")]
    TooManyClasses { k: usize, limit: usize },

    #[error("search budget of {0} nodes exceeded")]
    Timeout(u64),

    #[error("no transversal with the requested properties exists")]
    NotFound,

    #[error("enumeration would exceed the cap of {0}")]
    CapExceeded(u64),

    #[error("no feasible fractional weighting: {0}")]
    Infeasible(String),

    #[error("cover set R({0}) admits no feasible fractional weighting")]
    RestrictedInfeasible(usize),

    #[error("cover sampling budget exhausted after {} attempts", .0.attempts)]
    CoverBudgetExhausted(Box<CoverSample>),

    #[error("only {found} of the required {needed} disjoint independent transversals were found")]
    Shortfall {
        found: usize,
        needed: usize,
        partial: Vec<Transversal>,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("no absorbing set found")]
    NoneFound,

    #[error("absorber sampling budget exhausted with {admitted} of {target} members")]
    AbsorberBudgetExhausted {
        admitted: usize,
        target: usize,
        family: Box<crate::absorber::AbsorbingFamily>,
    },

    #[error("no unconsumed absorber absorbs chunk {0}")]
    AbsorptionFailure(usize),

    #[error("pipeline failed: {0}")]
    PipelineFailure(String),

    #[error("no partition into independent transversals exists")]
    Unsolvable,

    #[error("budget of {0} exceeded")]
    BudgetExceeded(u64),

    #[error("infeasible instance parameters: {0}")]
    InfeasibleSpec(String),
}
