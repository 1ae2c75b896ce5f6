use thiserror::Error;

/// A point that, permuted by swapping two positions, leaves a function set.
///
/// `member` indexes the set in canonical order; swapping the values at
/// `swap.0` and `swap.1` produces a table that is not in the set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CupWitness {
    pub member: usize,
    pub swap: (usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid search space: {0}")]
    InvalidSpace(String),
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("budget {budget} exceeds search space size {size}")]
    BudgetExceeded { budget: usize, size: usize },
    #[error("budget must be at least 1")]
    ZeroBudget,
    #[error("observed value {value} is outside the policy codomain")]
    CodomainMismatch { value: String },
    #[error("policy tree ends after {depth} steps")]
    PolicyExhausted { depth: usize },
    #[error("invalid policy: {0}")]
    InvalidPolicy(String),
    #[error("empty trace")]
    EmptyTrace,
    #[error("refusing to enumerate {count} {what} (cap {cap})")]
    EnumerationTooLarge {
        what: &'static str,
        count: String,
        cap: u64,
    },
    #[error("empty function set")]
    EmptySet,
    #[error("function set is not closed under permutation: member {} with positions {} and {} swapped is missing", .0.member, .0.swap.0, .0.swap.1)]
    NotCup(CupWitness),
    #[error("function set is closed under permutation")]
    IsCup,
    #[error("distribution weights sum to {total}, not 1")]
    Unnormalized { total: String },
    #[error("negative weight {0}")]
    NegativeWeight(String),
    #[error("search space has no neighborhood")]
    MissingNeighborhood,
    #[error("point {0} has no neighbors")]
    IsolatedPoint(usize),
    #[error("search space has no distance")]
    MissingDistance,
    #[error("search space has no positional bitstring encoding")]
    NonPositional,
    #[error("global {0} is not unique")]
    TiedExtremum(&'static str),
    #[error("zero variance in {0}")]
    ZeroVariance(&'static str),
    #[error("penalty term is constant")]
    ConstantPenalty,
    #[error("crossover of {x} and {y} produced {offspring}, outside the space")]
    CrossoverOutOfRange { x: usize, y: usize, offspring: usize },
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("invalid tour: {0}")]
    InvalidTour(String),
    #[error("invalid table: {0}")]
    InvalidTable(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("empty seed set")]
    EmptySeedSet,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
