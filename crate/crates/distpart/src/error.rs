//! Error types shared across the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by hypergraph construction, bijections, enumeration,
/// and the extremal builders.
#[derive(Debug, Error)]
pub enum Error {
    /// An id was inserted twice into the same hypergraph.
    #[error("duplicate id {0}")]
    DuplicateId(u32),
    /// An edge referenced a vertex id that was never added.
    #[error("unknown vertex id {0}")]
    UnknownVertex(u32),
    /// A label element fell outside {1..m2}.
    #[error("label element {element} outside 1..={m2}")]
    LabelOutOfRange { element: u32, m2: u32 },
    /// Edge sizes differ where a uniform hypergraph was required.
    #[error("edge sizes are not uniform: found {0} and {1}")]
    NonUniform(usize, usize),
    /// A tree was required.
    #[error("hypergraph is not a tree")]
    NotATree,
    /// A regular partition was required.
    #[error("partition is not regular: {0}")]
    NotRegular(String),
    /// Input exceeds the configured exhaustive-search bound.
    #[error("input too large for exhaustive computation: {0}")]
    TooLarge(String),
    /// A vertex without a label appeared where a labeled form was required.
    #[error("vertex {0} has no label")]
    UnlabeledVertex(u32),
    /// More distinct labels were requested than exist over {1..m2}.
    #[error("requested {requested} distinct labels but only {available} exist")]
    TooManyDistinctLabels { requested: u64, available: u64 },
    /// The search node budget was exhausted.
    #[error("search node budget of {0} exhausted")]
    BudgetExceeded(u64),
    /// Too few data points for a growth fit.
    #[error("need at least {needed} counts, got {got}")]
    InsufficientData { needed: usize, got: usize },
    /// An odd parameter was required.
    #[error("parameter {0} must be odd")]
    EvenParameter(u64),
    /// The requested formula or builder does not apply to these parameters.
    #[error("not applicable: {0}")]
    NotApplicableCase(String),
    /// A ring or chain was requested with fewer edges than the family minimum.
    #[error("need at least {minimum} edges, got {got}")]
    TooFewEdges { minimum: u64, got: u64 },
    /// m1 is too small to fit the construction.
    #[error("m1 = {got} is too small: need at least {minimum}")]
    TooSmallM1 { minimum: u64, got: u64 },
    /// The tree catalogue ran out before the edge budget was filled.
    #[error("catalogue exhausted at max_edges = {0} before filling the edge budget")]
    CatalogueExhausted(u64),
    /// A supplied chain-length partition was invalid.
    #[error("bad partition: {0}")]
    BadPartition(String),
    /// No tail exists in the hypergraph.
    #[error("hypergraph has no tail")]
    NoTail,
    /// st - psi must be even for a near-regular asymmetric graph.
    #[error("parity violation: s*t - psi = {0} is odd")]
    ParityViolation(i64),
    /// Randomized generation failed to certify within the retry budget.
    #[error("retries exhausted after {0} attempts")]
    RetriesExhausted(u64),
    /// The builder was called outside its parameter case.
    #[error("wrong case: {0}")]
    WrongCase(String),
    /// A certified postcondition failed on a constructed object.
    #[error("certification failed: {0}")]
    CertificationFailed(String),
    /// The input was required to be asymmetric.
    #[error("input hypergraph is symmetric (group order {0})")]
    SymmetricInput(String),
    /// A precondition on plain numeric arguments was violated.
    #[error("domain error: {0}")]
    Domain(String),
    /// Text-format parsing failed.
    #[error("parse error: {0}")]
    Parse(String),
    /// Filesystem failure while reading or writing fixtures.
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code for the CLI: budget exhaustion is distinguished
    /// from ordinary domain failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::BudgetExceeded(_) => 2,
            _ => 1,
        }
    }
}
