use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("the zero polynomial has no sign threshold")]
    ZeroPolynomial,
    #[error("malformed rational literal `{0}`")]
    MalformedRational(String),
    #[error("malformed set: {0}")]
    MalformedSet(String),
    #[error("set is finite and was exhausted after {0} elements")]
    ExhaustedFinite(usize),
    #[error("oracle undecided: {0}")]
    OracleUndecided(String),
    #[error("unsupported expression: {0}")]
    UnsupportedExpression(String),
    #[error("committed set belongs to another session")]
    ForeignHandle,
    #[error("not a partition: {0}")]
    NotAPartition(String),
    #[error("partition class {0} is decided big")]
    ClassDecidedBig(u64),
    #[error("family member A_{0} is decided small")]
    FamilyMemberSmall(u64),
    #[error("unsupported coloring: {0}")]
    UnsupportedColoring(String),
    #[error("map is not injective: {0}")]
    NotInjective(String),
    #[error("domain is decided small")]
    DomainSmall,
    #[error("cannot restrict to a small set")]
    RestrictToSmall,
    #[error("corrupt journal at line {line}: {message}")]
    CorruptJournal { line: usize, message: String },
    #[error("seed mismatch: journal has {journal}, session has {session}")]
    SeedMismatch { journal: String, session: String },
    #[error("division by a hyperrational zero")]
    DivisionByZeroHyperrational,
    #[error("operands belong to different sessions")]
    SessionMismatch,
    #[error("argument is infinitely large")]
    InfiniteArgument,
    #[error("witnesses describe different numbers")]
    WitnessMismatch,
    #[error("internal invariant violated: {0}")]
    Internal(String),
}
