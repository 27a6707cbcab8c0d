use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands live in different fields: {0}")]
    FieldMismatch(String),
    #[error("value group rank mismatch: {0} vs {1}")]
    RankMismatch(u8, u8),
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("element has negative valuation")]
    NegativeValuation,
    #[error("no simple root: Newton condition fails ({0})")]
    NoSimpleRoot(String),
    #[error("zero input where a nonzero element is required")]
    ZeroInput,
    #[error("operation requires the group or residue case, found the weak case")]
    CaseViolation,
    #[error("subgroup is not proper: no non-member among {0} candidates")]
    ImproperSubgroup(usize),
    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),
    #[error("fractional ideals live on different valuation rings")]
    RingMismatch,
    #[error("cut is not an ideal of the valuation ring")]
    NotAnIdeal,
    #[error("neighbourhood is not a ball around zero")]
    UnsupportedBasis,
    #[error("invalid descriptor: {0}")]
    InvalidDescriptor(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("undecided: {0}")]
    Undecided(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn exhausted(what: impl Into<String>) -> Error {
    Error::PrecisionExhausted(what.into())
}
