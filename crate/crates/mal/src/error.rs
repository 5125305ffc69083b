use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("incompatible algebras: {0}")]
    IncompatibleAlgebra(String),
    #[error("no Lebesgue measure on {0} elements")]
    NoMeasure(&'static str),
    #[error("element is not a member of the algebra")]
    NotInAlgebra,
    #[error("enumeration budget exceeded: {requested} cases requested, cap is {cap}")]
    BudgetExceeded { requested: u128, cap: u64 },
    #[error("unknown generator index {0}")]
    UnknownIndex(u32),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("unknown example {0:?}")]
    UnknownExample(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("family defect: {0}")]
    FamilyDefect(String),
    #[error("index sets differ")]
    IndexSetMismatch,
    #[error("units are not disjoint")]
    NonDisjointUnits,
    #[error("unit mismatch")]
    UnitMismatch,
    #[error("family has {available} generators, {requested} requested")]
    InsufficientGenerators { requested: usize, available: usize },
    #[error("not a lower bound: {0}")]
    NotLowerBound(String),
    #[error("negative input")]
    NegativeInput,
    #[error("fragment is not measurable up to depth {0}")]
    NotMeasurable(usize),
    #[error("tail bound increases at index {0}")]
    TailBoundIncreasing(usize),
    #[error("tail bound does not reach the tolerance within {0} terms")]
    TailTooSlow(usize),
    #[error("conditions failed: {0}")]
    ConditionsFailed(String),
}
