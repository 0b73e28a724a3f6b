use alloc::string::String;

use crate::variable::Variable;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("derivations act only on moment variables, found {0}")]
    NotAMomentVariable(Variable),
    #[error("variable {0} has no assigned value")]
    UnassignedVariable(Variable),
    #[error("realization does not cover template variable {0}")]
    UncoveredTemplateVariable(Variable),
    #[error("not a lowest weight vector of order {0}")]
    NotLowestWeight(u32),
    #[error("not proportional to a real polynomial")]
    NotRealProportional,
    #[error("no degree-one invariant exists for odd order {0}")]
    OddOrder(u32),
    #[error("order {0} is out of the supported range")]
    OrderOutOfRange(u32),
    #[error("invalid order set: {0}")]
    InvalidOrderSet(String),
    #[error("internal consistency failure: {0}")]
    InternalConsistency(String),
    #[error("invalid template: {0}")]
    InvalidTemplate(String),
    #[error("symbolic generation supported for orders 2 and 3")]
    UnsupportedGenerationOrder(u32),
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("unknown template `{0}`")]
    UnknownTemplate(String),
    #[error("empty data set")]
    EmptyData,
    #[error("maximum moment order must be at least 2, got {0}")]
    MaxOrderTooSmall(u32),
    #[error("non-positive total mass")]
    NonPositiveMass,
    #[error("expected a {expected} moment tensor, got {found}")]
    WrongTensorKind { expected: &'static str, found: &'static str },
    #[error("invariant needs moments up to order {needed}, tensor has {available}")]
    InsufficientOrder { needed: u32, available: u32 },
    #[error("invariant value has imaginary part {0}")]
    NonRealValue(f64),
    #[error("invalid voxel grid: {0}")]
    InvalidGrid(String),
    #[error("scale factor must be positive, got {0}")]
    NonPositiveScale(f64),
    #[error("matrix is not a rotation: {0}")]
    NotARotation(String),
}
