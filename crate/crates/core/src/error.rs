use thiserror::Error;

use crate::algebra::{Generator, GradedPoly};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AlgebraError {
    #[error("cannot evaluate antifield {0} at a numeric point")]
    OddEvaluation(String),
    #[error("no value assigned to {0}")]
    Unassigned(String),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DerivationError {
    #[error("variable of generator {0} is outside the derivation's universe")]
    UnknownGenerator(Generator),
    #[error("operator component {index} is not even: {poly}")]
    OddComponent { index: usize, poly: GradedPoly },
    #[error("grade mismatch: {0}")]
    GradeMismatch(String),
    #[error("the differential being extended is not nilpotent (generator {generator}, residual {residual})")]
    NotNilpotentInput {
        generator: Generator,
        residual: GradedPoly,
    },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ResolveError {
    #[error("verification-only: operator is not linear with constant coefficients")]
    NotLinearConstantCoeff,
    #[error("grade mismatch: {0}")]
    GradeMismatch(String),
    #[error("missing lower stage: {0}")]
    MissingLowerStage(String),
    #[error("chain is not a cycle: {0}")]
    NotACycle(String),
    #[error("stage {stage} differential failed its nilpotency check: {residual}")]
    NilpotencyViolated { stage: i32, residual: GradedPoly },
    #[error(transparent)]
    Derivation(#[from] DerivationError),
}
