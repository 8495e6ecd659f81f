use thiserror::Error;

use crate::lattice::ContractionKind;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("weight w must be positive, got {0}")]
    NonPositiveWeight(String),
    #[error("operation requires {expected}, but the model is {got}")]
    ModelMismatch {
        expected: &'static str,
        got: ContractionKind,
    },
    #[error("basis mismatch: {0}")]
    BasisMismatch(String),
    #[error("twist parameter b must be 0 on a surface model, got {0}")]
    SurfaceTwist(String),
    #[error("canonical data (K_Y.w, chi(O_X)) required: {0}")]
    MissingCanonicalData(String),
    #[error("charge is zero")]
    ZeroCharge,
    #[error("ch0 must be {0}")]
    RankPrecondition(&'static str),
    #[error("ch1.(f*w)^2 must be nonnegative, got {0}")]
    NegativeTiltDenominator(String),
    #[error("both family charges vanish identically")]
    DegenerateFamilyCharge,
    #[error("b = {b} is outside the valid range: {simple} has twisted top degree {value} <= 0")]
    OutsideBRange {
        b: String,
        simple: String,
        value: String,
    },
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
