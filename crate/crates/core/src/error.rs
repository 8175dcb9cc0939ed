use std::fmt;

use serde::Serialize;

/// Why a slope fails the admissibility hypotheses of the surgery formulas.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum AdmissibilityReason {
    BoundarySlope,
    IrregularSlope,
    AlexanderRoot,
}

impl fmt::Display for AdmissibilityReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            AdmissibilityReason::BoundarySlope => "BoundarySlope",
            AdmissibilityReason::IrregularSlope => "IrregularSlope",
            AdmissibilityReason::AlexanderRoot => "AlexanderRoot",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("coefficient tags differ")]
    CoefficientMismatch,
    #[error("invalid torsion order {0} (must be a prime power >= 2 over Z)")]
    InvalidTorsion(u64),
    #[error("surgery coefficient p must be nonzero")]
    ZeroSurgeryCoefficient,
    #[error("solution set is positive dimensional")]
    PositiveDimensional,
    #[error("{p}/{q} is not a reduced slope")]
    NotCoprime { p: i64, q: i64 },
    #[error("invalid slope: {0}")]
    InvalidSlope(String),
    #[error("slope is not admissible: {0}")]
    NonAdmissible(AdmissibilityReason),
    #[error("formula produced a non-integral or negative value: {0}")]
    NonIntegerResult(String),
    #[error("knot {0} is not recorded as small")]
    NotSmallKnot(String),
    #[error("knot {0} has no two-bridge parameters")]
    NotTwoBridge(String),
    #[error("summand {0} has no monomial longitude rule")]
    UnsupportedSummand(String),
    #[error("no limit formula in degree {0}")]
    UnsupportedDegree(i64),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
    #[error("knot data error in field `{field}`: {message}")]
    Data { field: String, message: String },
}

impl Error {
    pub(crate) fn data(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Data {
            field: field.into(),
            message: message.into(),
        }
    }

    /// Short machine-readable tag for the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::CoefficientMismatch => "CoefficientMismatch",
            Error::InvalidTorsion(_) => "InvalidTorsion",
            Error::ZeroSurgeryCoefficient => "ZeroSurgeryCoefficient",
            Error::PositiveDimensional => "PositiveDimensional",
            Error::NotCoprime { .. } => "NotCoprime",
            Error::InvalidSlope(_) => "InvalidSlope",
            Error::NonAdmissible(_) => "NonAdmissible",
            Error::NonIntegerResult(_) => "NonIntegerResult",
            Error::NotSmallKnot(_) => "NotSmallKnot",
            Error::NotTwoBridge(_) => "NotTwoBridge",
            Error::UnsupportedSummand(_) => "UnsupportedSummand",
            Error::UnsupportedDegree(_) => "UnsupportedDegree",
            Error::Inconsistent(_) => "Inconsistent",
            Error::Data { .. } => "Data",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
