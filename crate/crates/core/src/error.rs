use thiserror::Error;

/// Every failure the engine can report.
///
/// Each variant belongs to exactly one module (see [`Error::module`]); the
/// ones that arise while walking a q-series carry the curve class at which
/// the failure happened so callers can report it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid ambient space: {0}")]
    InvalidAmbient(String),
    #[error("operands live on different ambient spaces")]
    AmbientMismatch,
    #[error("exponent {exp:?} out of range for ambient {factors:?}")]
    ExponentOutOfRange { exp: Vec<u32>, factors: Vec<u32> },
    #[error("leading hbar coefficient has zero scalar part")]
    NonInvertible,
    #[error("truncation mismatch: {left} vs {right}")]
    TruncationMismatch { left: u32, right: u32 },
    #[error("series has a nonzero constant term")]
    NonzeroConstantTerm,
    #[error("series constant term must be one")]
    ConstantTermNotOne,
    #[error("multidegree {l:?} is neither convex nor concave")]
    Unclassifiable { l: Vec<i64> },
    #[error("unsupported geometry: {0}")]
    Unsupported(String),
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("structure violation at beta {beta:?}, hbar^{hbar_power}: {residual}")]
    StructureViolation {
        beta: Vec<u32>,
        hbar_power: i32,
        residual: String,
    },
    #[error("series is not normalized at beta {beta:?}")]
    NotNormalized { beta: Vec<u32> },
    #[error("no solution at beta {beta:?}: residual {residual}")]
    Infeasible { beta: Vec<u32>, residual: String },
    #[error("multiple-cover formula not applicable: {0}")]
    DimensionPrecondition(String),
    #[error("degree {d} is outside the localization oracle's scope (d <= 2)")]
    DegreeOutOfScope { d: u32 },
    #[error("torus weights {weights:?} make a fixed-locus denominator vanish")]
    WeightCollision { weights: Vec<i64> },
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Name of the module that raised the error.
    pub fn module(&self) -> &'static str {
        use Error::*;
        match self {
            InvalidAmbient(_) | AmbientMismatch | ExponentOutOfRange { .. } => "cohom",
            NonInvertible | TruncationMismatch { .. } | NonzeroConstantTerm | ConstantTermNotOne => {
                "series"
            }
            Unclassifiable { .. } | Unsupported(_) | InvalidGeometry(_) => "twist",
            StructureViolation { .. } => "mirror",
            HypothesisViolated(_)
            | NotNormalized { .. }
            | Infeasible { .. }
            | DimensionPrecondition(_) => "invariants",
            DegreeOutOfScope { .. } | WeightCollision { .. } => "oracle",
            Parse(_) => "serial",
        }
    }

    /// Short machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        use Error::*;
        match self {
            InvalidAmbient(_) => "InvalidAmbient",
            AmbientMismatch => "AmbientMismatch",
            ExponentOutOfRange { .. } => "ExponentOutOfRange",
            NonInvertible => "NonInvertible",
            TruncationMismatch { .. } => "TruncationMismatch",
            NonzeroConstantTerm => "NonzeroConstantTerm",
            ConstantTermNotOne => "ConstantTermNotOne",
            Unclassifiable { .. } => "Unclassifiable",
            Unsupported(_) => "Unsupported",
            InvalidGeometry(_) => "InvalidGeometry",
            HypothesisViolated(_) => "HypothesisViolated",
            StructureViolation { .. } => "StructureViolation",
            NotNormalized { .. } => "NotNormalized",
            Infeasible { .. } => "Infeasible",
            DimensionPrecondition(_) => "DimensionPrecondition",
            DegreeOutOfScope { .. } => "DegreeOutOfScope",
            WeightCollision { .. } => "WeightCollision",
            Parse(_) => "Parse",
        }
    }

    /// Curve class at which the failure occurred, when there is one.
    pub fn beta(&self) -> Option<&[u32]> {
        match self {
            Error::StructureViolation { beta, .. }
            | Error::NotNormalized { beta }
            | Error::Infeasible { beta, .. } => Some(beta),
            _ => None,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
