use thiserror::Error;

/// Errors raised by series arithmetic, map construction and verification.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("q = {0} is outside [1e-6, 1 - 1e-6]")]
    InvalidQ(f64),

    #[error("series coefficient {index} is not finite")]
    NonFiniteCoefficient { index: usize },

    #[error("malformed series: {0}")]
    MalformedSeries(String),

    #[error("denominator series has constant term {0:e}, below tolerance")]
    ZeroConstantTerm(f64),

    #[error("shear denominator 1 {sign} omega vanishes at the origin")]
    ShearSingularity { sign: char },

    #[error("map is not normalized: {0}")]
    NotNormalized(String),

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),

    #[error("invalid combination weights: {0}")]
    WeightError(String),

    #[error("maps disagree on {0}")]
    MixedParamError(String),

    #[error("denominator vanishes at z = {re} + {im}i")]
    DenominatorZero { re: f64, im: f64 },

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("boundary curve degenerate: image points {0} and {1} coincide")]
    DegenerateCurve(usize, usize),

    #[error("horizontal level y = {0} stays tangent to the boundary after perturbation")]
    TangencyUnresolved(f64),

    #[error("invalid sample grid: {0}")]
    InvalidGrid(String),
}

impl Error {
    /// Short machine-readable tag, used in CLI error documents.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidQ(_) => "InvalidQ",
            Error::NonFiniteCoefficient { .. } => "NonFiniteCoefficient",
            Error::MalformedSeries(_) => "MalformedSeries",
            Error::ZeroConstantTerm(_) => "ZeroConstantTerm",
            Error::ShearSingularity { .. } => "ShearSingularity",
            Error::NotNormalized(_) => "NotNormalized",
            Error::UnknownPreset(_) => "UnknownPreset",
            Error::WeightError(_) => "WeightError",
            Error::MixedParamError(_) => "MixedParamError",
            Error::DenominatorZero { .. } => "DenominatorZero",
            Error::HypothesisViolated(_) => "HypothesisViolated",
            Error::DegenerateCurve(..) => "DegenerateCurve",
            Error::TangencyUnresolved(_) => "TangencyUnresolved",
            Error::InvalidGrid(_) => "InvalidGrid",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
