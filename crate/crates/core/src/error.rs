use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("leading coefficient of the series has no inverse in the coefficient ring")]
    NonInvertibleLeadingCoefficient,

    #[error("graded elements live over different generator tables")]
    GeneratorTableMismatch,

    #[error("exponential needs a nilpotent argument, found a nonzero degree-0 term")]
    NonNilpotentInput,

    #[error("integration table has no entry for top-degree monomial `{0}`")]
    MissingTableEntry(String),

    #[error("component `{0}` has a normal summand with weight 0")]
    ZeroWeightNormalBundle(String),

    #[error("numeric evaluation needs Im(tau) > 0, got {0}")]
    NonconvergentDomain(f64),

    #[error("argument is within {distance:.3e} of a pole of component `{component}`")]
    NearPole { component: String, distance: f64 },

    #[error("degree {requested} is outside the base degree cap {cap}")]
    DegreeOutOfRange { requested: u32, cap: u32 },

    #[error("fixed components disagree on the anomaly: {0:?}")]
    InconsistentAnomaly(Vec<i64>),

    #[error("unknown catalog entry `{0}`")]
    UnknownEntry(String),

    #[error("a zero of the function sits on the cell boundary after 3 perturbations")]
    BoundaryZero,

    #[error("function returned a non-finite sample at t = {0}")]
    NonFiniteSample(String),

    #[error("fixed components carry spinor w-offsets of different parity: {0:?}")]
    SpinInconsistent(Vec<i64>),

    #[error("operator `{0}` needs V data but the dataset has none")]
    MissingVBundle(String),

    #[error("operator `{operator}` does not support {normalization} normalization")]
    UnsupportedNormalization {
        operator: String,
        normalization: String,
    },

    #[error("invalid dataset: {0}")]
    InvalidData(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
