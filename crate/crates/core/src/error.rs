use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("Q must be non-zero")]
    QZero,
    #[error("P must be positive")]
    NonPositiveP,
    #[error("parameter constraint violated: {0}")]
    ConstraintViolated(String),

    #[error("{divisor} does not divide the modulus {modulus}")]
    DivisibilityError { divisor: u64, modulus: u64 },
    #[error("characters in a tuple must share one modulus")]
    MixedModuli,
    #[error("character {0} is not real-valued")]
    NonQuadraticCharacter(String),
    #[error("the principal character has no real-axis holomorphy certificate")]
    PrincipalCharacter,
    #[error("additive character value must be non-zero")]
    ZeroCharacterValue,
    #[error("additive character value {0} is not rational")]
    NonRationalCharacter(String),
    #[error("partial product |g_{index}| exceeds 1")]
    PartialProductBound { index: usize },

    #[error("point lies outside the convergence domain (margin {margin})")]
    OutOfDomain { margin: f64 },
    #[error("requested accuracy not reached within {cap} terms")]
    AccuracyUnreachable { cap: usize },
    #[error("point within {distance:e} of the pole s_d({j}) = {location}")]
    PoleProximity {
        j: usize,
        location: String,
        distance: f64,
    },
    #[error("prefactor of depth {depth} is singular at the given partial point")]
    InnerPole { depth: usize },
    #[error("another pole lies within the contour radius")]
    NonIsolatedPole,
    #[error("contour integral did not stabilise")]
    NoConvergence,

    #[error("exact denominator vanishes at the negative integer point")]
    SingularPoint,
    #[error("value has non-zero surd part {0}")]
    NotRational(String),
    #[error("discriminant D is a perfect square")]
    SquareDiscriminant,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable kebab-case name used in machine-readable diagnostics.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::QZero => "q-zero",
            Error::NonPositiveP => "non-positive-p",
            Error::ConstraintViolated(_) => "constraint-violated",
            Error::DivisibilityError { .. } => "divisibility-error",
            Error::MixedModuli => "mixed-moduli",
            Error::NonQuadraticCharacter(_) => "non-quadratic-character",
            Error::PrincipalCharacter => "principal-character",
            Error::ZeroCharacterValue => "zero-character-value",
            Error::NonRationalCharacter(_) => "non-rational-character",
            Error::PartialProductBound { .. } => "partial-product-bound",
            Error::OutOfDomain { .. } => "out-of-domain",
            Error::AccuracyUnreachable { .. } => "accuracy-unreachable",
            Error::PoleProximity { .. } => "pole-proximity",
            Error::InnerPole { .. } => "inner-pole",
            Error::NonIsolatedPole => "non-isolated-pole",
            Error::NoConvergence => "no-convergence",
            Error::SingularPoint => "singular-point",
            Error::NotRational(_) => "not-rational",
            Error::SquareDiscriminant => "square-discriminant",
            Error::DimensionMismatch(_) => "dimension-mismatch",
            Error::InvalidArgument(_) => "invalid-argument",
            Error::Parse(_) => "parse",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
