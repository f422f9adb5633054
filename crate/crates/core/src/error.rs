use thiserror::Error;

use crate::minkowski::{Dim, Point, Spacetime};
use crate::wavekit::SupportClass;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// One of the three hypotheses of the surface-deformation construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeformCondition {
    /// `x_n ∈ B_n`
    PointInPatch,
    /// `J(B_n) ∩ Σ ⊂ interior(K_n)`
    ShadowInsideOwnSet,
    /// `J(B_{n+1}) ∩ K_n = ∅`
    ShadowAvoidsPreviousSet,
}

impl DeformCondition {
    pub fn roman(self) -> &'static str {
        match self {
            DeformCondition::PointInPatch => "(i)",
            DeformCondition::ShadowInsideOwnSet => "(ii)",
            DeformCondition::ShadowAvoidsPreviousSet => "(iii)",
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected:?}, found {found:?}")]
    DimensionMismatch { expected: Dim, found: Dim },
    #[error("spatial dimension {0} is not supported (use 1 or 2)")]
    UnsupportedDimension(usize),
    #[error("non-finite coordinate in {0}")]
    NonFinite(&'static str),
    #[error("point {point} lies outside {spacetime}")]
    OutsideSpacetime { point: Point, spacetime: Spacetime },
    #[error("a compact cloud needs at least one point")]
    EmptyCloud,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("insufficient samples: need at least {needed}, got {got}")]
    InsufficientSamples { needed: usize, got: usize },
    #[error("operation requires {required}, got {found}")]
    UnsupportedAmbient { required: &'static str, found: Spacetime },
    #[error("surface is not {kind}: sampled Lipschitz estimate {estimate}")]
    NotCausalGraph { kind: &'static str, estimate: f64 },
    #[error("surface leaves the ambient spacetime at x = {x:?}")]
    SurfaceOutsideAmbient { x: Vec<f64> },
    #[error("exhaustion is not strictly nested at index {index}")]
    ExhaustionNotNested { index: usize },
    #[error("hypothesis {} violated for point {index}: {detail}", .condition.roman())]
    HypothesisViolation { condition: DeformCondition, index: usize, detail: String },
    #[error("point {index} needs slope {required} which exceeds the cap {cap}")]
    SlopeInfeasible { index: usize, required: f64, cap: f64 },
    #[error("CFL violated: lambda = {lambda} > 1")]
    Cfl { lambda: f64 },
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("margin violation: {0}")]
    MarginViolation(String),
    #[error("support of a field does not fit class {class}: {detail}")]
    ClassMismatch { class: SupportClass, detail: String },
    #[error("source class {0} has no retarded/advanced image")]
    UnsupportedSourceClass(SupportClass),
    #[error("cannot pair {phi} with {f}: {row}")]
    IncompatibleSupport { phi: SupportClass, f: SupportClass, row: String },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
