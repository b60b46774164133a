use thiserror::Error;

/// Errors raised by the numerical core.
///
/// Numeric payloads are stored as `f64` regardless of the working scalar so
/// the type stays non-generic.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("point {re}{im:+}i lies outside the closed unit disk")]
    OutsideDisk { re: f64, im: f64 },

    #[error("pole {index} at b = {re}{im:+}i has |b| = {modulus}, but poles must satisfy |b| < 1")]
    PoleOutsideDisk { index: usize, re: f64, im: f64, modulus: f64 },

    #[error("pole {index} has multiplicity {multiplicity}; supported range is 1..=4")]
    Multiplicity { index: usize, multiplicity: u32 },

    #[error("zero {index} has |a| = {modulus}, but Blaschke zeros must satisfy |a| < 1")]
    ZeroOutsideDisk { index: usize, modulus: f64 },

    #[error("phase has modulus {modulus}, expected 1")]
    PhaseNotUnimodular { modulus: f64 },

    #[error("Möbius parameter has |alpha| = {modulus}, expected < 1")]
    AlphaOutsideDisk { modulus: f64 },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("grid of {grid} points is not a power of two >= 2")]
    GridNotPowerOfTwo { grid: usize },

    #[error("grid of {grid} points cannot resolve order {order} (need grid >= 2 * order)")]
    GridTooCoarse { grid: usize, order: usize },

    #[error("projection discarded {residual:e} of anti-analytic energy (threshold {threshold:e})")]
    ProjectionResidual { residual: f64, threshold: f64 },

    #[error("dimension mismatch: {0}")]
    Shape(String),

    #[error("basis is not orthonormal (Gram residual {residual:e})")]
    NotOrthonormal { residual: f64 },

    #[error("order {order} too small: basis tail {tail:e} exceeds {threshold:e}")]
    InsufficientOrder { order: usize, tail: f64, threshold: f64 },

    #[error("vector lies {distance:e} away from the model space")]
    NotInModelSpace { distance: f64 },

    #[error("root finding failed: {0}")]
    RootFinding(String),

    #[error("root with modulus {modulus} is too close to the unit circle")]
    RootOnCircle { modulus: f64 },

    #[error("fitted function is not inner (boundary modulus deviation {deviation:e})")]
    NotInner { deviation: f64 },

    #[error("phase fit residual {residual:e} exceeds {threshold:e}")]
    PhaseFit { residual: f64, threshold: f64 },

    #[error("Takagi reconstruction residual {residual:e} exceeds {threshold:e}")]
    Takagi { residual: f64, threshold: f64 },

    #[error("no base point found: subspace is numerically zero on the sampling grid (max {max:e})")]
    NoBasePoint { max: f64 },

    #[error("extraction failed: {0}")]
    Extraction(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("invalid input file: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
