use thiserror::Error;

/// Failures of the geometric kernel.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("dimension mismatch: expected ambient dimension {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("vector of norm {norm:e} cannot be normalized onto the sphere")]
    DegenerateVector { norm: f64 },
    #[error("sphere dimension must be at least 1")]
    InvalidDimension,
    #[error("antipodal endpoints: the arc between them is not defined")]
    Antipodal,
    #[error("empty input")]
    EmptyInput,
    #[error("angle {value} outside the admissible range {range}")]
    AngleOutOfRange { value: f64, range: &'static str },
    #[error("polar-empty: the dual cone is {{0}}")]
    PolarEmpty,
    #[error("not-a-wulff-shape: {0}")]
    NotAWulffShape(String),
    #[error("input is not hemispherical")]
    NotHemispherical,
    #[error("no-separator: {0}")]
    NoSeparator(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("generation failed: {0}")]
    Generation(String),
}

pub type Result<T, E = GeometryError> = std::result::Result<T, E>;
