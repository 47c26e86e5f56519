use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("index {index} out of range (len {len})")]
    OutOfRange { index: usize, len: usize },

    #[error("degenerate polygon: {0}")]
    DegeneratePolygon(String),

    #[error("element {cell} flipped during boundary smoothing step {step}")]
    FlippedElement { cell: usize, step: usize },

    #[error("no material left in the continuum")]
    EmptyContinuum,

    #[error("non-positive Jacobian (J = {det:.3e}) in cell {cell}")]
    NonPositiveJacobian { cell: usize, det: f64 },

    #[error("Newton-Raphson did not converge at load factor {load_factor:.4} (residual {residual:.3e})")]
    NonConvergence { load_factor: f64, residual: f64 },

    #[error("singular tangent matrix")]
    SingularMatrix,

    #[error("contact augmentation stalled: penetration {penetration:.3e} after {augmentations} updates")]
    AugmentationStall { penetration: f64, augmentations: usize },

    #[error("open path self-intersects")]
    SelfIntersectingInput,

    #[error("could not close path without self-intersection")]
    ClosureFailed,

    #[error("degenerate path: {0}")]
    DegeneratePath(String),

    #[error("descriptor length mismatch: {0} vs {1}")]
    MismatchedHarmonics(usize, usize),

    #[error("{file}:{line}: {msg}")]
    Parse { file: String, line: usize, msg: String },

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
