use thiserror::Error;

/// Errors raised by algebra, lattice, comparison, trace and measure operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("descriptor mismatch: {left} vs {right}")]
    DescriptorMismatch { left: String, right: String },

    #[error("invalid algebra descriptor: {0}")]
    InvalidDescriptor(String),

    #[error("could not parse algebra descriptor {input:?}: {reason}")]
    Parse { input: String, reason: String },

    #[error("element is not self-adjoint (residual {residual:.3e})")]
    NotSelfAdjoint { residual: f64 },

    #[error("element is not positive (smallest eigenvalue {min_eigenvalue:.3e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("element is not a projection (idempotency residual {idempotency:.3e}, self-adjointness residual {adjoint:.3e})")]
    NotProjection { idempotency: f64, adjoint: f64 },

    #[error("operation {operation} is not available on {factor} summands")]
    UnsupportedFactor { operation: &'static str, factor: String },

    #[error("eigenvalue {eigenvalue:.3e} is below the inversion floor")]
    InversionIllConditioned { eigenvalue: f64 },

    #[error("projections are too far apart (distance {distance:.6})")]
    TooFarApart { distance: f64 },

    #[error("no spare room: {0}")]
    MissingSpareRoom(String),

    #[error("angle {0} is outside [0, pi/2)")]
    AngleOutOfRange(f64),

    #[error("projection is zero")]
    ZeroProjection,

    #[error("projections are not orthogonal (residual {residual:.3e})")]
    NotOrthogonal { residual: f64 },

    #[error("projection is not dominated (residual {residual:.3e})")]
    NotDominated { residual: f64 },

    #[error("precondition violated: {0}")]
    PreconditionViolation(String),

    #[error("trace value unreachable: {0}")]
    TraceUnreachable(String),

    #[error("spin dimension {0} is too small (need at least 2)")]
    DimensionTooSmall(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unknown measure identifier {0:?}")]
    UnknownMeasure(String),

    #[error("unknown suite {0:?}")]
    UnknownSuite(String),

    #[error("measure document: {0}")]
    Document(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
