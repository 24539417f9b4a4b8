use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unknown {kind} `{name}`")]
    UnknownName { kind: &'static str, name: String },

    #[error("singular angle {0} for the square conformal speed")]
    SingularAngle(f64),

    #[error("{0} does not support polygonal boundaries")]
    PolygonalCurve(&'static str),

    #[error("matrix is rank deficient (numerical rank {rank} of {cols})")]
    RankDeficient { rank: usize, cols: usize },

    #[error("eigensolver did not converge")]
    NoConvergence,

    #[error("degenerate slope fit: {0}")]
    DegenerateFit(String),

    #[error("point ({x}, {y}) is within {threshold:.3e} of the boundary (distance {distance:.3e})")]
    NearBoundary {
        x: f64,
        y: f64,
        distance: f64,
        threshold: f64,
    },

    #[error("vector {index} has zero norm after orthogonalization")]
    ZeroNorm { index: usize },

    #[error("root bracketing failed on [{lo}, {hi}]")]
    Bracketing { lo: f64, hi: f64 },

    #[error("method `{method}` cannot be used on domain `{domain}`: {reason}")]
    Routing {
        method: String,
        domain: String,
        reason: String,
    },

    #[error("requested {requested} eigenpairs but only {available} are available")]
    NotEnoughEigenpairs { requested: usize, available: usize },

    #[error("basis mismatch between solutions")]
    BasisMismatch,

    #[error("empty input: {0}")]
    EmptyInput(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
