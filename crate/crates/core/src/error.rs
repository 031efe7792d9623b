use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("grid specs differ")]
    SpecMismatch,
    #[error("expected {expected} values, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("non-finite value at node {0}")]
    NonFinite(usize),
    #[error("empty region")]
    EmptyRegion,
    #[error("under-resolved ball")]
    UnderResolvedBall,
    #[error("scale below resolution: t = {t}, need t >= {min}")]
    ScaleBelowResolution { t: f64, min: f64 },
    #[error("ladder not truncated")]
    LadderNotTruncated,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("negative argument {0}")]
    NegativeArgument(f64),
    #[error("off-lattice displacement")]
    OffLatticeDisplacement,
    #[error("degenerate node set")]
    DegenerateNodeSet,
    #[error("degenerate inputs: {0}")]
    DegenerateInputs(String),
    #[error("not a large ball")]
    NotLargeBall,
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("invalid atom at index {index}: {reason}")]
    InvalidAtom { index: usize, reason: String },
    #[error("need s >= 2*floor(gamma) = {required}, atom {index} has s = {found}")]
    InsufficientMomentOrder {
        index: usize,
        required: u32,
        found: u32,
    },
    #[error("reconstruction invariant violated at node {node}")]
    Reconstruction { node: usize },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("parse error: {0}")]
    Parse(String),
}
