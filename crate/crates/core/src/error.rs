use thiserror::Error;

/// Failure classes shared by every module of the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("site ({n}, {m}) out of bounds for a {n_sites}x{m_sites} lattice")]
    OutOfBounds {
        n: usize,
        m: usize,
        n_sites: usize,
        m_sites: usize,
    },

    #[error("degenerate lattice cell at ({n}, {m}): det = {det:e}")]
    DegenerateLattice { n: usize, m: usize, det: f64 },

    #[error("degenerate stencil: {0}")]
    DegenerateStencil(String),

    #[error("flow singularity: {0}")]
    FlowSingularity(String),

    #[error("invariant {0} undefined (zero denominator)")]
    InvariantUndefined(&'static str),

    #[error("invalid stencil: {0}")]
    InvalidStencil(String),

    #[error("unsupported lattice: {0}")]
    UnsupportedLattice(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("value missing at site ({n}, {m})")]
    MissingValue { n: usize, m: usize },

    #[error("estimator undefined: exact field has zero norm")]
    UndefinedEstimator,

    #[error("empty comparison: every site was excluded")]
    EmptyComparison,

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
