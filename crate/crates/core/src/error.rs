use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("zero vector has no direction")]
    ZeroVector,

    #[error("x1 + x2 = 0")]
    ZeroSum,

    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("invalid site: {0}")]
    InvalidSite(String),

    #[error("invalid scene: {0}")]
    InvalidScene(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("endpoints do not bracket a sign change (f_in = {f_in}, f_out = {f_out})")]
    NoSignChange { f_in: f64, f_out: f64 },

    #[error("bisection stalled at |f| = {residual} above tolerance {tol}")]
    NotConverged { residual: f64, tol: f64 },

    #[error("ray origin must satisfy f < 0 (f = {0})")]
    BadOrigin(f64),

    #[error("point is not on the bisector (|f| = {f} > {tau})")]
    NotOnBisector { f: f64, tau: f64 },

    #[error("{message} at line {line} column {column}")]
    Parse { line: usize, column: usize, message: String },

    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
