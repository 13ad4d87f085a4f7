use thiserror::Error;

/// Errors raised by the toolkit. Numerical non-existence (a missing tangent,
/// a failed convergence test) is reported through [`crate::Verdict`] instead.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("chord is degenerate: c(t0) and c(t0 + h) coincide at t0 = {t0}, h = {h}")]
    CoincidentPoints { t0: f64, h: f64 },

    #[error("bad witness: {0}")]
    BadWitness(String),

    #[error("constraint violated: {0}")]
    ConstraintViolation(String),

    #[error("root not bracketed for target {target} after expansion")]
    RootNotBracketed { target: f64 },

    #[error("tangent estimate missing at entry {index}")]
    MissingTangent { index: usize },

    #[error("degenerate sequence: {usable} usable points, {required} required")]
    DegenerateSequence { usable: usize, required: usize },

    #[error("sandwich curves do not straddle the line: {0}")]
    BadSandwich(String),

    #[error("insufficient points: {found} survive extraction, {want} wanted")]
    InsufficientPoints { found: usize, want: usize },

    #[error("sequence does not converge in the projective tangent bundle: {0}")]
    NotConvergent(String),

    #[error("unknown map `{0}`")]
    UnknownMap(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
