use thiserror::Error;

/// Errors raised by the algebra constructions and the document layer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("not a basis: {0}")]
    NotABasis(String),
    #[error("ambient dimension mismatch: {0} vs {1}")]
    AmbientMismatch(usize, usize),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown arrow `{0}`")]
    UnknownArrow(String),
    #[error("duplicate {kind} `{name}`")]
    Duplicate { kind: &'static str, name: String },
    #[error("invalid quiver: {0}")]
    InvalidQuiver(String),
    #[error("path is not composable: {0}")]
    NotComposable(String),
    #[error("not admissible: {0}")]
    NotAdmissible(String),
    #[error("degree {0} has not been computed")]
    DegreeNotComputed(usize),
    #[error("presentation is not n-homogeneous")]
    NotHomogeneous,
    #[error("presentation is not quadratic: {0}")]
    NotQuadratic(String),
    #[error("algebra is not finite-dimensional within degree bound {0}")]
    NotFiniteDimensional(usize),
    #[error("quiver has an oriented cycle")]
    Cyclic,
    #[error("block mismatch: {0}")]
    BlockMismatch(String),
    #[error("window too small: {0}")]
    WindowTooSmall(String),
    #[error("invalid slice: {0}")]
    InvalidSlice(String),
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
