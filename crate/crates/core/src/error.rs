use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// A numeric parameter is outside the domain where the object is defined.
    #[error("parameter out of domain: {0}")]
    Domain(String),

    #[error("vertex {vertex} out of range for a graph on {vertex_count} vertices")]
    VertexOutOfRange { vertex: usize, vertex_count: usize },

    #[error("invalid edge {{{0}, {1}}}: self-loop")]
    SelfLoop(usize, usize),

    #[error("graph is not a forest")]
    NotAForest,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("generator of degree {0} is not supported here (maximum 2)")]
    UnsupportedDegree(usize),

    /// An exact-arithmetic branch did not divide evenly, or two routes to the
    /// same value disagreed.
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),

    #[error("{what} has size {size}, above the cap of {cap}")]
    ResourceCap {
        what: &'static str,
        size: usize,
        cap: usize,
    },

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn is_resource_cap(&self) -> bool {
        matches!(self, Error::ResourceCap { .. })
    }
}
