use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("graph has {n} vertices, at most {max} supported")]
    TooManyVertices { n: usize, max: usize },
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),
    #[error("graph6: {0}")]
    Graph6(String),
    #[error("capacity map: {0}")]
    Capacity(String),
    #[error("coloring: {0}")]
    Coloring(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("empty search space: {0}")]
    EmptySearchSpace(String),
    #[error("instance too large: {0}")]
    TooLarge(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("certificate: {0}")]
    Certificate(String),
}
