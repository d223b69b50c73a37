use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error(
        "unknown solid `{0}` (expected tetrahedron, cube, octahedron, dodecahedron or icosahedron)"
    )]
    UnknownSolid(String),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("graph file line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph is not regular: vertex {vertex} has degree {found}, expected {expected}")]
    Irregular {
        vertex: usize,
        found: usize,
        expected: usize,
    },
    #[error("vertex {vertex} out of range for a graph with {n_vertices} vertices")]
    VertexOutOfRange { vertex: usize, n_vertices: usize },
    #[error("vertices must be pairwise distinct")]
    NotDistinct,
    #[error("probability {0} is outside [0, 1]")]
    ProbabilityOutOfRange(f64),
    #[error("integer overflow in polynomial arithmetic")]
    Overflow,
    #[error("polynomial of degree {degree} does not fit degree bound {bound}")]
    DegreeBound { degree: usize, bound: usize },
    #[error("event family is empty")]
    EmptyFamily,
    #[error("event family has {size} members; at most {max} are supported (2^K subsets)")]
    FamilyTooLarge { size: usize, max: usize },
    #[error("graph is not distance-homogeneous: {0}")]
    NotHomogeneous(String),
    #[error(
        "second-moment inclusion-exclusion needs {work} subsets, over the budget of {budget}; \
         use the exhaustive oracle (`oracle --moment 2`) instead"
    )]
    BudgetExceeded { work: u128, budget: u128 },
    #[error("exhaustive enumeration over {edges} edges refused (limit {max})")]
    TooManyEdges { edges: usize, max: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),
}
