use thiserror::Error;

use crate::phase::TriangleEquation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("tolerance {0} outside the open interval (0, pi/4)")]
    InvalidTolerance(f64),

    #[error("degenerate triangular equation {0}")]
    DegenerateTriangle(TriangleEquation),

    #[error("triangular equation {0} has no strictly positive solution")]
    InfeasibleTriangle(TriangleEquation),

    #[error("no solution for the norm of entry ({row}, {col}) in pass {pass}: {source}")]
    TriangleUnsolvable {
        row: usize,
        col: usize,
        pass: u8,
        source: Box<Error>,
    },

    #[error("scaling factor {0} is zero")]
    ZeroScalar(usize),

    #[error("leading {0}x{0} block is singular")]
    SingularLeadingBlock(usize),

    #[error("matrix has no nonzero maximal minor")]
    RankDeficient,

    #[error("index {index} out of range for a ground set of size {n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("expected a tuple of length {expected}, got {got}")]
    Arity { expected: usize, got: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("phirotope is identically zero")]
    AllZero,

    #[error("{0} Grassmann-Pluecker relations fail")]
    NotAPhirotope(usize),

    #[error("bases violate the exchange axiom")]
    BasisExchange,

    #[error("minors of size {0} are not supported (only 1 and 2)")]
    UnsupportedMinorSize(usize),

    #[error("the first r elements do not form a basis")]
    FirstSubsetNotBasis,

    #[error("associated bipartite graph has {0} connected components")]
    DisconnectedGraph(usize),

    #[error("phirotope is not in canonical form: {0}")]
    NotCanonical(String),

    #[error("matrix is not in standard form (I | N)")]
    NotStandardForm,

    #[error("essentially oriented: no non-real entry phase to anchor the reconstruction")]
    EssentiallyOriented,

    #[error("forest does not span: {0}")]
    NonSpanningForest(String),

    #[error("invalid input: {0}")]
    Format(String),
}
