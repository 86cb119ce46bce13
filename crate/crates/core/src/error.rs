use thiserror::Error;

/// Errors raised by the library. Parse failures are kept apart from domain
/// errors so the command line can map them to distinct exit codes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("the zero vector has no projective class")]
    ZeroVector,

    #[error("column {0} has no finite entry")]
    EmptyColumn(usize),

    #[error("row {0} has no finite entry")]
    EmptyRow(usize),

    #[error("division by zero")]
    DivisionByZero,

    #[error("singular matrix")]
    SingularMatrix,

    #[error("vector is not in the image of the map")]
    NotInImage,

    #[error("point lies outside the inversion domain")]
    OutsideDomain,

    #[error("element is not in the valuation ring (tau = {0})")]
    NotInValuationRing(String),

    #[error("coordinate {0} is -inf; only maximal lattices are supported")]
    NonMaximalLattice(usize),

    #[error("expected a finite tropical scalar")]
    InfiniteScalar,

    #[error("segment has infinite length")]
    InfiniteSegment,

    #[error("parameter {0} lies outside [0, 1]")]
    ParameterOutOfRange(String),

    #[error("points are not ordered: {0}")]
    NotOrdered(String),

    #[error("determinant is {0}, expected 1")]
    NotSpecialLinear(String),

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("word has {len} letters, limit is {limit}")]
    WordTooLong { len: usize, limit: usize },
}

impl Error {
    pub fn is_parse(&self) -> bool {
        matches!(self, Error::Parse(_))
    }

    pub(crate) fn dim(expected: usize, found: usize) -> Self {
        Error::DimensionMismatch { expected, found }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
