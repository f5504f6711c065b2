use thiserror::Error;

/// Errors raised by tensor construction and the decomposition routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("component count {len} does not match 3^{order} = {expected}")]
    ComponentCount {
        order: usize,
        len: usize,
        expected: usize,
    },

    #[error("order mismatch: expected {expected}, got {found}")]
    OrderMismatch { expected: usize, found: usize },

    #[error("cannot contract order-{inner} tensor into order-{outer} tensor")]
    ContractionOrder { outer: usize, inner: usize },

    #[error("index position {position} out of range for order-{order} tensor")]
    PositionOutOfRange { position: usize, order: usize },

    #[error("index position {0} repeated")]
    RepeatedPosition(usize),

    #[error("axis permutation {0:?} is not a permutation of 0..order")]
    InvalidPermutation(Vec<usize>),

    #[error("matrix is not a proper rotation (orthogonality residual {orthogonality:.3e}, det {det})")]
    NotRotation { orthogonality: f64, det: f64 },

    #[error("{what} is not a deviator of order {order} (relative residual {residual:.3e})")]
    NotDeviator {
        what: &'static str,
        order: usize,
        residual: f64,
    },

    #[error("coordinate vector has length {found}, expected {expected}")]
    CoordinateLength { expected: usize, found: usize },

    #[error("tensor is not in V (x) D^({n}) (relative residual {residual:.3e})")]
    NotInVectorDeviatorSpace { n: usize, residual: f64 },

    #[error("vector-deviator splitting requires n >= 2, got n = {0}")]
    SplittingOrder(usize),

    #[error("deviator order {s} out of range 0..={n}")]
    DeviatorOrderRange { n: usize, s: usize },

    #[error("{0}")]
    Symmetry(String),

    #[error("malformed decomposition: {0}")]
    MalformedDecomposition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
