use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("generator index {index} out of range for rank {rank}")]
    IndexOutOfRange { index: usize, rank: usize },

    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },

    #[error("coefficient ring mismatch: {left} vs {right}")]
    RingMismatch { left: String, right: String },

    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("element is not homogeneous")]
    NotHomogeneous,

    #[error("valuation of the zero element is undefined")]
    ZeroElement,

    #[error("not a Lie element; residual {residual}")]
    NotLie { residual: String },

    #[error("not in the restricted Lie algebra; residual {residual}")]
    NotRestrictedLie { residual: String },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("vector does not lie in the ambient lattice")]
    NotInLattice,

    #[error("matrix is not invertible over the integers")]
    NotInvertible,

    #[error("endomorphism does not act trivially on the abelianization (generator x{generator})")]
    NotInIa { generator: usize },

    #[error("endomorphism has depth {actual}, below the requested {requested}")]
    DepthTooLow { requested: usize, actual: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
