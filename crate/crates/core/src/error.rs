use num_bigint::BigInt;
use thiserror::Error;

/// Errors raised by the library.
///
/// Degenerate strata (a vanishing `N`) are *not* errors for the isotropy
/// queries; only operations that need an orbifold structure reject them.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("sum of p ({p_sum}) differs from sum of q ({q_sum})")]
    SumMismatchP { p_sum: BigInt, q_sum: BigInt },

    #[error("sum of a ({a_sum}) differs from sum of b ({b_sum})")]
    SumMismatchA { a_sum: BigInt, b_sum: BigInt },

    #[error("matrix has determinant {det}, expected +1 or -1")]
    NonUnimodular { det: BigInt },

    #[error("parameters are not in the normal form p=(c,d,e), q=(c+d+e,0,0), b=(0,b2,b3)")]
    NotNormalized,

    #[error("the torus action is not almost free (some N_sigma vanishes)")]
    NotAlmostFree,

    #[error("the torus action is not effective (ineffective kernel {kernel})")]
    NotEffective { kernel: String },

    #[error("no positive-curvature witness exists for these parameters")]
    NoWitness,

    #[error("the singular set is not contained in a single edge")]
    SigmaNotSingleEdge,

    #[error("family side condition violated: {0}")]
    SideConditionViolated(String),

    #[error("unknown family `{0}`")]
    UnknownFamily(String),

    #[error("minor order {k} out of range for a {rows}x{cols} matrix")]
    MinorOrder { k: usize, rows: usize, cols: usize },

    #[error("matrix {rows}x{cols} exceeds the brute-force minor limit of {limit}x{limit}")]
    MatrixTooLarge { rows: usize, cols: usize, limit: usize },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
