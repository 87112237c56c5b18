use thiserror::Error;

use crate::field::FieldDescriptor;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("field mismatch: expected {expected}, found {found}")]
    FieldMismatch {
        expected: FieldDescriptor,
        found: FieldDescriptor,
    },

    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("rescaling factor for basis element {0} is zero")]
    ZeroScaling(usize),

    #[error("not a permutation of 0..{0}")]
    InvalidPermutation(usize),

    #[error("vertex {vertex} out of range for {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("subset enumeration over {n} vertices exceeds the cap of {cap}")]
    EnumerationCapExceeded { n: usize, cap: usize },

    #[error("coefficient bit length {bits} exceeds the cap of {cap} bits")]
    CoefficientCapExceeded { bits: u64, cap: u64 },

    #[error("group closure exceeded {cap} elements")]
    GroupOrderCapExceeded { cap: usize },

    #[error("graph is not regular")]
    NotRegular,

    #[error("structural matrix is not symmetric")]
    NotSymmetric,

    #[error("algebra is not graphicable")]
    NotGraphicable,

    #[error("{0} is not supported over a prime field")]
    PrimeFieldUnsupported(&'static str),

    #[error("eigensolver did not converge: {0}")]
    NonConvergence(String),

    #[error("spectral bounds [{lower}, {upper}] straddle the threshold {threshold}")]
    Inconclusive {
        lower: f64,
        upper: f64,
        threshold: String,
    },

    #[error("algebra is not Markov (nonnegative with unit row sums)")]
    NotMarkov,

    #[error("algebra is not doubly stochastic")]
    NotDoublyStochastic,

    #[error("random pairing rejected {attempts} times")]
    RejectionCapExceeded { attempts: usize },

    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("invalid generating set: {0}")]
    InvalidGeneratingSet(String),

    #[error("LPS parameters rejected: {0}")]
    LpsParameters(String),

    #[error("partial spectrum cannot decide: {0}")]
    PartialSpectrum(String),

    #[error("internal error: {0}")]
    Internal(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
