use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported field order {0} (only 2 and 3)")]
    UnsupportedField(u8),
    #[error("unsupported factor count {0} (1 to 4)")]
    UnsupportedFactorCount(u8),
    #[error("value {value} is not an element of GF({q})")]
    ElementOutOfRange { value: u8, q: u8 },
    #[error("zero vector is not a projective point")]
    ZeroVector,
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("kernel not one-dimensional (rank {rank}, {cols} columns)")]
    KernelNotOneDimensional { rank: usize, cols: usize },
    #[error("not a geometric hyperplane: {0}")]
    NotAHyperplane(String),
    #[error("hyperplane spans too little: rank {rank} of {dim}")]
    SpansTooLittle { rank: usize, dim: usize },
    #[error("projectivity is only defined over GF(3) here")]
    ProjectivityNeedsGf3,
    #[error("inconsistent Veldkamp line: {0}")]
    InconsistentLine(String),
    #[error("dual vector absent for hyperplane {0}")]
    MissingDual(usize),
    #[error("element not found in universe: {0}")]
    NotClosed(String),
    #[error("weight undefined for hyperplane {0}")]
    WeightUndefined(String),
    #[error("unknown reference graph {0:?}")]
    UnknownGraph(String),
    #[error("format error: {0}")]
    Format(String),
    #[error("count mismatch: {0}")]
    CountMismatch(String),
    #[error("classification error: {0}")]
    Classification(String),
    #[error(transparent)]
    ThreadPool(#[from] rayon::ThreadPoolBuildError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
