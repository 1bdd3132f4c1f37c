use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("marking count must be at least 3, got {0}")]
    TooFewMarkings(usize),

    #[error("n = {n} is outside the supported envelope (n <= {max})")]
    Envelope { n: usize, max: usize },

    #[error("invalid tree: {0}")]
    InvalidTree(String),

    #[error("invalid split: {0}")]
    InvalidSplit(String),

    #[error("splits {0} and {1} are not compatible")]
    IncompatibleSplits(String, String),

    #[error("marking counts differ ({0} vs {1})")]
    MarkingMismatch(usize, usize),

    #[error("edge {0} is not an edge of the tree")]
    NotAnEdge(usize),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("cell index {0} is out of range")]
    CellOutOfRange(usize),

    #[error("exponent sums differ ({0} vs {1})")]
    UnequalSums(u64, u64),

    #[error("a vertex needs l + val >= 3 to be stable, got {0}")]
    UnstableVertex(u64),

    #[error("reconstruction of the marking permutation failed: {0}")]
    Reconstruction(String),

    #[error("{0}")]
    Unsupported(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    /// True for errors caused by asking for more than the supported envelope.
    pub fn is_resource(&self) -> bool {
        matches!(self, Error::Envelope { .. })
    }
}
