use thiserror::Error;

/// Errors surfaced by the exact engine and the verification oracle.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("word of length {len} exceeds depth cap {cap}")]
    DepthCap { len: usize, cap: usize },

    #[error("invalid word digit {digit:?}; expected 1-4")]
    InvalidDigit { digit: char },

    #[error("overlapping words: {prefix} is a prefix of {word}")]
    OverlappingWords { prefix: String, word: String },

    #[error("word list must be non-empty")]
    EmptyWordList,

    #[error("node {node} is not a member of the set")]
    NodeNotInSet { node: String },

    #[error("set is missing the sibling of {node}")]
    MissingSibling { node: String },

    #[error("invalid node set: {0}")]
    InvalidSet(String),

    #[error("layer {level} holds {size} sets, exceeding the cap of {cap}")]
    LayerCapacity { level: u32, size: usize, cap: usize },

    #[error("discretization level {level} exceeds the maximum of {max}")]
    LevelTooDeep { level: u32, max: u32 },

    #[error("level {level} too small: set has region words of length {depth}")]
    LevelTooSmall { level: u32, depth: usize },

    #[error("atom {atom} is exactly equidistant from nodes {first} and {second}")]
    VoronoiTie {
        atom: usize,
        first: usize,
        second: usize,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// Stable machine-readable name, used by the CLI diagnostic stream.
    pub fn name(&self) -> &'static str {
        match self {
            Error::DepthCap { .. } => "depth-cap",
            Error::InvalidDigit { .. } => "invalid-digit",
            Error::OverlappingWords { .. } => "overlapping-words",
            Error::EmptyWordList => "empty-word-list",
            Error::NodeNotInSet { .. } => "node-not-in-set",
            Error::MissingSibling { .. } => "missing-sibling",
            Error::InvalidSet(_) => "invalid-set",
            Error::LayerCapacity { .. } => "layer-capacity",
            Error::LevelTooDeep { .. } => "level-too-deep",
            Error::LevelTooSmall { .. } => "level-too-small",
            Error::VoronoiTie { .. } => "voronoi-tie",
            Error::InvalidArgument(_) => "invalid-argument",
        }
    }
}
