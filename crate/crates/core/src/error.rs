use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("line {line}: duplicate vertex `{name}`")]
    DuplicateVertex { line: usize, name: String },

    #[error("line {line}: duplicate edge `{source_name} {label} {target}`")]
    DuplicateEdge {
        line: usize,
        source_name: String,
        label: String,
        target: String,
    },

    #[error("line {line}: edge references undeclared vertex `{name}`")]
    UndeclaredVertex { line: usize, name: String },

    #[error("graph declares no vertices")]
    NoVertices,

    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("symbol `{0}` is not in the alphabet")]
    UnknownSymbol(String),

    #[error("vertex set must be nonempty")]
    EmptySet,

    #[error("word must be nonempty")]
    EmptyWord,

    #[error("{atoms} atoms exceed the lattice cap of {cap}")]
    LatticeCap { atoms: usize, cap: usize },

    #[error("range automaton exceeded the cap of {cap} states")]
    StateCap { cap: usize },

    #[error("word `{word}` is not realizable from the given set")]
    NotRealizable { word: String },

    #[error("outside theorem scope ({0})")]
    OutsideScope(String),

    #[error("bound exceeded: {0}")]
    BoundExceeded(String),

    #[error("invalid parameter: {0}")]
    InvalidParam(String),
}

pub type Result<T> = std::result::Result<T, Error>;
