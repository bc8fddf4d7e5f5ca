use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("empty poset")]
    EmptyPoset,
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("index {0} out of range")]
    InvalidIndex(usize),
    #[error("cycle detected through element {0}")]
    Cycle(usize),
    #[error("element {0} is not below element {1}")]
    NotComparable(usize, usize),
    #[error("poset is not bounded")]
    NotBounded,
    #[error("map is not {0}-compatible")]
    Incompatible(&'static str),
    #[error("map is not an automorphism")]
    NotAutomorphism,
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("operad `{0}` is not {1}")]
    NotBasic(String, &'static str),
    #[error("cochain is not a cocycle")]
    NotCocycle,
    #[error("mismatch: {0}")]
    Mismatch(String),
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("series error: {0}")]
    Series(String),
}

pub type Result<T> = std::result::Result<T, Error>;
