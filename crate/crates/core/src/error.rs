use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("graph has no edge that is not a loop")]
    LoopsOnly,
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("duplicate edge label `{0}`")]
    DuplicateEdge(String),
    #[error("cannot contract loop `{0}`")]
    ContractLoop(String),
    #[error("ground set of {size} elements exceeds cap {cap}")]
    CapExceeded { size: usize, cap: usize },
    #[error("matrix has rank {rank} but {rows} rows")]
    RankDeficient { rank: usize, rows: usize },
    #[error("integer overflow in exact elimination")]
    Overflow,
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("needs {needed} evaluations, budget is {budget}")]
    Budget { needed: u128, budget: u64 },
    #[error("residues are inconsistent")]
    CrtInconsistent,
    #[error("reconstruction is ambiguous within bound: {0:?}")]
    CrtAmbiguous(Vec<i64>),
    #[error("count identity violated: {0}")]
    Identity(String),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
