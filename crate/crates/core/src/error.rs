use std::io;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("empty input: no vertices")]
    EmptyInput,

    #[error("line {line}: vertex id {id} out of range (n = {n})")]
    VertexOutOfRange { line: usize, id: u64, n: usize },

    #[error("empty graph: no vertices to summarize")]
    EmptyGraph,

    #[error("infeasible generator parameters: {0}")]
    Infeasible(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("invalid solution: {0}")]
    Solution(String),

    #[error("unfold ledger references vertex {0} outside the cover universe")]
    Unfold(usize),

    #[error("malformed statistics report: {0}")]
    Report(String),

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
