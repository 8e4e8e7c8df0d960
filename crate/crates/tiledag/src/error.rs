use thiserror::Error;

/// Errors raised by generators, graph construction and analyses.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
    #[error("duplicate task id {0} in trace")]
    DuplicateId(usize),
    #[error("task id {id} follows id {prev}; ids must increase along the trace")]
    OutOfOrder { prev: usize, id: usize },
    #[error("task {0} writes no tile")]
    NoWrite(usize),
    #[error("dependence cycle through edge {from} -> {to}")]
    Cycle { from: usize, to: usize },
    #[error("edge {from} -> {to} references a missing task")]
    DanglingEdge { from: usize, to: usize },
    #[error("invalid elimination list at entry {index}: {reason}")]
    InvalidElimination { index: usize, reason: &'static str },
    #[error("kernel family mismatch: {0}")]
    KernelFamily(&'static str),
    #[error("invalid schedule at task {task}: {reason}")]
    InvalidSchedule { task: usize, reason: &'static str },
    #[error("instance too large: {0}")]
    TooLarge(&'static str),
    #[error("malformed column: {0}")]
    MalformedColumn(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;
