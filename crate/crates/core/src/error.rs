use thiserror::Error;

use crate::pattern::{QubitId, Violation};

#[derive(Debug, Error)]
pub enum Error {
    #[error("pattern is not well-formed: {}", format_violations(.0))]
    IllFormed(Vec<Violation>),
    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),
    #[error("composition arity mismatch: {outputs} outputs glued to {inputs} inputs")]
    CompositionArity { outputs: usize, inputs: usize },
    #[error("invalid glue map: {0}")]
    InvalidGlue(String),
    #[error("pattern contains dependent measurements; standardize it first")]
    DependentMeasurement,
    #[error("fan-out gates have no fixed-size gadget; use fanout_pattern")]
    FanOutGadget,
    #[error("size must be at least 1")]
    ZeroArity,
    #[error("branch limit exceeded: {count} branches requested, limit is {limit}")]
    BranchLimit { count: usize, limit: usize },
    #[error("register too large for dense simulation: {width} qubits, limit is {limit}")]
    RegisterTooLarge { width: usize, limit: usize },
    #[error("forced outcome {outcome} on qubit {qubit} has zero probability")]
    ZeroProbabilityBranch { qubit: QubitId, outcome: bool },
    #[error("outcome oracle exhausted at measurement of qubit {0}")]
    OracleExhausted(QubitId),
    #[error("input state does not match the pattern inputs: {0}")]
    InputMismatch(String),
    #[error("channel dimension mismatch: ({0}, {1}) vs ({2}, {3}) qubits")]
    DimensionMismatch(usize, usize, usize, usize),
    #[error("invalid diagonal batch: {0}")]
    InvalidBatch(String),
    #[error("invalid scheme: {0}")]
    InvalidScheme(String),
    #[error("scheme pattern is not executable: {0}")]
    InvalidSchemePattern(String),
    #[error("{line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

fn format_violations(v: &[Violation]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

pub type Result<T> = std::result::Result<T, Error>;
