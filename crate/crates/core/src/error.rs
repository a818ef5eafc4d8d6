use thiserror::Error;

/// Errors raised while building models, programs and problems.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("variable space must hold at least one variable")]
    EmptySpace,
    #[error("variable {index}: lower bound {lo} exceeds upper bound {hi}")]
    InvertedBounds { index: usize, lo: i64, hi: i64 },
    #[error("initial state has {got} values, expected {expected}")]
    InitLength { expected: usize, got: usize },
    #[error("initial value {value} of variable {index} is outside its bounds")]
    InitOutOfBounds { index: usize, value: i64 },
    #[error("goal refers to variable {index}, but only {count} variables exist")]
    GoalIndex { index: usize, count: usize },
    #[error("pointer z{} does not exist ({count} pointers)", .pointer + 1)]
    PointerIndex { pointer: usize, count: usize },
    #[error("pointer z{} initialised to {value}, outside [0, {vars})", .pointer + 1)]
    PointerValue {
        pointer: usize,
        value: usize,
        vars: usize,
    },
    #[error("a program needs at least one line")]
    EmptyProgram,
    #[error("{lines} lines exceed the maximum of {max}")]
    TooManyLines { lines: usize, max: usize },
    #[error("line {line}: the last line of a program must be `end`")]
    MissingEnd { line: usize },
    #[error("line {line}: illegal goto target {target}")]
    IllegalGotoTarget { line: usize, target: usize },
    #[error("problem has no instances")]
    NoInstances,
    #[error("instances disagree on the action vocabulary or pointer count")]
    MixedProblem,
    #[error("unknown evaluation function `{0}`")]
    UnknownEvalFn(String),
    #[error("evaluation config must name at least one function")]
    EmptyEvalConfig,
    #[error("evaluation function {0} needs execution records")]
    MissingRecords(&'static str),
    #[error("unknown domain `{0}`")]
    UnknownDomain(String),
    #[error("size {size} out of range for domain {domain} (minimum {min})")]
    SizeOutOfRange {
        domain: &'static str,
        size: usize,
        min: usize,
    },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
