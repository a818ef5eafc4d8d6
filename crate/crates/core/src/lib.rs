//! Generalized planning with planning programs over a pointer RAM.
//!
//! A planning program is a short sequence of pointer-parameterised actions,
//! flag-conditioned gotos and `end` instructions. Executed on each instance
//! of a problem it induces a plan; a program solves the problem when every
//! execution ends in a goal state. [`search::bfgp`] finds such programs with
//! a best-first search guided by the functions in [`eval`].

pub mod audit;
pub mod domains;
pub mod error;
pub mod eval;
pub mod interp;
pub mod model;
pub mod program;
pub mod search;
pub mod text;

pub use domains::Domain;
pub use error::{Error, Result};
pub use eval::{CostVector, EvalConfig, EvalFn};
pub use interp::{run, run_all, ExecutionRecord, Halt, PlanFilter, ProblemStatus, RunOptions};
pub use model::{
    Action, Flags, GpProblem, GroundAction, Instance, InstanceSpec, MachineState, Ptr, Schema,
};
pub use program::{Condition, Instruction, Program};
pub use search::{
    bfgp, bfgp_with, Outcome, SearchConfig, SearchEvent, SearchResult, SearchStats, Status,
    TieBreak, Vocabulary,
};
pub use text::{parse_instance, parse_program, serialize_instance, serialize_program};
