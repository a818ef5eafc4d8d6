//! Evaluation and heuristic functions over candidate programs.
//!
//! `f1`, `f2` and `f3` read the program text only. `h4`, `h5` and `f6` read
//! the outcome of executing the program on every instance. All of them are
//! costs: lower is better.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use rustc_hash::FxHashMap;
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::interp::ExecutionRecord;
use crate::model::{Action, Goal, GpProblem, MachineState};
use crate::program::{Instruction, Program};

/// Number of goto instructions.
pub fn f1(program: &Program) -> u64 {
    program
        .lines()
        .iter()
        .filter(|i| matches!(i, Instruction::Goto { .. }))
        .count() as u64
}

/// Number of undefined lines.
pub fn f2(program: &Program) -> u64 {
    program.lines().iter().filter(|i| i.is_undefined()).count() as u64
}

/// Number of repeated actions: for every distinct action, its occurrences
/// beyond the first.
pub fn f3(program: &Program) -> u64 {
    let mut seen: FxHashMap<Action, u64> = FxHashMap::default();
    let mut repeats = 0;
    for ins in program.lines() {
        if let Instruction::Action(a) = ins {
            let c = seen.entry(*a).or_default();
            if *c > 0 {
                repeats += 1;
            }
            *c += 1;
        }
    }
    repeats
}

/// `n - PC^MAX`.
pub fn h4(program: &Program, pcmax: usize) -> u64 {
    (program.len() - pcmax) as u64
}

/// Sum over instances and goal variables of the squared distance between the
/// final value and the goal value. Saturates instead of overflowing.
pub fn h5(records: &[ExecutionRecord], problem: &GpProblem) -> u64 {
    records
        .iter()
        .zip(&problem.instances)
        .fold(0u64, |acc, (r, inst)| {
            acc.saturating_add(goal_distance(&r.final_state, &inst.goal))
        })
}

/// Squared distance of `state` to `goal` for a single instance.
pub fn goal_distance(state: &MachineState, goal: &Goal) -> u64 {
    let mut total: u64 = 0;
    for (i, g) in goal.iter() {
        let d = (state.vars[i] as i128 - g as i128).unsigned_abs();
        let sq = d
            .checked_mul(d)
            .map_or(u64::MAX, |v| u64::try_from(v).unwrap_or(u64::MAX));
        total = total.saturating_add(sq);
    }
    total
}

/// Total length of the induced plans, pointer primitives included.
pub fn f6(records: &[ExecutionRecord]) -> u64 {
    records.iter().map(|r| r.actions_applied).sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EvalFn {
    F1,
    F2,
    F3,
    H4,
    H5,
    F6,
}

impl EvalFn {
    pub const ALL: [EvalFn; 6] = [
        EvalFn::F1,
        EvalFn::F2,
        EvalFn::F3,
        EvalFn::H4,
        EvalFn::H5,
        EvalFn::F6,
    ];

    pub fn token(self) -> &'static str {
        match self {
            EvalFn::F1 => "f1",
            EvalFn::F2 => "f2",
            EvalFn::F3 => "f3",
            EvalFn::H4 => "h4",
            EvalFn::H5 => "h5",
            EvalFn::F6 => "f6",
        }
    }

    pub fn needs_records(self) -> bool {
        matches!(self, EvalFn::H4 | EvalFn::H5 | EvalFn::F6)
    }
}

impl FromStr for EvalFn {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        EvalFn::ALL
            .into_iter()
            .find(|f| f.token() == s.trim())
            .ok_or_else(|| Error::UnknownEvalFn(s.to_string()))
    }
}

/// Ordered list of functions; earlier ones dominate.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EvalConfig(Vec<EvalFn>);

impl EvalConfig {
    pub fn new(fns: Vec<EvalFn>) -> Result<Self> {
        if fns.is_empty() {
            return Err(Error::EmptyEvalConfig);
        }
        Ok(EvalConfig(fns))
    }

    pub fn functions(&self) -> &[EvalFn] {
        &self.0
    }
}

impl FromStr for EvalConfig {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let fns = s
            .split(',')
            .filter(|t| !t.trim().is_empty())
            .map(str::parse)
            .collect::<Result<Vec<_>>>()?;
        EvalConfig::new(fns)
    }
}

impl fmt::Display for EvalConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tokens: Vec<_> = self.0.iter().map(|e| e.token()).collect();
        f.write_str(&tokens.join(","))
    }
}

/// Cost values, stored inline for up to two functions.
pub type Costs = SmallVec<[u64; 2]>;

/// Lexicographic costs followed by the generation number.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CostVector {
    pub costs: Costs,
    pub seq: u64,
}

impl Ord for CostVector {
    fn cmp(&self, other: &Self) -> Ordering {
        self.costs.cmp(&other.costs).then(self.seq.cmp(&other.seq))
    }
}

impl PartialOrd for CostVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Execution summary of an open (unsolved, not failed) program.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Performance {
    pub pcmax: usize,
    /// Value of `h5`.
    pub goal_distance: u64,
    /// Value of `f6`.
    pub plan_length: u64,
}

impl Performance {
    pub fn from_records(pcmax: usize, records: &[ExecutionRecord], problem: &GpProblem) -> Self {
        Performance {
            pcmax,
            goal_distance: h5(records, problem),
            plan_length: f6(records),
        }
    }
}

/// Scores `program` under `config`. Performance functions need `perf`.
pub fn evaluate(
    program: &Program,
    perf: Option<Performance>,
    config: &EvalConfig,
    seq: u64,
) -> Result<CostVector> {
    let mut costs = Costs::with_capacity(config.0.len());
    for &f in &config.0 {
        let v = match (f, perf) {
            (EvalFn::F1, _) => f1(program),
            (EvalFn::F2, _) => f2(program),
            (EvalFn::F3, _) => f3(program),
            (EvalFn::H4, Some(p)) => h4(program, p.pcmax),
            (EvalFn::H5, Some(p)) => p.goal_distance,
            (EvalFn::F6, Some(p)) => p.plan_length,
            (f, None) => return Err(Error::MissingRecords(f.token())),
        };
        costs.push(v);
    }
    Ok(CostVector { costs, seq })
}
