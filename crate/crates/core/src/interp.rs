//! Deterministic interpreter for planning programs.
//!
//! A run starts from program state `(init, 0)` and stops at the first halt
//! event. With revisit detection on, the program state is recorded every
//! time a backward jump is taken; every cycle through program states passes
//! a backward jump, so a repeated record means the run can never terminate.

use std::hash::{Hash, Hasher};

use hashbrown::HashTable;
use rustc_hash::FxHasher;

use crate::model::{holds_goal, GpProblem, GroundAction, Instance, MachineState};
use crate::program::{Instruction, Program};

/// Why an execution stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Halt {
    EndGoal,
    EndNoGoal,
    UndefinedLine,
    Inapplicable,
    Infinite,
    StepLimit,
}

impl Halt {
    pub fn name(self) -> &'static str {
        match self {
            Halt::EndGoal => "END_GOAL",
            Halt::EndNoGoal => "END_NO_GOAL",
            Halt::UndefinedLine => "UNDEFINED_LINE",
            Halt::Inapplicable => "INAPPLICABLE",
            Halt::Infinite => "INFINITE",
            Halt::StepLimit => "STEP_LIMIT",
        }
    }

    /// Failures make a candidate program a dead end.
    pub fn is_failure(self) -> bool {
        !matches!(self, Halt::EndGoal | Halt::UndefinedLine)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProgramState {
    pub line: usize,
    pub machine: MachineState,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step {
    Next(ProgramState),
    Halt(Halt),
}

/// Executes the instruction at `pstate.line`.
pub fn step(program: &Program, instance: &Instance, pstate: &ProgramState) -> Step {
    match program.line(pstate.line) {
        Instruction::Undefined => Step::Halt(Halt::UndefinedLine),
        Instruction::End => Step::Halt(end_halt(&pstate.machine, instance)),
        Instruction::Goto { target, cond } => {
            let line = if cond.holds(pstate.machine.flags) {
                target as usize
            } else {
                pstate.line + 1
            };
            Step::Next(ProgramState {
                line,
                machine: pstate.machine.clone(),
            })
        }
        Instruction::Action(a) => {
            let mut machine = pstate.machine.clone();
            if a.apply_mut(&mut machine, &instance.space) {
                Step::Next(ProgramState {
                    line: pstate.line + 1,
                    machine,
                })
            } else {
                Step::Halt(Halt::Inapplicable)
            }
        }
    }
}

#[inline]
fn end_halt(state: &MachineState, instance: &Instance) -> Halt {
    if holds_goal(state, &instance.goal) {
        Halt::EndGoal
    } else {
        Halt::EndNoGoal
    }
}

pub const DEFAULT_MAX_STEPS: u64 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RunOptions {
    pub detect_revisit: bool,
    /// Cap on executed instructions (actions plus gotos).
    pub max_steps: u64,
    /// Keep the induced plan; only its length is tracked otherwise.
    pub record_plan: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            detect_revisit: true,
            max_steps: DEFAULT_MAX_STEPS,
            record_plan: false,
        }
    }
}

impl RunOptions {
    pub fn with_plan(mut self) -> Self {
        self.record_plan = true;
        self
    }
}

/// Outcome of running one program on one instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExecutionRecord {
    pub halt: Halt,
    pub halt_line: usize,
    pub final_state: MachineState,
    /// Applied actions, if requested in [`RunOptions::record_plan`].
    pub plan: Vec<GroundAction>,
    pub actions_applied: u64,
    pub gotos: u64,
    /// Instructions executed plus the halting event.
    pub steps: u64,
    /// Program states stored for revisit detection.
    pub stored_states: usize,
}

/// Counters of one execution; the final state stays in the [`Executor`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RunSummary {
    pub halt: Halt,
    pub halt_line: usize,
    pub actions_applied: u64,
    pub gotos: u64,
    pub stored_states: usize,
}

/// Reusable interpreter buffers: the machine state and the revisit table.
///
/// Recorded program states are encoded as `[line, flags, pointers.., vars..]`
/// and appended to a flat arena; the table holds arena offsets.
#[derive(Default)]
pub struct Executor {
    machine: MachineState,
    seen: HashTable<usize>,
    arena: Vec<i64>,
    key_len: usize,
}

fn key_hash(key: &[i64]) -> u64 {
    let mut h = FxHasher::default();
    key.hash(&mut h);
    h.finish()
}

impl Executor {
    pub fn new() -> Self {
        Self::default()
    }

    /// State reached by the last execution.
    pub fn state(&self) -> &MachineState {
        &self.machine
    }

    /// Records `(line, machine)`; false if it was recorded before.
    fn checkpoint(&mut self, line: usize) -> bool {
        let start = self.arena.len();
        self.arena.push(line as i64);
        self.arena.push(self.machine.flags.bits());
        self.arena
            .extend(self.machine.pointers.iter().map(|&p| p as i64));
        self.arena.extend_from_slice(&self.machine.vars);
        let len = self.key_len;
        let arena = &self.arena;
        let key = &arena[start..];
        let hash = key_hash(key);
        if self
            .seen
            .find(hash, |&o| arena[o..o + len] == *key)
            .is_some()
        {
            self.arena.truncate(start);
            return false;
        }
        self.seen
            .insert_unique(hash, start, |&o| key_hash(&arena[o..o + len]));
        true
    }

    fn load(&mut self, state: &MachineState) {
        self.machine.vars.clear();
        self.machine.vars.extend_from_slice(&state.vars);
        self.machine.pointers.clear();
        self.machine.pointers.extend_from_slice(&state.pointers);
        self.machine.flags = state.flags;
        self.seen.clear();
        self.arena.clear();
        self.key_len = 2 + state.pointers.len() + state.vars.len();
    }

    /// Runs `program` from the initial state of `instance`, appending applied
    /// actions to `plan` when given.
    pub fn execute(
        &mut self,
        program: &Program,
        instance: &Instance,
        opts: &RunOptions,
        plan: Option<&mut Vec<GroundAction>>,
    ) -> RunSummary {
        self.load(&instance.init);
        self.run_from(program, instance, opts, 0, (0, 0), plan)
    }

    /// Continues an execution that reached `line` in `state` after
    /// `counts = (actions applied, gotos)`. Program states visited before
    /// the resumption are not known, so a cycle through them is detected
    /// one lap later (or runs into the step limit first).
    pub fn resume(
        &mut self,
        program: &Program,
        instance: &Instance,
        opts: &RunOptions,
        state: &MachineState,
        line: usize,
        counts: (u64, u64),
    ) -> RunSummary {
        self.load(state);
        self.run_from(program, instance, opts, line, counts, None)
    }

    fn run_from(
        &mut self,
        program: &Program,
        instance: &Instance,
        opts: &RunOptions,
        mut line: usize,
        (mut applied, mut gotos): (u64, u64),
        mut plan: Option<&mut Vec<GroundAction>>,
    ) -> RunSummary {
        let halt = loop {
            if applied + gotos >= opts.max_steps {
                break Halt::StepLimit;
            }
            match program.line(line) {
                Instruction::Undefined => break Halt::UndefinedLine,
                Instruction::End => break end_halt(&self.machine, instance),
                Instruction::Action(a) => {
                    let ground = plan.is_some().then(|| GroundAction::new(a, &self.machine));
                    if !a.apply_mut(&mut self.machine, &instance.space) {
                        break Halt::Inapplicable;
                    }
                    applied += 1;
                    if let (Some(plan), Some(g)) = (plan.as_deref_mut(), ground) {
                        plan.push(g);
                    }
                    line += 1;
                }
                Instruction::Goto { target, cond } => {
                    gotos += 1;
                    if !cond.holds(self.machine.flags) {
                        line += 1;
                        continue;
                    }
                    let target = target as usize;
                    let back = target < line;
                    line = target;
                    if opts.detect_revisit && back && !self.checkpoint(target) {
                        break Halt::Infinite;
                    }
                }
            }
        };
        RunSummary {
            halt,
            halt_line: line,
            actions_applied: applied,
            gotos,
            stored_states: self.seen.len(),
        }
    }

    /// Executes and packages the outcome as an [`ExecutionRecord`].
    pub fn record(
        &mut self,
        program: &Program,
        instance: &Instance,
        opts: &RunOptions,
    ) -> ExecutionRecord {
        let mut plan = Vec::new();
        let s = self.execute(
            program,
            instance,
            opts,
            opts.record_plan.then_some(&mut plan),
        );
        ExecutionRecord {
            halt: s.halt,
            halt_line: s.halt_line,
            final_state: self.machine.clone(),
            plan,
            actions_applied: s.actions_applied,
            gotos: s.gotos,
            steps: s.actions_applied + s.gotos + 1,
            stored_states: s.stored_states,
        }
    }
}

pub fn run(program: &Program, instance: &Instance, opts: &RunOptions) -> ExecutionRecord {
    Executor::new().record(program, instance, opts)
}

/// Verdict of a program over a whole problem.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProblemStatus {
    Solution,
    DeadEnd {
        reason: Halt,
        instance: usize,
    },
    /// Some executions stopped at undefined lines; `pcmax` is the largest.
    Open {
        pcmax: usize,
    },
}

/// Runs `program` on every instance. Stops at the first failing instance,
/// so a dead end carries records up to and including the failure.
pub fn run_all(
    program: &Program,
    problem: &GpProblem,
    opts: &RunOptions,
) -> (ProblemStatus, Vec<ExecutionRecord>) {
    let mut records = Vec::with_capacity(problem.instances.len());
    let mut pcmax: Option<usize> = None;
    let mut exec = Executor::new();
    for (t, inst) in problem.instances.iter().enumerate() {
        let r = exec.record(program, inst, opts);
        let halt = r.halt;
        let line = r.halt_line;
        records.push(r);
        match halt {
            Halt::EndGoal => {}
            Halt::UndefinedLine => pcmax = Some(pcmax.map_or(line, |p| p.max(line))),
            reason => {
                return (
                    ProblemStatus::DeadEnd {
                        reason,
                        instance: t,
                    },
                    records,
                )
            }
        }
    }
    let status = match pcmax {
        None => ProblemStatus::Solution,
        Some(pcmax) => ProblemStatus::Open { pcmax },
    };
    (status, records)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlanFilter {
    All,
    DomainOnly,
}

/// The induced action sequence of a run recorded with a plan.
pub fn induced_plan(record: &ExecutionRecord, filter: PlanFilter) -> Vec<GroundAction> {
    record
        .plan
        .iter()
        .copied()
        .filter(|g| filter == PlanFilter::All || !g.action.is_primitive())
        .collect()
}
