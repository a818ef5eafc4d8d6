//! Best-first search over planning programs.
//!
//! The search starts from the empty program. A node is expanded by
//! programming its `PC^MAX` line, the largest line at which some execution
//! stopped because the line was undefined, with every instruction of the
//! vocabulary. Children whose execution fails on some instance are dead ends
//! and dropped. Only the open list is stored: expanded nodes are released.
//!
//! No closed list is kept. Every child differs from its parent in a line
//! that no ancestor has programmed; [`crate::audit`] checks at run time that
//! no program is generated twice.

use std::cell::{Cell, RefCell};
use std::collections::{BTreeMap, VecDeque};
use std::rc::Rc;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::error::Result;
use crate::eval::{evaluate, goal_distance, CostVector, Costs, EvalConfig, Performance};
use crate::interp::{Executor, Halt, RunOptions, RunSummary};
use crate::model::{Action, ContentCall, Goal, GpProblem, MachineState, Primitive, Ptr, Schema};
use crate::program::{legal_goto_target, Condition, Instruction, Program};

/// Instructions available to the search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vocabulary {
    actions: Vec<Action>,
    conditions: Vec<Condition>,
    allow_end: bool,
}

impl Vocabulary {
    pub fn new(actions: Vec<Action>, conditions: Vec<Condition>, allow_end: bool) -> Self {
        Vocabulary {
            actions,
            conditions,
            allow_end,
        }
    }

    /// All primitives over `pointer_count` pointers followed by every
    /// instantiation of `schemas`, all six conditions and `end`.
    ///
    /// `cmp(z,z)` and `set(z,z)` are no-ops and left out, as is the second
    /// argument order of symmetric schemas.
    pub fn full(schemas: &[Schema], pointer_count: usize) -> Self {
        let ptrs: Vec<Ptr> = (0..pointer_count as u8).map(Ptr).collect();
        let pairs: Vec<(Ptr, Ptr)> = ptrs
            .iter()
            .flat_map(|&a| ptrs.iter().map(move |&b| (a, b)))
            .filter(|(a, b)| a != b)
            .collect();
        let mut actions = Vec::new();
        actions.extend(ptrs.iter().map(|&z| Action::Primitive(Primitive::Inc(z))));
        actions.extend(ptrs.iter().map(|&z| Action::Primitive(Primitive::Dec(z))));
        actions.extend(
            pairs
                .iter()
                .map(|&(a, b)| Action::Primitive(Primitive::Cmp(a, b))),
        );
        actions.extend(
            pairs
                .iter()
                .map(|&(a, b)| Action::Primitive(Primitive::CmpContent(a, b))),
        );
        actions.extend(
            pairs
                .iter()
                .map(|&(a, b)| Action::Primitive(Primitive::Set(a, b))),
        );
        for &s in schemas {
            match s.arity() {
                1 => actions.extend(
                    ptrs.iter()
                        .map(|&z| Action::Content(ContentCall::unary(s, z))),
                ),
                _ => actions.extend(
                    pairs
                        .iter()
                        .filter(|(a, b)| !s.symmetric() || a < b)
                        .map(|&(a, b)| Action::Content(ContentCall::binary(s, a, b))),
                ),
            }
        }
        Vocabulary {
            actions,
            conditions: Condition::ALL.to_vec(),
            allow_end: true,
        }
    }

    pub fn for_problem(problem: &GpProblem) -> Self {
        Self::full(&problem.schemas, problem.pointer_count)
    }

    pub fn actions(&self) -> &[Action] {
        &self.actions
    }

    pub fn conditions(&self) -> &[Condition] {
        &self.conditions
    }

    pub fn allow_end(&self) -> bool {
        self.allow_end
    }

    /// Instructions that may be placed at `line` of an `n`-line program:
    /// actions, then gotos by (target, condition), then `end`.
    pub fn candidates(&self, line: usize, n: usize) -> Vec<Instruction> {
        let mut out: Vec<Instruction> = self
            .actions
            .iter()
            .map(|&a| Instruction::Action(a))
            .collect();
        for target in (0..n).filter(|&t| legal_goto_target(line, t, n)) {
            out.extend(self.conditions.iter().map(|&cond| Instruction::Goto {
                target: target as u16,
                cond,
            }));
        }
        if self.allow_end {
            out.push(Instruction::End);
        }
        out
    }
}

/// Candidate instructions for an undefined line of `program`.
pub fn candidate_instructions(
    program: &Program,
    line: usize,
    vocab: &Vocabulary,
) -> Vec<Instruction> {
    debug_assert!(program.line(line).is_undefined() && line + 1 < program.len());
    vocab.candidates(line, program.len())
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Budget {
    pub time: Option<Duration>,
    pub max_evaluated: Option<u64>,
}

impl Budget {
    pub const DEFAULT_TIME: Duration = Duration::from_secs(3600);
}

/// Default step cap per execution while searching. Training instances are
/// small, so honest candidates finish far below it.
pub const SEARCH_MAX_STEPS: u64 = 10_000;

/// Order among nodes of equal cost.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum TieBreak {
    /// Oldest node first: ascending generation number.
    #[default]
    Fifo,
    /// Newest node first.
    Lifo,
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub tie_break: TieBreak,
    pub eval: EvalConfig,
    pub budget: Budget,
    pub run: RunOptions,
    /// Worker threads for child evaluation; results do not depend on it.
    pub threads: usize,
}

impl SearchConfig {
    pub fn new(eval: EvalConfig) -> Self {
        SearchConfig {
            eval,
            budget: Budget {
                time: Some(Budget::DEFAULT_TIME),
                max_evaluated: None,
            },
            run: RunOptions {
                detect_revisit: true,
                max_steps: SEARCH_MAX_STEPS,
                record_plan: false,
            },
            threads: 1,
            tie_break: TieBreak::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub expanded: u64,
    pub evaluated: u64,
    pub dead_ends: u64,
    pub elapsed: Duration,
    pub peak_open: usize,
    /// Largest number of simultaneously alive search nodes.
    pub peak_live: usize,
    /// Largest open list plus children of the expansion in progress.
    pub peak_frontier_bound: usize,
}

impl SearchStats {
    /// Rough peak memory held by search nodes.
    pub fn node_bytes(&self, lines: usize) -> usize {
        let per_node = std::mem::size_of::<SearchNode>()
            + lines * std::mem::size_of::<Instruction>()
            + 4 * std::mem::size_of::<u64>();
        self.peak_live * per_node
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Solved(Program),
    NoSolution,
    BudgetExhausted,
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    pub outcome: Outcome,
    pub stats: SearchStats,
}

/// A generated open program with its cost and the line to program next.
#[derive(Debug)]
pub struct SearchNode {
    pub program: Program,
    pub cost: CostVector,
    pub pcmax: usize,
    _live: LiveToken,
}

#[derive(Debug)]
struct LiveToken(Rc<Cell<usize>>);

impl LiveToken {
    fn new(counter: &Rc<Cell<usize>>) -> Self {
        counter.set(counter.get() + 1);
        LiveToken(counter.clone())
    }
}

impl Drop for LiveToken {
    fn drop(&mut self) {
        self.0.set(self.0.get() - 1);
    }
}

/// Result of running and scoring one generated program.
#[derive(Debug, PartialEq, Eq)]
enum Scored {
    Solution,
    DeadEnd,
    Open { pcmax: usize, costs: Costs },
}

impl Scored {
    fn status(&self) -> Status {
        match self {
            Scored::Solution => Status::Solution,
            Scored::DeadEnd => Status::DeadEnd,
            Scored::Open { pcmax, .. } => Status::Open { pcmax: *pcmax },
        }
    }
}

/// How a generated program fared on the training instances.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Solution,
    DeadEnd,
    /// Every execution ended in the goal or at an undefined line, the
    /// furthest of which is `pcmax`.
    Open {
        pcmax: usize,
    },
}

/// What [`bfgp_with`] reports to its observer.
#[derive(Debug)]
pub enum SearchEvent<'a> {
    /// A program was generated by programming `line` of its parent; the
    /// root has no line.
    Generated {
        program: &'a Program,
        line: Option<usize>,
        status: Status,
    },
    /// `program` was expanded by programming `line`. `live` counts every
    /// search node in memory, the expanded one and the `children` about to
    /// be queued included.
    Expanded {
        program: &'a Program,
        line: usize,
        live: usize,
        open: usize,
        children: usize,
    },
}

thread_local! {
    static EXECUTOR: RefCell<Executor> = RefCell::new(Executor::new());
}

/// Running totals over the executions of one program.
#[derive(Clone, Copy, Debug, Default)]
struct Tally {
    perf: Performance,
    open: bool,
}

impl Tally {
    /// Adds one execution; `None` if it makes the program a dead end.
    fn add(mut self, s: &RunSummary, state: &MachineState, goal: &Goal) -> Option<Tally> {
        match s.halt {
            Halt::EndGoal => {}
            Halt::UndefinedLine => {
                self.open = true;
                self.perf.pcmax = self.perf.pcmax.max(s.halt_line);
                self.perf.goal_distance = self
                    .perf
                    .goal_distance
                    .saturating_add(goal_distance(state, goal));
            }
            _ => return None,
        }
        self.perf.plan_length += s.actions_applied;
        Some(self)
    }

    fn score(tally: Option<Tally>, program: &Program, config: &SearchConfig) -> Result<Scored> {
        Ok(match tally {
            None => Scored::DeadEnd,
            Some(t) if !t.open => Scored::Solution,
            Some(t) => Scored::Open {
                pcmax: t.perf.pcmax,
                costs: evaluate(program, Some(t.perf), &config.eval, 0)?.costs,
            },
        })
    }
}

/// Runs `program` on every instance, stopping at the first failure, and
/// scores it if it is open.
fn score(program: &Program, problem: &GpProblem, config: &SearchConfig) -> Result<Scored> {
    let tally = EXECUTOR.with_borrow_mut(|exec| {
        problem
            .instances
            .iter()
            .try_fold(Tally::default(), |t, inst| {
                let s = exec.execute(program, inst, &config.run, None);
                t.add(&s, exec.state(), &inst.goal)
            })
    });
    Tally::score(tally, program, config)
}

/// An execution of the parent that stopped at the line being programmed.
struct Suspended {
    instance: usize,
    state: MachineState,
    counts: (u64, u64),
}

/// The parent's executions, split into those a child cannot change and
/// those that continue from the programmed line.
struct Snapshot {
    settled: Tally,
    suspended: Vec<Suspended>,
}

impl Snapshot {
    fn take(
        program: &Program,
        line: usize,
        problem: &GpProblem,
        config: &SearchConfig,
    ) -> Snapshot {
        EXECUTOR.with_borrow_mut(|exec| {
            let mut snap = Snapshot {
                settled: Tally::default(),
                suspended: Vec::new(),
            };
            for (t, inst) in problem.instances.iter().enumerate() {
                let s = exec.execute(program, inst, &config.run, None);
                if s.halt == Halt::UndefinedLine && s.halt_line == line {
                    snap.suspended.push(Suspended {
                        instance: t,
                        state: exec.state().clone(),
                        counts: (s.actions_applied, s.gotos),
                    });
                } else {
                    // the parent is open, so nothing else can fail here
                    snap.settled = snap
                        .settled
                        .add(&s, exec.state(), &inst.goal)
                        .expect("parent is open");
                }
            }
            snap
        })
    }

    /// Scores `child`, which differs from the parent only at `line`.
    fn score(
        &self,
        child: &Program,
        line: usize,
        problem: &GpProblem,
        config: &SearchConfig,
    ) -> Result<Scored> {
        let tally = EXECUTOR.with_borrow_mut(|exec| {
            self.suspended.iter().try_fold(self.settled, |t, sus| {
                let inst = &problem.instances[sus.instance];
                let s = exec.resume(child, inst, &config.run, &sus.state, line, sus.counts);
                t.add(&s, exec.state(), &inst.goal)
            })
        });
        Tally::score(tally, child, config)
    }
}

/// Open list: one queue per distinct cost, so that within a bucket the
/// order is the generation order and popping never sifts a large heap.
struct OpenList {
    buckets: BTreeMap<Costs, VecDeque<SearchNode>>,
    len: usize,
    tie_break: TieBreak,
}

impl OpenList {
    fn new(tie_break: TieBreak) -> Self {
        OpenList {
            buckets: BTreeMap::new(),
            len: 0,
            tie_break,
        }
    }

    /// Nodes must arrive in generation order.
    fn push(&mut self, node: SearchNode) {
        self.len += 1;
        match self.buckets.get_mut(&node.cost.costs) {
            Some(q) => q.push_back(node),
            None => {
                self.buckets
                    .insert(node.cost.costs.clone(), VecDeque::from([node]));
            }
        }
    }

    fn pop(&mut self) -> Option<SearchNode> {
        let mut entry = self.buckets.first_entry()?;
        let q = entry.get_mut();
        let node = match self.tie_break {
            TieBreak::Fifo => q.pop_front(),
            TieBreak::Lifo => q.pop_back(),
        };
        if q.is_empty() {
            entry.remove();
        }
        self.len -= 1;
        node
    }

    fn len(&self) -> usize {
        self.len
    }
}

/// Children of one expansion.
pub struct Expansion {
    pub children: Vec<SearchNode>,
    pub solution: Option<Program>,
    pub evaluated: u64,
    pub dead_ends: u64,
}

struct Searcher<'a> {
    problem: &'a GpProblem,
    vocab: &'a Vocabulary,
    config: &'a SearchConfig,
    pool: Option<rayon::ThreadPool>,
    live: Rc<Cell<usize>>,
    next_seq: u64,
}

impl Searcher<'_> {
    fn node(&mut self, program: Program, pcmax: usize, costs: Costs) -> SearchNode {
        let seq = self.next_seq;
        self.next_seq += 1;
        SearchNode {
            program,
            cost: CostVector { costs, seq },
            pcmax,
            _live: LiveToken::new(&self.live),
        }
    }

    fn expand(
        &mut self,
        node: &SearchNode,
        mut observe: Option<&mut (dyn FnMut(&SearchEvent) + '_)>,
    ) -> Result<Expansion> {
        let line = node.pcmax;
        let candidates = candidate_instructions(&node.program, line, self.vocab);
        let (problem, config) = (self.problem, self.config);
        let parent = &node.program;
        let snap = Snapshot::take(parent, line, problem, config);
        // Children are scored in a reused buffer; only those that are kept
        // get their own program.
        let score_in = |scratch: &mut Program, ins: &Instruction| {
            scratch.set_line(line, *ins);
            snap.score(scratch, line, problem, config)
        };
        let scored: Vec<Result<Scored>> = match &self.pool {
            Some(pool) => pool.install(|| {
                candidates
                    .par_iter()
                    .map_init(|| parent.clone(), score_in)
                    .collect()
            }),
            None => {
                let mut scratch = parent.clone();
                candidates
                    .iter()
                    .map(|ins| score_in(&mut scratch, ins))
                    .collect()
            }
        };
        let mut exp = Expansion {
            children: Vec::new(),
            solution: None,
            evaluated: 0,
            dead_ends: 0,
        };
        let mut view = observe.is_some().then(|| parent.clone());
        for (ins, s) in candidates.into_iter().zip(scored) {
            let s = s?;
            if let (Some(f), Some(v)) = (observe.as_deref_mut(), view.as_mut()) {
                v.set_line(line, ins);
                f(&SearchEvent::Generated {
                    program: v,
                    line: Some(line),
                    status: s.status(),
                });
            }
            let program = (!matches!(s, Scored::DeadEnd)).then(|| parent.with_line(line, ins));
            exp.evaluated += 1;
            match (s, program) {
                (Scored::Solution, Some(program)) => {
                    exp.solution = Some(program);
                    break;
                }
                (Scored::Open { pcmax, costs }, Some(program)) => {
                    let child = self.node(program, pcmax, costs);
                    exp.children.push(child);
                }
                _ => exp.dead_ends += 1,
            }
        }
        Ok(exp)
    }
}

/// Searches for an `lines`-line program solving `problem` with the full
/// vocabulary of the problem.
pub fn bfgp(problem: &GpProblem, lines: usize, config: &SearchConfig) -> Result<SearchResult> {
    bfgp_with(
        problem,
        lines,
        &Vocabulary::for_problem(problem),
        config,
        None,
    )
}

/// Same as [`bfgp`] with an explicit vocabulary. `observe`, if given, sees
/// every generated program, the empty root included, in generation order,
/// and the node counts after each expansion.
pub fn bfgp_with(
    problem: &GpProblem,
    lines: usize,
    vocab: &Vocabulary,
    config: &SearchConfig,
    mut observe: Option<&mut dyn FnMut(&SearchEvent)>,
) -> Result<SearchResult> {
    let start = Instant::now();
    let pool = if config.threads > 1 {
        Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(config.threads)
                .build()
                .expect("failed to build search thread pool"),
        )
    } else {
        None
    };
    let mut s = Searcher {
        problem,
        vocab,
        config,
        pool,
        live: Rc::new(Cell::new(0)),
        next_seq: 0,
    };
    let mut stats = SearchStats::default();
    let finish = |outcome, mut stats: SearchStats| {
        stats.elapsed = start.elapsed();
        Ok(SearchResult { outcome, stats })
    };

    let root = Program::empty(lines)?;
    let scored = score(&root, problem, config)?;
    if let Some(f) = observe.as_deref_mut() {
        f(&SearchEvent::Generated {
            program: &root,
            line: None,
            status: scored.status(),
        });
    }
    stats.evaluated = 1;
    let mut open = OpenList::new(config.tie_break);
    match scored {
        Scored::Solution => return finish(Outcome::Solved(root), stats),
        Scored::DeadEnd => return finish(Outcome::NoSolution, stats),
        Scored::Open { pcmax, costs } => open.push(s.node(root, pcmax, costs)),
    }
    stats.peak_open = 1;
    stats.peak_live = 1;
    stats.peak_frontier_bound = 1;

    while let Some(node) = open.pop() {
        if config
            .budget
            .max_evaluated
            .is_some_and(|m| stats.evaluated >= m)
            || config.budget.time.is_some_and(|t| start.elapsed() >= t)
        {
            return finish(Outcome::BudgetExhausted, stats);
        }
        stats.expanded += 1;
        let exp = s.expand(&node, observe.as_deref_mut())?;
        stats.evaluated += exp.evaluated;
        stats.dead_ends += exp.dead_ends;
        stats.peak_live = stats.peak_live.max(s.live.get());
        stats.peak_frontier_bound = stats
            .peak_frontier_bound
            .max(open.len() + 1 + exp.children.len());
        if let Some(f) = observe.as_deref_mut() {
            f(&SearchEvent::Expanded {
                program: &node.program,
                line: node.pcmax,
                live: s.live.get(),
                open: open.len(),
                children: exp.children.len(),
            });
        }
        if let Some(program) = exp.solution {
            return finish(Outcome::Solved(program), stats);
        }
        drop(node);
        for child in exp.children {
            open.push(child);
        }
        stats.peak_open = stats.peak_open.max(open.len());
    }
    finish(Outcome::NoSolution, stats)
}
