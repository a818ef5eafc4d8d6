//! Toy problems and an exhaustive program enumerator used as an oracle for
//! the search.

#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use bfgp_core::interp::{run_all, ProblemStatus};
use bfgp_core::model::{extend_instance, BaseInstance, Goal};
use bfgp_core::{
    Condition, GpProblem, Halt, Instruction, Program, Ptr, RunOptions, Schema, Vocabulary,
};

/// A small search problem with a restricted vocabulary.
/// Initial values and pointer overrides of one instance.
type StartState = (Vec<i64>, Vec<(Ptr, usize)>);

#[derive(Clone, Debug)]
pub struct Toy {
    pub problem: GpProblem,
    pub vocab: Vocabulary,
    pub lines: usize,
}

impl Toy {
    /// Most instructions any line can hold.
    pub fn widest_line(&self) -> usize {
        (0..self.lines - 1)
            .map(|l| self.vocab.candidates(l, self.lines).len())
            .max()
            .unwrap_or(0)
    }
}

/// A random toy with `n <= 4` lines, at most two pointers, at most three
/// instances and at most 12 instructions per line. Half of the toys take
/// their goals from running a random program, so that many are solvable.
pub fn random_toy(seed: u64) -> Toy {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lines = rng.gen_range(2..=4);
    let pointers = rng.gen_range(1..=2);
    let mut schemas: Vec<Schema> = [
        Schema::Inc,
        Schema::Dec,
        Schema::Add,
        Schema::Swap,
        Schema::Set,
    ]
    .into_iter()
    .filter(|_| rng.gen_bool(0.4))
    .collect();
    if schemas.is_empty() {
        schemas.push(Schema::Inc);
    }
    let conditions: Vec<Condition> = {
        let mut all = Condition::ALL.to_vec();
        all.shuffle(&mut rng);
        all.truncate(rng.gen_range(1..=2));
        all.sort();
        all
    };
    let full = Vocabulary::full(&schemas, pointers);
    let max_gotos = if lines >= 3 { 2 * conditions.len() } else { 0 };
    let mut actions = full.actions().to_vec();
    actions.shuffle(&mut rng);
    actions.truncate(rng.gen_range(1..=(11 - max_gotos).min(actions.len())));
    actions.sort();
    let vocab = Vocabulary::new(actions, conditions, true);

    let vars = rng.gen_range(2..=4);
    let count = rng.gen_range(1..=3);
    let inits: Vec<StartState> = (0..count)
        .map(|_| {
            let init = (0..vars).map(|_| rng.gen_range(0..=3)).collect();
            let mut ptrs = Vec::new();
            for p in 0..pointers as u8 {
                if rng.gen_bool(0.5) {
                    ptrs.push((Ptr(p), rng.gen_range(0..vars)));
                }
            }
            (init, ptrs)
        })
        .collect();
    let instances_for = |goals: &[Goal]| {
        inits
            .iter()
            .zip(goals)
            .map(|((init, ptrs), g)| {
                let base = BaseInstance::unbounded(init.clone(), g.clone()).unwrap();
                extend_instance(&base, pointers, ptrs).unwrap()
            })
            .collect::<Vec<_>>()
    };
    let goal_vars: Vec<usize> = (0..vars).filter(|_| rng.gen_bool(0.5)).collect();
    let goal_vars = if goal_vars.is_empty() {
        vec![0]
    } else {
        goal_vars
    };
    let random_goals: Vec<Goal> = (0..count)
        .map(|_| {
            Goal(
                goal_vars
                    .iter()
                    .map(|&i| (i, rng.gen_range(0..=3)))
                    .collect(),
            )
        })
        .collect();
    let mut problem =
        GpProblem::new(instances_for(&random_goals), schemas.clone(), pointers).unwrap();
    let derive = rng.gen_bool(0.5);
    for _ in 0..if derive { 50 } else { 0 } {
        // goals from the final states of a random complete program
        let body: Vec<Instruction> = (0..lines - 1)
            .map(|l| *vocab.candidates(l, lines).choose(&mut rng).unwrap())
            .chain([Instruction::End])
            .collect();
        let program = Program::from_lines(body).unwrap();
        let opts = RunOptions {
            max_steps: 1000,
            ..RunOptions::default()
        };
        let (_, records) = run_all(&program, &problem, &opts);
        if records.len() == count
            && records
                .iter()
                .all(|r| matches!(r.halt, Halt::EndGoal | Halt::EndNoGoal))
        {
            let goals: Vec<Goal> = records
                .iter()
                .map(|r| {
                    Goal(
                        goal_vars
                            .iter()
                            .map(|&i| (i, r.final_state.vars[i]))
                            .collect(),
                    )
                })
                .collect();
            problem = GpProblem::new(instances_for(&goals), schemas, pointers).unwrap();
            break;
        }
    }
    Toy {
        problem,
        vocab,
        lines,
    }
}

/// Every complete program of the toy, in enumeration order.
pub fn all_programs(toy: &Toy) -> impl Iterator<Item = Program> + '_ {
    let per_line: Vec<Vec<Instruction>> = (0..toy.lines - 1)
        .map(|l| toy.vocab.candidates(l, toy.lines))
        .collect();
    let total: usize = per_line.iter().map(Vec::len).product();
    (0..total).map(move |mut k| {
        let mut body = Vec::with_capacity(toy.lines);
        for options in &per_line {
            body.push(options[k % options.len()]);
            k /= options.len();
        }
        body.push(Instruction::End);
        Program::from_lines(body).unwrap()
    })
}

/// The first complete program that solves the toy, if any. A partial
/// program that solves it behaves like the complete program with `end` on
/// its unreached lines, so complete programs suffice.
pub fn brute_force(toy: &Toy, opts: &RunOptions) -> Option<Program> {
    all_programs(toy).find(|p| run_all(p, &toy.problem, opts).0 == ProblemStatus::Solution)
}
