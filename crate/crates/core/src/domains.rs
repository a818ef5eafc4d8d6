//! Instance generators and hand-written reference programs for the eight
//! benchmark domains.
//!
//! | domain | layout | goal | schemas | n, \|Z\| |
//! |---|---|---|---|---|
//! | triangular-sum | `[acc=0, k=t]` | `acc = t(t+1)/2` | add, dec | 5, 2 |
//! | corridor | `[pos=0, g]` | `pos = g` | inc, dec | 7, 2 |
//! | reverse | `v[0..L)` | reversed `v` | swap | 7, 3 |
//! | select | `[out=v1, v1..vL]` | `out = min v` | set | 7, 3 |
//! | find | `[count=0, sentinel=0, v1..vL]` | `count = #zeros` | inc | 7, 3 |
//! | fibonacci | `[a=0, b=1, k=t-1]` | `b = Fib(t)` | add, swap, dec | 8, 3 |
//! | gripper | `[robot=0, b1..bn]` | every `b_i = 1` | pick, drop, move | 8, 4 |
//! | sorting | `v[0..L)` | ascending `v` | swap, set | 9, 3 |

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{BaseInstance, Goal, InstanceSpec, Ptr, Schema, Value, VariableSpace};
use crate::program::Program;
use crate::text::parse_program;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Domain {
    TriangularSum,
    Corridor,
    Reverse,
    Select,
    Find,
    Fibonacci,
    Gripper,
    Sorting,
}

impl Domain {
    pub const ALL: [Domain; 8] = [
        Domain::TriangularSum,
        Domain::Corridor,
        Domain::Reverse,
        Domain::Select,
        Domain::Find,
        Domain::Fibonacci,
        Domain::Gripper,
        Domain::Sorting,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Domain::TriangularSum => "triangular-sum",
            Domain::Corridor => "corridor",
            Domain::Reverse => "reverse",
            Domain::Select => "select",
            Domain::Find => "find",
            Domain::Fibonacci => "fibonacci",
            Domain::Gripper => "gripper",
            Domain::Sorting => "sorting",
        }
    }

    pub fn schemas(self) -> Vec<Schema> {
        use Schema::*;
        match self {
            Domain::TriangularSum => vec![Add, Dec],
            Domain::Corridor => vec![Inc, Dec],
            Domain::Reverse => vec![Swap],
            Domain::Select => vec![Set],
            Domain::Find => vec![Inc],
            Domain::Fibonacci => vec![Add, Swap, Dec],
            Domain::Gripper => vec![Pick, Drop, Move],
            Domain::Sorting => vec![Swap, Set],
        }
    }

    /// Program lines used for synthesis.
    pub fn lines(self) -> usize {
        match self {
            Domain::TriangularSum => 5,
            Domain::Corridor | Domain::Reverse | Domain::Select | Domain::Find => 7,
            Domain::Fibonacci | Domain::Gripper => 8,
            Domain::Sorting => 9,
        }
    }

    pub fn pointers(self) -> usize {
        match self {
            Domain::TriangularSum | Domain::Corridor => 2,
            Domain::Gripper => 4,
            _ => 3,
        }
    }

    /// Default validation-set size.
    pub fn validation_count(self) -> usize {
        match self {
            Domain::TriangularSum => 44_709,
            Domain::Corridor | Domain::Gripper => 1_000,
            Domain::Reverse | Domain::Select | Domain::Find => 50,
            Domain::Fibonacci => 33,
            Domain::Sorting => 20,
        }
    }

    pub fn min_size(self) -> usize {
        match self {
            Domain::Corridor | Domain::Select | Domain::Sorting => 2,
            _ => 1,
        }
    }

    /// Sizes of the default training instances.
    pub fn training_sizes(self) -> Vec<usize> {
        match self {
            Domain::TriangularSum => vec![1, 2, 3, 5, 7, 10],
            Domain::Corridor => vec![2, 3, 4, 6, 8, 10, 12],
            Domain::Reverse => vec![2, 3, 4, 5, 6, 7, 8],
            Domain::Select => (2..=11).collect(),
            Domain::Find => vec![1, 2, 3, 4, 5, 6, 7, 8, 9, 10],
            Domain::Fibonacci => vec![2, 3, 4, 5, 6, 7, 8],
            Domain::Gripper => vec![2, 3, 4, 5, 6],
            Domain::Sorting => vec![2, 3, 4, 5, 6],
        }
    }

    /// First `count` sizes of the validation set.
    pub fn validation_sizes(self, count: usize) -> Vec<usize> {
        let start = match self {
            Domain::Reverse | Domain::Select | Domain::Sorting | Domain::Corridor => 2,
            _ => 1,
        };
        (start..start + count).collect()
    }

    pub fn generate(self, size: usize, seed: u64) -> Result<InstanceSpec> {
        generate_instance(self, size, seed)
    }

    /// Canonical text of the hand-written reference program.
    pub fn reference_text(self) -> &'static str {
        match self {
            Domain::TriangularSum => "0. inc(z2)\n1. add(*z1,*z2)\n2. dec(*z2)\n3. goto(1,GT)\n4. end\n",
            Domain::Corridor => "0. inc(z2)\n1. inc(*z1)\n2. dec(*z2)\n3. goto(1,GT)\n4. end\n",
            Domain::Reverse => {
                "0. swap(*z1,*z2)\n1. inc(z1)\n2. dec(z2)\n3. cmp(z2,z1)\n4. goto(0,GE)\n5. end\n"
            }
            Domain::Select => {
                "0. inc(z2)\n1. cmp(*z1,*z2)\n2. goto(4,LE)\n3. set(*z1,*z2)\n4. cmp(z3,z2)\n5. goto(0,GT)\n6. end\n"
            }
            Domain::Find => {
                "0. cmp(*z3,*z2)\n1. goto(3,NE)\n2. inc(*z1)\n3. dec(z3)\n4. cmp(z3,z2)\n5. goto(0,GT)\n6. end\n"
            }
            Domain::Fibonacci => {
                "0. inc(z2)\n1. inc(z3)\n2. inc(z3)\n3. add(*z1,*z2)\n4. swap(*z1,*z2)\n5. dec(*z3)\n6. goto(3,GT)\n7. end\n"
            }
            Domain::Gripper => {
                "0. pick(*z2,*z1)\n1. move(*z1)\n2. drop(*z2,*z1)\n3. move(*z1)\n4. dec(z2)\n5. goto(0,GT)\n6. end\n"
            }
            // exchange sort; longer than the synthesis budget
            Domain::Sorting => concat!(
                "0. set(z2,z1)\n1. inc(z2)\n2. cmp(*z1,*z2)\n3. goto(5,LE)\n4. swap(*z1,*z2)\n",
                "5. cmp(z3,z2)\n6. goto(1,GT)\n7. inc(z1)\n8. cmp(z3,z1)\n9. goto(0,GT)\n10. end\n"
            ),
        }
    }

    pub fn reference_program(self) -> Program {
        parse_program(self.reference_text(), None, self.pointers())
            .expect("reference programs are well formed")
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Domain {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "t-sum" | "tsum" => Ok(Domain::TriangularSum),
            _ => Domain::ALL
                .into_iter()
                .find(|d| d.name() == s)
                .ok_or_else(|| Error::UnknownDomain(s.to_string())),
        }
    }
}

pub fn reference_program(domain: Domain) -> Program {
    domain.reference_program()
}

fn rng_for(domain: Domain, size: usize, seed: u64) -> ChaCha8Rng {
    let mix = seed
        .wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add((size as u64).wrapping_mul(0xBF58_476D_1CE4_E5B9))
        .wrapping_add(domain as u64);
    ChaCha8Rng::seed_from_u64(mix)
}

pub fn triangular(t: Value) -> Value {
    t * (t + 1) / 2
}

pub fn fibonacci(t: u32) -> Value {
    let (mut a, mut b) = (0i64, 1i64);
    for _ in 1..t {
        (a, b) = (b, a + b);
    }
    if t == 0 {
        0
    } else {
        b
    }
}

fn spec(domain: Domain, base: BaseInstance, pointer_init: Vec<(Ptr, usize)>) -> InstanceSpec {
    InstanceSpec {
        domain: domain.name().to_string(),
        base,
        pointer_init,
    }
}

fn indexed(values: impl IntoIterator<Item = Value>) -> Goal {
    Goal(values.into_iter().enumerate().collect())
}

const NATURAL: (Value, Value) = (0, Value::MAX);

fn build(init: Vec<Value>, goal: Goal, bounds: &[(usize, Value, Value)]) -> BaseInstance {
    let space =
        VariableSpace::with_bounds(init.len(), bounds).expect("generator bounds are consistent");
    BaseInstance::new(space, init, goal).expect("generated instances are consistent")
}

/// A reverse instance over given values, with `z2` on the last element.
pub fn reverse_instance(values: &[Value]) -> InstanceSpec {
    let goal = indexed(values.iter().rev().copied());
    let base = build(values.to_vec(), goal, &[]);
    spec(Domain::Reverse, base, vec![(Ptr(1), values.len() - 1)])
}

/// Generates one instance; deterministic in `(domain, size, seed)`.
pub fn generate_instance(domain: Domain, size: usize, seed: u64) -> Result<InstanceSpec> {
    if size < domain.min_size() {
        return Err(Error::SizeOutOfRange {
            domain: domain.name(),
            size,
            min: domain.min_size(),
        });
    }
    let mut rng = rng_for(domain, size, seed);
    let n = size;
    let s = match domain {
        Domain::TriangularSum => {
            let t = n as Value;
            let base = build(
                vec![0, t],
                Goal(vec![(0, triangular(t))]),
                &[(0, NATURAL.0, NATURAL.1), (1, NATURAL.0, NATURAL.1)],
            );
            spec(domain, base, vec![])
        }
        Domain::Corridor => {
            let hi = n as Value - 1;
            let g = rng.gen_range(1..=hi);
            let base = build(vec![0, g], Goal(vec![(0, g)]), &[(0, 0, hi), (1, 0, hi)]);
            spec(domain, base, vec![])
        }
        Domain::Reverse => {
            let values: Vec<Value> = (0..n).map(|_| rng.gen_range(1..=99)).collect();
            reverse_instance(&values)
        }
        Domain::Select => {
            let values: Vec<Value> = (0..n).map(|_| rng.gen_range(0..=19)).collect();
            let min = *values.iter().min().expect("non-empty");
            let mut init = vec![values[0]];
            init.extend(&values);
            spec(
                domain,
                build(init, Goal(vec![(0, min)]), &[]),
                vec![(Ptr(1), 1), (Ptr(2), n)],
            )
        }
        Domain::Find => {
            let values: Vec<Value> = (0..n)
                .map(|_| {
                    if rng.gen_range(0..3) == 0 {
                        0
                    } else {
                        rng.gen_range(1..=9)
                    }
                })
                .collect();
            let zeros = values.iter().filter(|&&v| v == 0).count() as Value;
            let mut init = vec![0, 0];
            init.extend(&values);
            let mut bounds = vec![(0, 0, n as Value), (1, 0, 0)];
            bounds.extend((2..n + 2).map(|i| (i, 0, 9)));
            spec(
                domain,
                build(init, Goal(vec![(0, zeros)]), &bounds),
                vec![(Ptr(1), 1), (Ptr(2), n + 1)],
            )
        }
        Domain::Fibonacci => {
            let base = build(
                vec![0, 1, n as Value - 1],
                Goal(vec![(1, fibonacci(n as u32))]),
                &[],
            );
            spec(domain, base, vec![])
        }
        Domain::Gripper => {
            let mut bounds = vec![(0, 0, 1)];
            bounds.extend((1..=n).map(|i| (i, 0, 2)));
            let goal = Goal((1..=n).map(|i| (i, 1)).collect());
            spec(
                domain,
                build(vec![0; n + 1], goal, &bounds),
                vec![(Ptr(1), n)],
            )
        }
        Domain::Sorting => {
            let values: Vec<Value> = (0..n).map(|_| rng.gen_range(0..=99)).collect();
            let mut sorted = values.clone();
            sorted.sort_unstable();
            spec(
                domain,
                build(values, indexed(sorted), &[]),
                vec![(Ptr(2), n - 1)],
            )
        }
    };
    Ok(s)
}

#[derive(Clone, Debug)]
pub struct Suite {
    pub training: Vec<InstanceSpec>,
    pub validation: Vec<InstanceSpec>,
}

/// Stream offset separating validation seeds from training seeds.
const VALIDATION_STREAM: u64 = 0x005E_ED0F_0A11;

/// Training instances use the domain's training sizes (first
/// `training_count` of them), validation instances the first
/// `validation_count` validation sizes. The two draw from different seed
/// streams.
pub fn build_suite(
    domain: Domain,
    training_count: usize,
    validation_count: usize,
    seed: u64,
) -> Result<Suite> {
    let training = domain
        .training_sizes()
        .into_iter()
        .take(training_count)
        .map(|s| generate_instance(domain, s, seed))
        .collect::<Result<Vec<_>>>()?;
    let validation = domain
        .validation_sizes(validation_count)
        .into_iter()
        .map(|s| generate_instance(domain, s, seed ^ VALIDATION_STREAM))
        .collect::<Result<Vec<_>>>()?;
    Ok(Suite {
        training,
        validation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interp::{run, Halt, RunOptions};

    #[test]
    fn names_round_trip() {
        for d in Domain::ALL {
            assert_eq!(d.name().parse::<Domain>().unwrap(), d);
        }
        assert_eq!("t-sum".parse::<Domain>().unwrap(), Domain::TriangularSum);
        assert!("blocks".parse::<Domain>().is_err());
    }

    #[test]
    fn reverse_figure_instance() {
        let s = reverse_instance(&[6, 3, 4, 2, 5, 1]);
        assert_eq!(
            s.base.goal,
            Goal(vec![(0, 1), (1, 5), (2, 2), (3, 4), (4, 3), (5, 6)])
        );
        assert_eq!(s.extend(3).unwrap().init.pointers, vec![0, 5, 0]);
    }

    #[test]
    fn small_generated_instances() {
        let t = generate_instance(Domain::TriangularSum, 3, 0).unwrap();
        assert_eq!(t.base.init, vec![0, 3]);
        assert_eq!(t.base.goal, Goal(vec![(0, 6)]));
        let f = generate_instance(Domain::Fibonacci, 3, 0).unwrap();
        assert_eq!(f.base.init, vec![0, 1, 2]);
        assert_eq!(f.base.goal, Goal(vec![(1, 2)]));
    }

    #[test]
    fn size_checks() {
        assert!(matches!(
            generate_instance(Domain::Select, 1, 0),
            Err(Error::SizeOutOfRange { .. })
        ));
        assert!(generate_instance(Domain::Reverse, 0, 0).is_err());
    }

    #[test]
    fn deterministic_generation() {
        for d in Domain::ALL {
            assert_eq!(
                generate_instance(d, 7, 42).unwrap(),
                generate_instance(d, 7, 42).unwrap()
            );
        }
        let a = build_suite(Domain::Sorting, 5, 20, 9).unwrap();
        let b = build_suite(Domain::Sorting, 5, 20, 9).unwrap();
        assert_eq!(a.validation, b.validation);
        assert_eq!(a.training, b.training);
    }

    #[test]
    fn suite_sizes() {
        let s = build_suite(Domain::Reverse, 10, 50, 1).unwrap();
        let lens: Vec<usize> = s.validation.iter().map(|i| i.base.space.count()).collect();
        assert_eq!(lens, (2..=51).collect::<Vec<_>>());
        let s = build_suite(Domain::Fibonacci, 10, 33, 1).unwrap();
        let ts: Vec<Value> = s.validation.iter().map(|i| i.base.init[2] + 1).collect();
        assert_eq!(ts, (1..=33).collect::<Vec<_>>());
    }

    #[test]
    fn references_fit_budgets() {
        for d in Domain::ALL {
            let p = d.reference_program();
            if d != Domain::Sorting {
                assert!(p.len() <= d.lines(), "{d}: {} lines", p.len());
            }
            assert!(p.max_pointer().unwrap() < d.pointers());
        }
        assert_eq!(Domain::Sorting.reference_program().len(), 11);
    }

    #[test]
    fn references_solve_validation_sizes() {
        for d in Domain::ALL {
            let count = d.validation_count().min(60);
            let suite = build_suite(d, 10, count, 3).unwrap();
            let p = d.reference_program();
            for s in suite.training.iter().chain(&suite.validation) {
                let r = run(&p, &s.extend(d.pointers()).unwrap(), &RunOptions::default());
                assert_eq!(r.halt, Halt::EndGoal, "{d} size {}", s.base.space.count());
            }
        }
    }
}
