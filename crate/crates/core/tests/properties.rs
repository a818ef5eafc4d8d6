use proptest::prelude::*;

use bfgp_core::interp::{step, ProgramState, Step};
use bfgp_core::model::{update_flags, BaseInstance, ContentCall, Goal, Primitive, VariableSpace};
use bfgp_core::{
    parse_instance, parse_program, serialize_instance, serialize_program, Action, Condition, Flags,
    Instance, InstanceSpec, Instruction, MachineState, Program, Ptr, Schema,
};

const POINTERS: usize = 3;

fn primitive() -> impl Strategy<Value = Primitive> {
    let z = || (0..POINTERS as u8).prop_map(Ptr);
    prop_oneof![
        z().prop_map(Primitive::Inc),
        z().prop_map(Primitive::Dec),
        (z(), z()).prop_map(|(a, b)| Primitive::Cmp(a, b)),
        (z(), z()).prop_map(|(a, b)| Primitive::CmpContent(a, b)),
        (z(), z()).prop_map(|(a, b)| Primitive::Set(a, b)),
    ]
}

/// Values including the extremes, where content differences overflow.
fn value() -> impl Strategy<Value = i64> {
    prop_oneof![4 => -5i64..5, 1 => any::<i64>(), 1 => Just(i64::MIN), 1 => Just(i64::MAX)]
}

fn machine() -> impl Strategy<Value = MachineState> {
    (1usize..8).prop_flat_map(|len| {
        (
            prop::collection::vec(value(), len),
            prop::collection::vec(0..len, POINTERS),
            any::<(bool, bool)>(),
        )
            .prop_map(|(vars, pointers, (zero, carry))| MachineState {
                vars,
                pointers,
                flags: Flags {
                    zero,
                    carry: carry && !zero,
                },
            })
    })
}

/// The `res` a primitive defines, computed without overflow.
fn defining_res(p: Primitive, before: &MachineState, after: &MachineState) -> i128 {
    let ptr = |s: &MachineState, z: Ptr| s.pointers[z.index()] as i128;
    let val = |z: Ptr| before.vars[before.pointers[z.index()]] as i128;
    match p {
        Primitive::Inc(z) | Primitive::Dec(z) | Primitive::Set(z, _) => ptr(after, z),
        Primitive::Cmp(a, b) => ptr(before, a) - ptr(before, b),
        Primitive::CmpContent(a, b) => val(a) - val(b),
    }
}

fn single_line(a: Action) -> Program {
    Program::from_lines(vec![Instruction::Action(a), Instruction::End]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    // 1000 cases of 100 chained applications each
    #[test]
    fn primitives_follow_flag_equations(start in machine(), prims in prop::collection::vec(primitive(), 100)) {
        let vars = start.vars.len();
        let instance = Instance {
            space: VariableSpace::new(vars).unwrap(),
            init: start.clone(),
            goal: Goal(vec![]),
        };
        let mut state = start;
        for p in prims {
            let program = single_line(Action::Primitive(p));
            let before = state.clone();
            match step(&program, &instance, &ProgramState { line: 0, machine: state.clone() }) {
                Step::Next(next) => {
                    let after = next.machine;
                    prop_assert!(!(after.flags.zero && after.flags.carry));
                    let res = defining_res(p, &before, &after);
                    prop_assert_eq!(after.flags.zero, res == 0);
                    prop_assert_eq!(after.flags.carry, res > 0);
                    if let Ok(r) = i64::try_from(res) {
                        prop_assert_eq!(after.flags, update_flags(r));
                    }
                    prop_assert_eq!(&after.vars, &before.vars);
                    prop_assert!(after.pointers.iter().all(|&v| v < vars));
                    state = after;
                }
                Step::Halt(h) => {
                    // only pointer moves off either end are inapplicable
                    let z = match p {
                        Primitive::Inc(z) | Primitive::Dec(z) => z,
                        _ => return Err(TestCaseError::fail(format!("{p:?} halted with {h:?}"))),
                    };
                    let v = before.pointers[z.index()];
                    prop_assert!(matches!(p, Primitive::Inc(_)) && v + 1 == vars || matches!(p, Primitive::Dec(_)) && v == 0);
                }
            }
        }
    }

    #[test]
    fn content_actions_respect_bounds(
        start in machine(),
        schema in prop::sample::select(vec![Schema::Inc, Schema::Dec, Schema::Add, Schema::Sub, Schema::Set, Schema::Swap]),
        a in 0..POINTERS as u8,
        b in 0..POINTERS as u8,
        lo in -3i64..0,
        hi in 0i64..3,
    ) {
        let vars = start.vars.len();
        let mut init = start.clone();
        for v in &mut init.vars {
            *v = (*v).clamp(lo, hi);
        }
        let bounds: Vec<_> = (0..vars).map(|i| (i, lo, hi)).collect();
        let instance = Instance {
            space: VariableSpace::with_bounds(vars, &bounds).unwrap(),
            init: init.clone(),
            goal: Goal(vec![]),
        };
        let call = match schema.arity() {
            1 => ContentCall::unary(schema, Ptr(a)),
            _ => ContentCall::binary(schema, Ptr(a), Ptr(b)),
        };
        let program = single_line(Action::Content(call));
        if let Step::Next(next) = step(&program, &instance, &ProgramState { line: 0, machine: init.clone() }) {
            prop_assert!(next.machine.vars.iter().all(|&v| lo <= v && v <= hi));
            prop_assert_eq!(&next.machine.pointers, &init.pointers);
            if !schema.declares_result() {
                prop_assert_eq!(next.machine.flags, init.flags);
            }
        }
    }
}

fn instruction(line: usize, n: usize) -> BoxedStrategy<Instruction> {
    let z = || (0..POINTERS as u8).prop_map(Ptr);
    let action = prop_oneof![
        primitive().prop_map(Action::Primitive),
        (
            prop::sample::select(vec![Schema::Inc, Schema::Dec, Schema::Move]),
            z()
        )
            .prop_map(|(s, a)| Action::Content(ContentCall::unary(s, a))),
        (
            prop::sample::select(vec![
                Schema::Add,
                Schema::Sub,
                Schema::Set,
                Schema::Swap,
                Schema::Pick
            ]),
            z(),
            z()
        )
            .prop_map(|(s, a, b)| Action::Content(ContentCall::binary(s, a, b))),
    ];
    let targets: Vec<u16> = (0..n)
        .filter(|&t| t < line || (t > line + 1 && t < n))
        .map(|t| t as u16)
        .collect();
    let mut options = vec![
        Just(Instruction::Undefined).boxed(),
        action.prop_map(Instruction::Action).boxed(),
    ];
    options.push(Just(Instruction::End).boxed());
    if !targets.is_empty() {
        options.push(
            (
                prop::sample::select(targets),
                prop::sample::select(Condition::ALL.to_vec()),
            )
                .prop_map(|(target, cond)| Instruction::Goto { target, cond })
                .boxed(),
        );
    }
    prop::strategy::Union::new(options).boxed()
}

fn program() -> impl Strategy<Value = Program> {
    (1usize..10).prop_flat_map(|n| {
        let body: Vec<_> = (0..n - 1).map(|i| instruction(i, n)).collect();
        body.prop_map(|mut lines| {
            lines.push(Instruction::End);
            Program::from_lines(lines).unwrap()
        })
    })
}

fn instance_spec() -> impl Strategy<Value = InstanceSpec> {
    (1usize..8).prop_flat_map(|vars| {
        (
            prop::collection::vec(-50i64..50, vars),
            prop::collection::btree_map(0..vars, -50i64..50, 0..=vars),
            prop::collection::btree_map(0..POINTERS as u8, 0..vars, 0..=POINTERS),
            prop::option::of((0..vars, -60i64..-50, 50i64..60)),
        )
            .prop_map(move |(init, goal, ptrs, bound)| {
                let bounds: Vec<_> = bound.into_iter().collect();
                let space = VariableSpace::with_bounds(vars, &bounds).unwrap();
                InstanceSpec {
                    domain: "test".to_string(),
                    base: BaseInstance::new(space, init, Goal(goal.into_iter().collect())).unwrap(),
                    pointer_init: ptrs.into_iter().map(|(p, v)| (Ptr(p), v)).collect(),
                }
            })
    })
}

proptest! {
    #[test]
    fn program_text_round_trips(p in program()) {
        let text = serialize_program(&p);
        let parsed = parse_program(&text, Some(p.len()), POINTERS).unwrap();
        prop_assert_eq!(&parsed, &p);
        prop_assert_eq!(serialize_program(&parsed), text);
    }

    #[test]
    fn instance_text_round_trips(s in instance_spec()) {
        let text = serialize_instance(&s);
        let parsed = parse_instance(&text).unwrap();
        prop_assert_eq!(&parsed, &s);
        prop_assert_eq!(serialize_instance(&parsed), text);
    }

    #[test]
    fn execution_keeps_pointers_in_range(p in program(), s in instance_spec()) {
        let instance = s.extend(POINTERS).unwrap();
        let vars = instance.space.count();
        let mut state = ProgramState { line: 0, machine: instance.init.clone() };
        for _ in 0..200 {
            match step(&p, &instance, &state) {
                Step::Next(next) => {
                    prop_assert!(next.machine.pointers.iter().all(|&v| v < vars));
                    prop_assert!(!(next.machine.flags.zero && next.machine.flags.carry));
                    prop_assert!(next.line < p.len());
                    state = next;
                }
                Step::Halt(_) => break,
            }
        }
    }
}
