//! States, actions and instances of classical planning extended with a
//! pointer RAM.
//!
//! An instance owns a vector of integer state variables. The extension adds
//! `|Z|` pointers, each ranging over the variable indices `[0, |X|)`, and two
//! flags (zero and carry) holding the outcome of the last result-producing
//! operation. Content actions take pointers as arguments and act on the
//! variables they point to.

use std::fmt;

use crate::error::{Error, Result};

pub type Value = i64;

/// A pointer register, stored 0-based and printed 1-based (`z1` is index 0).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ptr(pub u8);

impl Ptr {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Ptr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "z{}", self.0 as usize + 1)
    }
}

/// Zero and carry flags. They can never both be set.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Flags {
    pub zero: bool,
    pub carry: bool,
}

impl Flags {
    #[inline]
    pub fn from_result(res: Value) -> Self {
        Flags {
            zero: res == 0,
            carry: res > 0,
        }
    }

    #[inline]
    pub(crate) fn bits(self) -> i64 {
        (self.zero as i64) | ((self.carry as i64) << 1)
    }
}

/// `y_z := res == 0`, `y_c := res > 0`.
#[inline]
pub fn update_flags(res: Value) -> Flags {
    Flags::from_result(res)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Bounds {
    pub lo: Value,
    pub hi: Value,
}

impl Bounds {
    #[inline]
    pub fn contains(&self, v: Value) -> bool {
        self.lo <= v && v <= self.hi
    }
}

/// The original state variables of an instance and their optional bounds.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VariableSpace {
    count: usize,
    bounds: Vec<Option<Bounds>>,
}

impl VariableSpace {
    pub fn new(count: usize) -> Result<Self> {
        if count == 0 {
            return Err(Error::EmptySpace);
        }
        Ok(VariableSpace {
            count,
            bounds: vec![None; count],
        })
    }

    /// Builds a space where every listed variable gets inclusive bounds.
    pub fn with_bounds(count: usize, bounds: &[(usize, Value, Value)]) -> Result<Self> {
        let mut space = Self::new(count)?;
        for &(index, lo, hi) in bounds {
            space.set_bounds(index, lo, hi)?;
        }
        Ok(space)
    }

    pub fn set_bounds(&mut self, index: usize, lo: Value, hi: Value) -> Result<()> {
        if index >= self.count {
            return Err(Error::GoalIndex {
                index,
                count: self.count,
            });
        }
        if lo > hi {
            return Err(Error::InvertedBounds { index, lo, hi });
        }
        self.bounds[index] = Some(Bounds { lo, hi });
        Ok(())
    }

    #[inline]
    pub fn count(&self) -> usize {
        self.count
    }

    #[inline]
    pub fn bounds(&self, index: usize) -> Option<Bounds> {
        self.bounds[index]
    }

    pub fn bounded(&self) -> impl Iterator<Item = (usize, Bounds)> + '_ {
        self.bounds
            .iter()
            .enumerate()
            .filter_map(|(i, b)| b.map(|b| (i, b)))
    }

    #[inline]
    fn admits(&self, index: usize, v: Value) -> bool {
        self.bounds[index].is_none_or(|b| b.contains(v))
    }
}

/// Valuation of the extended variable set: original variables, flags and
/// pointers.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct MachineState {
    pub vars: Vec<Value>,
    pub flags: Flags,
    pub pointers: Vec<usize>,
}

impl MachineState {
    #[inline]
    pub fn deref(&self, p: Ptr) -> Value {
        self.vars[self.pointers[p.index()]]
    }
}

/// The five pointer primitives.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Primitive {
    Inc(Ptr),
    Dec(Ptr),
    Cmp(Ptr, Ptr),
    CmpContent(Ptr, Ptr),
    Set(Ptr, Ptr),
}

impl Primitive {
    pub fn pointers(&self) -> impl Iterator<Item = Ptr> {
        let (a, b) = match *self {
            Primitive::Inc(a) | Primitive::Dec(a) => (a, None),
            Primitive::Cmp(a, b) | Primitive::CmpContent(a, b) | Primitive::Set(a, b) => {
                (a, Some(b))
            }
        };
        std::iter::once(a).chain(b)
    }

    /// Applies the primitive in place. Returns `false` (leaving `state`
    /// untouched) when a pointer would leave `[0, |X|)`.
    #[inline]
    pub(crate) fn apply_mut(self, state: &mut MachineState) -> bool {
        let size = state.vars.len() as i64;
        let res = match self {
            Primitive::Inc(z) => {
                let v = state.pointers[z.index()] as i64 + 1;
                if v >= size {
                    return false;
                }
                state.pointers[z.index()] = v as usize;
                v
            }
            Primitive::Dec(z) => {
                let v = state.pointers[z.index()] as i64 - 1;
                if v < 0 {
                    return false;
                }
                state.pointers[z.index()] = v as usize;
                v
            }
            Primitive::Cmp(a, b) => {
                state.pointers[a.index()] as i64 - state.pointers[b.index()] as i64
            }
            Primitive::CmpContent(a, b) => {
                match state.deref(a).checked_sub(state.deref(b)) {
                    Some(d) => d,
                    // only the sign matters for the flags
                    None => {
                        if state.deref(a) > state.deref(b) {
                            1
                        } else {
                            -1
                        }
                    }
                }
            }
            Primitive::Set(a, b) => {
                let v = state.pointers[b.index()];
                state.pointers[a.index()] = v;
                v as i64
            }
        };
        state.flags = Flags::from_result(res);
        true
    }
}

/// Content-action schemas. Arithmetic schemas report the new value of
/// their first argument as `res`; structural ones leave the flags alone.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Schema {
    Inc,
    Dec,
    Add,
    Sub,
    Set,
    Swap,
    /// `pick(*ball, *robot)`: ball in the robot's room goes to the gripper (2).
    Pick,
    /// `drop(*ball, *robot)`: a held ball is released in the robot's room.
    Drop,
    /// `move(*robot)`: toggles the robot between rooms 0 and 1.
    Move,
}

pub const GRIPPER_HELD: Value = 2;

impl Schema {
    pub const ALL: [Schema; 9] = [
        Schema::Inc,
        Schema::Dec,
        Schema::Add,
        Schema::Sub,
        Schema::Set,
        Schema::Swap,
        Schema::Pick,
        Schema::Drop,
        Schema::Move,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Schema::Inc => "inc",
            Schema::Dec => "dec",
            Schema::Add => "add",
            Schema::Sub => "sub",
            Schema::Set => "set",
            Schema::Swap => "swap",
            Schema::Pick => "pick",
            Schema::Drop => "drop",
            Schema::Move => "move",
        }
    }

    pub fn from_name(name: &str) -> Option<Schema> {
        Schema::ALL.into_iter().find(|s| s.name() == name)
    }

    pub fn arity(self) -> usize {
        match self {
            Schema::Inc | Schema::Dec | Schema::Move => 1,
            _ => 2,
        }
    }

    /// Argument order is irrelevant for symmetric schemas.
    pub fn symmetric(self) -> bool {
        matches!(self, Schema::Swap)
    }

    pub fn declares_result(self) -> bool {
        matches!(
            self,
            Schema::Inc | Schema::Dec | Schema::Add | Schema::Sub | Schema::Set
        )
    }

    /// Applicability and effect over the dereferenced arguments. Returns the
    /// new argument values and the optional `res`.
    #[inline]
    pub fn apply(self, a: Value, b: Value) -> Option<(Value, Value, Option<Value>)> {
        let arith = |v: Option<Value>| v.map(|v| (v, b, Some(v)));
        match self {
            Schema::Inc => arith(a.checked_add(1)),
            Schema::Dec => arith(a.checked_sub(1)),
            Schema::Add => arith(a.checked_add(b)),
            Schema::Sub => arith(a.checked_sub(b)),
            Schema::Set => arith(Some(b)),
            Schema::Swap => Some((b, a, None)),
            Schema::Pick => (a == b && (b == 0 || b == 1)).then_some((GRIPPER_HELD, b, None)),
            Schema::Drop => (a == GRIPPER_HELD && (b == 0 || b == 1)).then_some((b, b, None)),
            Schema::Move => (a == 0 || a == 1).then_some((1 - a, b, None)),
        }
    }
}

/// A content action instantiated over pointers. Unary schemas repeat their
/// single argument in both slots so that equality and hashing stay canonical.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ContentCall {
    pub schema: Schema,
    args: [Ptr; 2],
}

impl ContentCall {
    pub fn unary(schema: Schema, a: Ptr) -> Self {
        debug_assert_eq!(schema.arity(), 1);
        ContentCall {
            schema,
            args: [a, a],
        }
    }

    pub fn binary(schema: Schema, a: Ptr, b: Ptr) -> Self {
        debug_assert_eq!(schema.arity(), 2);
        ContentCall {
            schema,
            args: [a, b],
        }
    }

    pub fn new(schema: Schema, args: &[Ptr]) -> Option<Self> {
        match (schema.arity(), args) {
            (1, &[a]) => Some(Self::unary(schema, a)),
            (2, &[a, b]) => Some(Self::binary(schema, a, b)),
            _ => None,
        }
    }

    pub fn args(&self) -> &[Ptr] {
        &self.args[..self.schema.arity()]
    }

    #[inline]
    pub(crate) fn apply_mut(self, state: &mut MachineState, space: &VariableSpace) -> bool {
        let ia = state.pointers[self.args[0].index()];
        let ib = state.pointers[self.args[1].index()];
        let Some((na, nb, res)) = self.schema.apply(state.vars[ia], state.vars[ib]) else {
            return false;
        };
        if !space.admits(ia, na) {
            return false;
        }
        if self.schema.arity() == 2 && ia != ib && !space.admits(ib, nb) {
            return false;
        }
        state.vars[ia] = na;
        if self.schema.arity() == 2 {
            state.vars[ib] = nb;
        }
        if let Some(res) = res {
            state.flags = Flags::from_result(res);
        }
        true
    }
}

/// An instantiated action of the extended action set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Action {
    Primitive(Primitive),
    Content(ContentCall),
}

impl Action {
    pub fn is_primitive(&self) -> bool {
        matches!(self, Action::Primitive(_))
    }

    pub fn pointers(&self) -> Vec<Ptr> {
        match self {
            Action::Primitive(p) => p.pointers().collect(),
            Action::Content(c) => c.args().to_vec(),
        }
    }

    #[inline]
    pub(crate) fn apply_mut(self, state: &mut MachineState, space: &VariableSpace) -> bool {
        match self {
            Action::Primitive(p) => p.apply_mut(state),
            Action::Content(c) => c.apply_mut(state, space),
        }
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Action::Primitive(Primitive::Inc(a)) => write!(f, "inc({a})"),
            Action::Primitive(Primitive::Dec(a)) => write!(f, "dec({a})"),
            Action::Primitive(Primitive::Cmp(a, b)) => write!(f, "cmp({a},{b})"),
            Action::Primitive(Primitive::CmpContent(a, b)) => write!(f, "cmp(*{a},*{b})"),
            Action::Primitive(Primitive::Set(a, b)) => write!(f, "set({a},{b})"),
            Action::Content(c) => {
                write!(f, "{}(", c.schema.name())?;
                for (i, a) in c.args().iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "*{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

/// An applied action with the variables its pointer arguments referred to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GroundAction {
    pub action: Action,
    /// Variable indices of the arguments, the first repeated for unary
    /// actions.
    pub vars: [usize; 2],
}

impl GroundAction {
    #[inline]
    pub fn new(action: Action, state: &MachineState) -> Self {
        let (a, b) = match action {
            Action::Content(c) => (c.args[0], c.args[1]),
            Action::Primitive(p) => {
                let mut it = p.pointers();
                let a = it.next().expect("primitives take a pointer");
                (a, it.next().unwrap_or(a))
            }
        };
        GroundAction {
            action,
            vars: [state.pointers[a.index()], state.pointers[b.index()]],
        }
    }
}

/// Content actions print their variables, `swap(x1,x6)`, 1-based like
/// pointers; primitives act on the pointers themselves and print as is.
impl fmt::Display for GroundAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.action {
            Action::Content(c) => {
                let [a, b] = self.vars;
                match c.schema.arity() {
                    1 => write!(f, "{}(x{})", c.schema.name(), a + 1),
                    _ => write!(f, "{}(x{},x{})", c.schema.name(), a + 1, b + 1),
                }
            }
            Action::Primitive(_) => self.action.fmt(f),
        }
    }
}

/// The action could not be applied in the given state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
#[error("action is not applicable")]
pub struct Inapplicable;

/// Applies a pointer primitive, returning the successor state.
pub fn apply_primitive(p: Primitive, state: &MachineState) -> Result<MachineState, Inapplicable> {
    let mut next = state.clone();
    if p.apply_mut(&mut next) {
        Ok(next)
    } else {
        Err(Inapplicable)
    }
}

/// Applies a content action through its pointer arguments.
pub fn apply_content_action(
    call: ContentCall,
    state: &MachineState,
    space: &VariableSpace,
) -> Result<MachineState, Inapplicable> {
    let mut next = state.clone();
    if call.apply_mut(&mut next, space) {
        Ok(next)
    } else {
        Err(Inapplicable)
    }
}

/// A partial state: required values for a subset of the variables.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Goal(pub Vec<(usize, Value)>);

impl Goal {
    pub fn iter(&self) -> impl Iterator<Item = (usize, Value)> + '_ {
        self.0.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

pub fn holds_goal(state: &MachineState, goal: &Goal) -> bool {
    goal.iter().all(|(i, v)| state.vars[i] == v)
}

/// A classical instance before the RAM extension.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BaseInstance {
    pub space: VariableSpace,
    pub init: Vec<Value>,
    pub goal: Goal,
}

impl BaseInstance {
    pub fn new(space: VariableSpace, init: Vec<Value>, goal: Goal) -> Result<Self> {
        if init.len() != space.count() {
            return Err(Error::InitLength {
                expected: space.count(),
                got: init.len(),
            });
        }
        for (index, &value) in init.iter().enumerate() {
            if !space.admits(index, value) {
                return Err(Error::InitOutOfBounds { index, value });
            }
        }
        for (index, _) in goal.iter() {
            if index >= space.count() {
                return Err(Error::GoalIndex {
                    index,
                    count: space.count(),
                });
            }
        }
        Ok(BaseInstance { space, init, goal })
    }

    /// Unbounded variables, given initial values and goal.
    pub fn unbounded(init: Vec<Value>, goal: Goal) -> Result<Self> {
        Self::new(VariableSpace::new(init.len())?, init, goal)
    }
}

/// A base instance together with its non-default pointer initialisations,
/// as stored in instance files.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct InstanceSpec {
    pub domain: String,
    pub base: BaseInstance,
    pub pointer_init: Vec<(Ptr, usize)>,
}

impl InstanceSpec {
    pub fn extend(&self, pointer_count: usize) -> Result<Instance> {
        extend_instance(&self.base, pointer_count, &self.pointer_init)
    }
}

/// An instance extended with pointers and flags.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Instance {
    pub space: VariableSpace,
    pub init: MachineState,
    pub goal: Goal,
}

impl Instance {
    pub fn pointer_count(&self) -> usize {
        self.init.pointers.len()
    }
}

/// Builds the extended instance: flags false, pointers zero unless
/// overridden, goal unchanged.
pub fn extend_instance(
    base: &BaseInstance,
    pointer_count: usize,
    overrides: &[(Ptr, usize)],
) -> Result<Instance> {
    let vars = base.space.count();
    let mut pointers = vec![0; pointer_count];
    for &(p, value) in overrides {
        if p.index() >= pointer_count {
            return Err(Error::PointerIndex {
                pointer: p.index(),
                count: pointer_count,
            });
        }
        if value >= vars {
            return Err(Error::PointerValue {
                pointer: p.index(),
                value,
                vars,
            });
        }
        pointers[p.index()] = value;
    }
    Ok(Instance {
        space: base.space.clone(),
        init: MachineState {
            vars: base.init.clone(),
            flags: Flags::default(),
            pointers,
        },
        goal: base.goal.clone(),
    })
}

/// A set of extended instances sharing content-action schemas and pointers.
#[derive(Clone, Debug)]
pub struct GpProblem {
    pub instances: Vec<Instance>,
    pub schemas: Vec<Schema>,
    pub pointer_count: usize,
}

impl GpProblem {
    pub fn new(
        instances: Vec<Instance>,
        schemas: Vec<Schema>,
        pointer_count: usize,
    ) -> Result<Self> {
        if instances.is_empty() {
            return Err(Error::NoInstances);
        }
        if instances.iter().any(|i| i.pointer_count() != pointer_count) {
            return Err(Error::MixedProblem);
        }
        Ok(GpProblem {
            instances,
            schemas,
            pointer_count,
        })
    }

    /// Extends instance specs with `pointer_count` pointers.
    pub fn from_specs(
        specs: &[InstanceSpec],
        schemas: Vec<Schema>,
        pointer_count: usize,
    ) -> Result<Self> {
        let instances = specs
            .iter()
            .map(|s| s.extend(pointer_count))
            .collect::<Result<Vec<_>>>()?;
        Self::new(instances, schemas, pointer_count)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn state(vars: Vec<Value>, pointers: Vec<usize>) -> MachineState {
        MachineState {
            vars,
            flags: Flags::default(),
            pointers,
        }
    }

    const Z1: Ptr = Ptr(0);
    const Z2: Ptr = Ptr(1);

    #[test]
    fn flag_equations() {
        assert_eq!(
            update_flags(0),
            Flags {
                zero: true,
                carry: false
            }
        );
        assert_eq!(
            update_flags(4),
            Flags {
                zero: false,
                carry: true
            }
        );
        assert_eq!(
            update_flags(-1),
            Flags {
                zero: false,
                carry: false
            }
        );
    }

    #[test]
    fn inc_moves_pointer_and_sets_carry() {
        let s = state(vec![0; 6], vec![3, 0]);
        let n = apply_primitive(Primitive::Inc(Z1), &s).unwrap();
        assert_eq!(n.pointers, vec![4, 0]);
        assert_eq!(
            n.flags,
            Flags {
                zero: false,
                carry: true
            }
        );
        assert_eq!(n.vars, s.vars);
    }

    #[test]
    fn pointer_domain_edges_are_inapplicable() {
        let s = state(vec![0; 6], vec![0, 5]);
        assert_eq!(apply_primitive(Primitive::Dec(Z1), &s), Err(Inapplicable));
        assert_eq!(apply_primitive(Primitive::Inc(Z2), &s), Err(Inapplicable));
    }

    #[test]
    fn cmp_only_touches_flags() {
        let s = state(vec![6, 3, 4, 2, 5, 1], vec![1, 5]);
        let n = apply_primitive(Primitive::Cmp(Z2, Z1), &s).unwrap();
        assert_eq!(n.pointers, s.pointers);
        assert_eq!(n.vars, s.vars);
        assert_eq!(
            n.flags,
            Flags {
                zero: false,
                carry: true
            }
        );
        // *z2 - *z1 = 1 - 3
        let n = apply_primitive(Primitive::CmpContent(Z2, Z1), &s).unwrap();
        assert_eq!(
            n.flags,
            Flags {
                zero: false,
                carry: false
            }
        );
    }

    #[test]
    fn set_copies_pointer() {
        let s = state(vec![0; 6], vec![4, 0]);
        let n = apply_primitive(Primitive::Set(Z1, Z2), &s).unwrap();
        assert_eq!(n.pointers, vec![0, 0]);
        assert_eq!(
            n.flags,
            Flags {
                zero: true,
                carry: false
            }
        );
    }

    #[test]
    fn swap_exchanges_contents_without_flags() {
        let space = VariableSpace::new(6).unwrap();
        let s = state(vec![6, 3, 4, 2, 5, 1], vec![0, 5]);
        let n =
            apply_content_action(ContentCall::binary(Schema::Swap, Z1, Z2), &s, &space).unwrap();
        assert_eq!(n.vars, vec![1, 3, 4, 2, 5, 6]);
        assert_eq!(n.flags, s.flags);
    }

    #[test]
    fn add_reports_new_value() {
        let space = VariableSpace::new(2).unwrap();
        let s = state(vec![0, 5], vec![0, 1]);
        let n = apply_content_action(ContentCall::binary(Schema::Add, Z1, Z2), &s, &space).unwrap();
        assert_eq!(n.vars, vec![5, 5]);
        assert_eq!(
            n.flags,
            Flags {
                zero: false,
                carry: true
            }
        );
    }

    #[test]
    fn gripper_pick_needs_same_room() {
        let space = VariableSpace::with_bounds(2, &[(0, 0, 2), (1, 0, 2)]).unwrap();
        // robot in room B, ball in room A
        let s = state(vec![1, 0], vec![0, 1]);
        let pick = ContentCall::binary(Schema::Pick, Z2, Z1);
        assert!(apply_content_action(pick, &s, &space).is_err());
        let s = state(vec![0, 0], vec![0, 1]);
        let held = apply_content_action(pick, &s, &space).unwrap();
        assert_eq!(held.vars, vec![0, GRIPPER_HELD]);
        let moved =
            apply_content_action(ContentCall::unary(Schema::Move, Z1), &held, &space).unwrap();
        let dropped =
            apply_content_action(ContentCall::binary(Schema::Drop, Z2, Z1), &moved, &space)
                .unwrap();
        assert_eq!(dropped.vars, vec![1, 1]);
    }

    #[test]
    fn bounds_make_actions_inapplicable() {
        let space = VariableSpace::with_bounds(2, &[(0, 0, 3)]).unwrap();
        let s = state(vec![3, 0], vec![0, 1]);
        assert!(apply_content_action(ContentCall::unary(Schema::Inc, Z1), &s, &space).is_err());
        assert!(apply_content_action(ContentCall::unary(Schema::Inc, Z2), &s, &space).is_ok());
    }

    #[test]
    fn overflow_is_inapplicable() {
        let space = VariableSpace::new(2).unwrap();
        let s = state(vec![i64::MAX, 1], vec![0, 1]);
        assert!(
            apply_content_action(ContentCall::binary(Schema::Add, Z1, Z2), &s, &space).is_err()
        );
    }

    #[test]
    fn goal_checks() {
        let goal = Goal((0..6).zip([1, 5, 2, 4, 3, 6]).collect());
        assert!(holds_goal(&state(vec![1, 5, 2, 4, 3, 6], vec![]), &goal));
        assert!(!holds_goal(&state(vec![6, 3, 4, 2, 5, 1], vec![]), &goal));
        assert!(holds_goal(&state(vec![7], vec![]), &Goal::default()));
    }

    #[test]
    fn extension_defaults_and_overrides() {
        let base = BaseInstance::unbounded(vec![6, 3, 4, 2, 5, 1], Goal::default()).unwrap();
        let inst = extend_instance(&base, 3, &[(Z2, 5)]).unwrap();
        assert_eq!(inst.init.pointers, vec![0, 5, 0]);
        assert_eq!(inst.init.flags, Flags::default());
        let inst = extend_instance(&base, 2, &[]).unwrap();
        assert_eq!(inst.init.pointers, vec![0, 0]);
        assert!(matches!(
            extend_instance(&base, 3, &[(Ptr(8), 1)]),
            Err(Error::PointerIndex {
                pointer: 8,
                count: 3
            })
        ));
        assert!(matches!(
            extend_instance(&base, 3, &[(Z1, 6)]),
            Err(Error::PointerValue { .. })
        ));
    }

    #[test]
    fn space_validation() {
        assert_eq!(VariableSpace::new(0), Err(Error::EmptySpace));
        assert!(matches!(
            VariableSpace::with_bounds(2, &[(0, 3, 1)]),
            Err(Error::InvertedBounds { .. })
        ));
        assert!(matches!(
            BaseInstance::unbounded(vec![1, 2], Goal(vec![(2, 0)])),
            Err(Error::GoalIndex { index: 2, count: 2 })
        ));
    }
}
