//! Planning programs: line-indexed actions, flag-conditioned gotos and `end`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::model::{Action, Flags};

/// Jump conditions over the flags, named after the relation between the
/// last `res` and zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Condition {
    /// `res == 0`: zero
    Eq,
    /// `res != 0`: not zero
    Ne,
    /// `res > 0`: carry
    Gt,
    /// `res < 0`: neither zero nor carry
    Lt,
    /// `res >= 0`: zero or carry
    Ge,
    /// `res <= 0`: not carry
    Le,
}

impl Condition {
    pub const ALL: [Condition; 6] = [
        Condition::Eq,
        Condition::Ne,
        Condition::Gt,
        Condition::Lt,
        Condition::Ge,
        Condition::Le,
    ];

    #[inline]
    pub fn holds(self, f: Flags) -> bool {
        match self {
            Condition::Eq => f.zero,
            Condition::Ne => !f.zero,
            Condition::Gt => f.carry,
            Condition::Lt => !f.zero && !f.carry,
            Condition::Ge => f.zero || f.carry,
            Condition::Le => !f.carry,
        }
    }

    pub fn mnemonic(self) -> &'static str {
        match self {
            Condition::Eq => "EQ",
            Condition::Ne => "NE",
            Condition::Gt => "GT",
            Condition::Lt => "LT",
            Condition::Ge => "GE",
            Condition::Le => "LE",
        }
    }
}

impl FromStr for Condition {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Condition::ALL
            .into_iter()
            .find(|c| c.mnemonic() == s)
            .ok_or_else(|| format!("unknown condition `{s}`"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Instruction {
    Undefined,
    Action(Action),
    /// Jump to `target` when `cond` holds, otherwise fall through.
    Goto {
        target: u16,
        cond: Condition,
    },
    End,
}

impl Instruction {
    pub fn is_undefined(&self) -> bool {
        matches!(self, Instruction::Undefined)
    }
}

impl fmt::Display for Instruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Instruction::Undefined => f.write_str("-- undefined"),
            Instruction::Action(a) => a.fmt(f),
            Instruction::Goto { target, cond } => write!(f, "goto({target},{})", cond.mnemonic()),
            Instruction::End => f.write_str("end"),
        }
    }
}

/// `0 <= target < line` or `line + 1 < target < n`.
#[inline]
pub fn legal_goto_target(line: usize, target: usize, n: usize) -> bool {
    target < line || (target > line + 1 && target < n)
}

/// A sequence of `n` instructions whose last line is always `end`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Program {
    lines: Box<[Instruction]>,
}

fn check_len(n: usize) -> Result<()> {
    match n {
        0 => Err(Error::EmptyProgram),
        n if n > Program::MAX_LINES => Err(Error::TooManyLines {
            lines: n,
            max: Program::MAX_LINES,
        }),
        _ => Ok(()),
    }
}

impl Program {
    /// Goto targets are stored in 16 bits.
    pub const MAX_LINES: usize = 1 << 16;

    /// `n - 1` undefined lines followed by `end`.
    pub fn empty(n: usize) -> Result<Self> {
        check_len(n)?;
        let mut lines = vec![Instruction::Undefined; n];
        lines[n - 1] = Instruction::End;
        Ok(Program {
            lines: lines.into(),
        })
    }

    pub fn from_lines(lines: Vec<Instruction>) -> Result<Self> {
        let n = lines.len();
        check_len(n)?;
        if lines[n - 1] != Instruction::End {
            return Err(Error::MissingEnd { line: n - 1 });
        }
        for (line, ins) in lines.iter().enumerate() {
            if let Instruction::Goto { target, .. } = *ins {
                let target = target as usize;
                if !legal_goto_target(line, target, n) {
                    return Err(Error::IllegalGotoTarget { line, target });
                }
            }
        }
        Ok(Program {
            lines: lines.into(),
        })
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn line(&self, i: usize) -> Instruction {
        self.lines[i]
    }

    pub fn lines(&self) -> &[Instruction] {
        &self.lines
    }

    /// Copy of this program with `line` reprogrammed. `line` must not be the
    /// final `end` and gotos must be legal there.
    pub fn with_line(&self, line: usize, ins: Instruction) -> Program {
        debug_assert!(line + 1 < self.len());
        debug_assert!(match ins {
            Instruction::Goto { target, .. } =>
                legal_goto_target(line, target as usize, self.len()),
            _ => true,
        });
        let mut lines = self.lines.clone();
        lines[line] = ins;
        Program { lines }
    }

    /// In-place version of [`Program::with_line`].
    pub(crate) fn set_line(&mut self, line: usize, ins: Instruction) {
        debug_assert!(line + 1 < self.len());
        self.lines[line] = ins;
    }

    /// Largest pointer index referenced, if any.
    pub fn max_pointer(&self) -> Option<usize> {
        self.lines
            .iter()
            .filter_map(|ins| match ins {
                Instruction::Action(a) => a.pointers().into_iter().map(|p| p.index()).max(),
                _ => None,
            })
            .max()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ContentCall, Primitive, Ptr, Schema};

    #[test]
    fn condition_truth_table() {
        let none = Flags {
            zero: false,
            carry: false,
        };
        let zero = Flags {
            zero: true,
            carry: false,
        };
        let carry = Flags {
            zero: false,
            carry: true,
        };
        let table = [
            (Condition::Eq, [false, true, false]),
            (Condition::Ne, [true, false, true]),
            (Condition::Gt, [false, false, true]),
            (Condition::Lt, [true, false, false]),
            (Condition::Ge, [false, true, true]),
            (Condition::Le, [true, true, false]),
        ];
        for (c, expect) in table {
            assert_eq!(
                [c.holds(none), c.holds(zero), c.holds(carry)],
                expect,
                "{c:?}"
            );
        }
    }

    #[test]
    fn ge_is_negated_lt() {
        // goto(i', !(!y_z & !y_c))
        for zero in [false, true] {
            for carry in [false, true] {
                if zero && carry {
                    continue;
                }
                let f = Flags { zero, carry };
                assert_eq!(Condition::Ge.holds(f), !(!zero && !carry));
            }
        }
    }

    #[test]
    fn goto_window() {
        assert!(legal_goto_target(4, 0, 6));
        assert!(!legal_goto_target(1, 1, 6));
        assert!(!legal_goto_target(1, 2, 6));
        assert!(legal_goto_target(1, 3, 6));
        assert!(!legal_goto_target(1, 6, 6));
        assert!((0..2).all(|t| !legal_goto_target(0, t, 2)));
    }

    #[test]
    fn construction_rules() {
        assert_eq!(Program::empty(0), Err(Error::EmptyProgram));
        let p = Program::empty(3).unwrap();
        assert_eq!(
            p.lines(),
            &[
                Instruction::Undefined,
                Instruction::Undefined,
                Instruction::End
            ]
        );
        assert_eq!(
            Program::from_lines(vec![Instruction::Undefined]),
            Err(Error::MissingEnd { line: 0 })
        );
        let bad = vec![
            Instruction::Undefined,
            Instruction::Goto {
                target: 2,
                cond: Condition::Eq,
            },
            Instruction::Undefined,
            Instruction::End,
        ];
        assert_eq!(
            Program::from_lines(bad),
            Err(Error::IllegalGotoTarget { line: 1, target: 2 })
        );
    }

    #[test]
    fn display_forms() {
        let swap = Action::Content(ContentCall::binary(Schema::Swap, Ptr(0), Ptr(1)));
        assert_eq!(swap.to_string(), "swap(*z1,*z2)");
        assert_eq!(
            Action::Primitive(Primitive::CmpContent(Ptr(0), Ptr(2))).to_string(),
            "cmp(*z1,*z3)"
        );
        assert_eq!(
            Instruction::Goto {
                target: 0,
                cond: Condition::Ge
            }
            .to_string(),
            "goto(0,GE)"
        );
    }
}
