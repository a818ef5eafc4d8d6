//! Text formats for programs and instances.
//!
//! Programs are written one instruction per line as `<idx>. <instr>`, with
//! 1-based pointer names:
//!
//! ```text
//! 0. swap(*z1,*z2)
//! 1. inc(z1)
//! 2. dec(z2)
//! 3. cmp(z2,z1)
//! 4. goto(0,GE)
//! 5. end
//! ```
//!
//! Instances are `key: value` lines (`domain`, `vars`, `init`, `goal`,
//! optional `ptr_init` and `bounds`). `#` starts a comment in both formats.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::model::{
    Action, BaseInstance, ContentCall, Goal, InstanceSpec, Primitive, Ptr, Schema, Value,
    VariableSpace,
};
use crate::program::{Condition, Instruction, Program};

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Lines with comments stripped, paired with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}

struct Arg {
    deref: bool,
    ptr: Ptr,
}

fn parse_arg(s: &str, pointer_count: usize, line: usize) -> Result<Arg> {
    let s = s.trim();
    let (deref, rest) = match s.strip_prefix('*') {
        Some(r) => (true, r.trim()),
        None => (false, s),
    };
    let k: usize = rest
        .strip_prefix('z')
        .and_then(|d| d.parse().ok())
        .filter(|&k| k >= 1)
        .ok_or_else(|| parse_err(line, format!("malformed pointer `{s}`")))?;
    if k > pointer_count {
        return Err(parse_err(
            line,
            format!("pointer z{k} out of range ({pointer_count} pointers)"),
        ));
    }
    Ok(Arg {
        deref,
        ptr: Ptr((k - 1) as u8),
    })
}

fn parse_instruction(body: &str, pointer_count: usize, line: usize) -> Result<Instruction> {
    let body = body.trim();
    if body == "end" {
        return Ok(Instruction::End);
    }
    if body == "-- undefined" {
        return Ok(Instruction::Undefined);
    }
    let (name, args) = body
        .strip_suffix(')')
        .and_then(|b| b.split_once('('))
        .ok_or_else(|| parse_err(line, format!("malformed instruction `{body}`")))?;
    let name = name.trim();
    if name == "goto" {
        let (t, c) = args
            .split_once(',')
            .ok_or_else(|| parse_err(line, "goto needs a target and a condition"))?;
        let target = t
            .trim()
            .parse()
            .map_err(|_| parse_err(line, format!("bad goto target `{t}`")))?;
        let cond: Condition = c.trim().parse().map_err(|e: String| parse_err(line, e))?;
        return Ok(Instruction::Goto { target, cond });
    }
    let args = args
        .split(',')
        .map(|a| parse_arg(a, pointer_count, line))
        .collect::<Result<Vec<_>>>()?;
    let all_plain = args.iter().all(|a| !a.deref);
    let all_deref = args.iter().all(|a| a.deref);
    let ptrs: Vec<Ptr> = args.iter().map(|a| a.ptr).collect();
    let prim = match (name, ptrs.as_slice()) {
        ("inc", &[a]) if all_plain => Some(Primitive::Inc(a)),
        ("dec", &[a]) if all_plain => Some(Primitive::Dec(a)),
        ("cmp", &[a, b]) if all_plain => Some(Primitive::Cmp(a, b)),
        ("cmp", &[a, b]) if all_deref => Some(Primitive::CmpContent(a, b)),
        ("set", &[a, b]) if all_plain => Some(Primitive::Set(a, b)),
        ("cmp", _) => return Err(parse_err(line, "cmp takes two pointers or two contents")),
        _ => None,
    };
    if let Some(p) = prim {
        return Ok(Instruction::Action(Action::Primitive(p)));
    }
    let schema = Schema::from_name(name)
        .ok_or_else(|| parse_err(line, format!("unknown action `{name}`")))?;
    // primitive names need explicit dereferences to denote content actions
    let is_prim_name = matches!(name, "inc" | "dec" | "set");
    if !all_deref && (is_prim_name || !all_plain) {
        return Err(parse_err(
            line,
            format!("`{name}` arguments must all be dereferenced"),
        ));
    }
    let call = ContentCall::new(schema, &ptrs).ok_or_else(|| {
        parse_err(
            line,
            format!("`{name}` takes {} argument(s)", schema.arity()),
        )
    })?;
    Ok(Instruction::Action(Action::Content(call)))
}

/// Parses a program. With `n` given, missing trailing lines become
/// undefined and line `n - 1` becomes `end`; otherwise the listed lines are
/// the whole program.
pub fn parse_program(text: &str, n: Option<usize>, pointer_count: usize) -> Result<Program> {
    let mut lines = Vec::new();
    let mut last_src = 0;
    for (src, l) in content_lines(text) {
        last_src = src;
        let (idx, body) = l
            .split_once('.')
            .ok_or_else(|| parse_err(src, "expected `<index>. <instruction>`"))?;
        let idx: usize = idx
            .trim()
            .parse()
            .map_err(|_| parse_err(src, format!("bad line index `{idx}`")))?;
        if idx != lines.len() {
            return Err(parse_err(
                src,
                format!("expected line index {}, found {idx}", lines.len()),
            ));
        }
        lines.push((src, parse_instruction(body, pointer_count, src)?));
    }
    let n = n.unwrap_or(lines.len());
    if lines.len() > n {
        return Err(parse_err(
            lines[n].0,
            format!("program has more than {n} lines"),
        ));
    }
    if n == 0 {
        return Err(Error::EmptyProgram);
    }
    let mut program: Vec<Instruction> = lines.iter().map(|(_, i)| *i).collect();
    if program.len() < n {
        program.resize(n, Instruction::Undefined);
        program[n - 1] = Instruction::End;
    }
    let src_of = |i: usize| lines.get(i).map_or(last_src, |(s, _)| *s);
    Program::from_lines(program).map_err(|e| match e {
        Error::IllegalGotoTarget { line, target } => parse_err(
            src_of(line),
            format!("illegal goto target {target} at program line {line}"),
        ),
        Error::MissingEnd { line } => parse_err(src_of(line), "the last line must be `end`"),
        e => e,
    })
}

/// Canonical text: `<idx>. <instr>` per line, newline terminated.
pub fn serialize_program(program: &Program) -> String {
    let mut out = String::new();
    for (i, ins) in program.lines().iter().enumerate() {
        let _ = writeln!(out, "{i}. {ins}");
    }
    out
}

fn parse_value(s: &str, line: usize) -> Result<Value> {
    s.trim()
        .parse()
        .map_err(|_| parse_err(line, format!("bad integer `{s}`")))
}

fn parse_pairs(s: &str) -> impl Iterator<Item = (&str, &str)> {
    s.split_whitespace()
        .map(|p| p.split_once('=').unwrap_or((p, "")))
}

/// Parses an instance file.
pub fn parse_instance(text: &str) -> Result<InstanceSpec> {
    let mut domain = None;
    let mut vars = None;
    let mut init = None;
    let mut goal = None;
    let mut ptr_init = Vec::new();
    let mut bounds = Vec::new();
    let mut last = 0;
    for (src, l) in content_lines(text) {
        last = src;
        let (key, value) = l
            .split_once(':')
            .ok_or_else(|| parse_err(src, "expected `key: value`"))?;
        let value = value.trim();
        match key.trim() {
            "domain" => domain = Some(value.to_string()),
            "vars" => {
                vars = Some(
                    value
                        .parse::<usize>()
                        .map_err(|_| parse_err(src, format!("bad variable count `{value}`")))?,
                )
            }
            "init" => {
                init = Some(
                    value
                        .split_whitespace()
                        .map(|v| parse_value(v, src))
                        .collect::<Result<Vec<_>>>()?,
                )
            }
            "goal" => {
                let mut g = Vec::new();
                for (i, v) in parse_pairs(value) {
                    let i = i
                        .parse()
                        .map_err(|_| parse_err(src, format!("bad goal index `{i}`")))?;
                    g.push((i, parse_value(v, src)?));
                }
                goal = Some(Goal(g));
            }
            "ptr_init" => {
                for (p, v) in parse_pairs(value) {
                    let k: usize = p
                        .strip_prefix('z')
                        .and_then(|k| k.parse().ok())
                        .filter(|k| (1..=256).contains(k))
                        .ok_or_else(|| parse_err(src, format!("bad pointer `{p}`")))?;
                    let v = v
                        .parse()
                        .map_err(|_| parse_err(src, format!("bad pointer value `{v}`")))?;
                    ptr_init.push((Ptr((k - 1) as u8), v));
                }
            }
            "bounds" => {
                for (i, range) in parse_pairs(value) {
                    let i: usize = i
                        .parse()
                        .map_err(|_| parse_err(src, format!("bad bounds index `{i}`")))?;
                    let (lo, hi) = range
                        .split_once("..")
                        .ok_or_else(|| parse_err(src, format!("bad range `{range}`")))?;
                    let lo = if lo.is_empty() {
                        Value::MIN
                    } else {
                        parse_value(lo, src)?
                    };
                    let hi = if hi.is_empty() {
                        Value::MAX
                    } else {
                        parse_value(hi, src)?
                    };
                    bounds.push((i, lo, hi));
                }
            }
            k => return Err(parse_err(src, format!("unknown key `{k}`"))),
        }
    }
    let vars = vars.ok_or_else(|| parse_err(last, "missing `vars`"))?;
    let init = init.ok_or_else(|| parse_err(last, "missing `init`"))?;
    let goal = goal.ok_or_else(|| parse_err(last, "missing `goal`"))?;
    let space = VariableSpace::with_bounds(vars, &bounds)?;
    let base = BaseInstance::new(space, init, goal)?;
    if let Some(&(p, v)) = ptr_init.iter().find(|&&(_, v)| v >= vars) {
        return Err(Error::PointerValue {
            pointer: p.index(),
            value: v,
            vars,
        });
    }
    Ok(InstanceSpec {
        domain: domain.unwrap_or_default(),
        base,
        pointer_init: ptr_init,
    })
}

/// Canonical instance text.
pub fn serialize_instance(spec: &InstanceSpec) -> String {
    let base = &spec.base;
    let mut out = String::new();
    if !spec.domain.is_empty() {
        let _ = writeln!(out, "domain: {}", spec.domain);
    }
    let _ = writeln!(out, "vars: {}", base.space.count());
    let init: Vec<String> = base.init.iter().map(|v| v.to_string()).collect();
    let _ = writeln!(out, "init: {}", init.join(" "));
    let goal: Vec<String> = base.goal.iter().map(|(i, v)| format!("{i}={v}")).collect();
    let _ = writeln!(out, "goal: {}", goal.join(" "));
    if !spec.pointer_init.is_empty() {
        let ptrs: Vec<String> = spec
            .pointer_init
            .iter()
            .map(|(p, v)| format!("{p}={v}"))
            .collect();
        let _ = writeln!(out, "ptr_init: {}", ptrs.join(" "));
    }
    let bounds: Vec<String> = base
        .space
        .bounded()
        .map(|(i, b)| {
            let lo = if b.lo == Value::MIN {
                String::new()
            } else {
                b.lo.to_string()
            };
            let hi = if b.hi == Value::MAX {
                String::new()
            } else {
                b.hi.to_string()
            };
            format!("{i}={lo}..{hi}")
        })
        .collect();
    if !bounds.is_empty() {
        let _ = writeln!(out, "bounds: {}", bounds.join(" "));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIG2: &str =
        "0. swap(z1,z2)\n1. inc(z1)\n2. dec(z2)\n3. cmp(z2,z1)\n4. goto(0,GE)\n5. end\n";

    #[test]
    fn parses_figure_listing() {
        let p = parse_program(FIG2, None, 2).unwrap();
        assert_eq!(p.len(), 6);
        assert_eq!(p.line(0).to_string(), "swap(*z1,*z2)");
        assert_eq!(
            p.line(4),
            Instruction::Goto {
                target: 0,
                cond: Condition::Ge
            }
        );
        let canonical = serialize_program(&p);
        assert_eq!(canonical, FIG2.replace("swap(z1,z2)", "swap(*z1,*z2)"));
        assert_eq!(parse_program(&canonical, None, 2).unwrap(), p);
    }

    #[test]
    fn rejects_goto_to_next_line() {
        let err =
            parse_program("0. inc(z1)\n1. goto(2,EQ)\n2. inc(z1)\n3. end\n", None, 1).unwrap_err();
        assert!(err.to_string().contains("illegal goto target"), "{err}");
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn rejects_pointer_out_of_range() {
        let err = parse_program("0. swap(*z1,*z9)\n1. end\n", None, 3).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }), "{err}");
    }

    #[test]
    fn rejects_malformed_and_unknown() {
        assert!(parse_program("0. jump(z1)\n1. end\n", None, 1).is_err());
        assert!(parse_program("0 inc(z1)\n1. end\n", None, 1).is_err());
        assert!(parse_program("0. inc(z1\n1. end\n", None, 1).is_err());
        assert!(parse_program("0. cmp(*z1,z2)\n1. end\n", None, 2).is_err());
        assert!(parse_program("1. end\n", None, 1).is_err());
        assert!(parse_program("0. inc(z1)\n", None, 1).is_err());
        assert!(parse_program("0. goto(0,XX)\n1. end\n", None, 1).is_err());
    }

    #[test]
    fn fills_trailing_lines() {
        let p = parse_program("0. inc(z1)\n", Some(4), 1).unwrap();
        assert_eq!(
            serialize_program(&p),
            "0. inc(z1)\n1. -- undefined\n2. -- undefined\n3. end\n"
        );
    }

    #[test]
    fn empty_program_text() {
        let p = Program::empty(3).unwrap();
        let text = serialize_program(&p);
        assert_eq!(text, "0. -- undefined\n1. -- undefined\n2. end\n");
        assert_eq!(parse_program(&text, None, 1).unwrap(), p);
    }

    #[test]
    fn content_primitive_disambiguation() {
        let p = parse_program(
            "0. inc(*z1)\n1. set(*z1,*z2)\n2. set(z1,z2)\n3. end\n",
            None,
            2,
        )
        .unwrap();
        assert_eq!(p.line(0).to_string(), "inc(*z1)");
        assert!(matches!(p.line(0), Instruction::Action(Action::Content(_))));
        assert!(matches!(p.line(1), Instruction::Action(Action::Content(_))));
        assert!(matches!(
            p.line(2),
            Instruction::Action(Action::Primitive(Primitive::Set(..)))
        ));
    }

    #[test]
    fn instance_round_trip() {
        let text = "domain: reverse\nvars: 6\ninit: 6 3 4 2 5 1\ngoal: 0=1 1=5 2=2 3=4 4=3 5=6\nptr_init: z2=5\nbounds: 0=0.. 3=-2..7\n";
        let spec = parse_instance(text).unwrap();
        assert_eq!(spec.pointer_init, vec![(Ptr(1), 5)]);
        assert_eq!(spec.base.space.bounds(3).unwrap().lo, -2);
        assert_eq!(serialize_instance(&spec), text);
    }

    #[test]
    fn instance_errors() {
        assert!(parse_instance("vars: 2\ninit: 1 2\n").is_err());
        assert!(parse_instance("vars: 2\ninit: 1\ngoal: 0=1\n").is_err());
        assert!(parse_instance("vars: 2\ninit: 1 2\ngoal: 5=1\n").is_err());
        assert!(parse_instance("vars: 2\ninit: 1 2\ngoal: 0=1\nptr_init: z1=2\n").is_err());
        assert!(parse_instance("vars: 2\ninit: 1 2\ngoal: 0=1\ncolour: red\n").is_err());
    }
}
