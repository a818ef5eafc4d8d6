//! Run-time checks on a search, fed from the [`SearchEvent`]s of
//! [`crate::search::bfgp_with`].
//!
//! Every child differs from its parent in the one line the parent
//! programmed, so a program `P` is generated twice exactly when two
//! expanded nodes `X` (programming line `a`) and `Y` (programming `b`) agree
//! everywhere except at `a` and `b`, with `X[b]` and `Y[a]` defined: both
//! then produce `X[a := Y[a]] = Y[b := X[b]]`. The audit therefore records,
//! for each expansion and each programmed line `b` of the expanded program,
//! a fingerprint of "the program without `b`, with the line pair `{a, b}`",
//! tagged with which of the two lines was programmed. A duplicate exists
//! iff some fingerprint occurs with both tags. This needs work per
//! expansion instead of per generated program, and the records can be
//! spilled to sorted files, so runs with billions of generated programs
//! are checked exactly up to 127-bit fingerprint collisions.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fs::{self, File};
use std::hash::{DefaultHasher, Hash, Hasher};
use std::io::{self, BufReader, BufWriter, Read, Write};
use std::path::PathBuf;

use crate::program::{Instruction, Program};
use crate::search::SearchEvent;

/// Additive fingerprint of a whole program: the wrapping sum of one
/// pseudo-random 128-bit word per `(line, instruction)`, so changing a line
/// costs one subtraction and one addition.
pub fn fingerprint(program: &Program) -> u128 {
    program
        .lines()
        .iter()
        .enumerate()
        .fold(0u128, |acc, (i, ins)| acc.wrapping_add(line_word(i, ins)))
}

/// Pseudo-random word of one line; SipHash with fixed keys keeps it
/// reproducible across runs.
pub fn line_word(line: usize, ins: &Instruction) -> u128 {
    let half = |salt: u8| {
        let mut h = DefaultHasher::new();
        salt.hash(&mut h);
        line.hash(&mut h);
        ins.hash(&mut h);
        h.finish()
    };
    ((half(0) as u128) << 64) | half(1) as u128
}

fn pair_word(lo: usize, hi: usize) -> u128 {
    let mut h = DefaultHasher::new();
    (2u8, lo, hi).hash(&mut h);
    let a = h.finish();
    a.hash(&mut h);
    ((a as u128) << 64) | h.finish() as u128
}

/// Counts gathered by an [`Audit`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AuditReport {
    /// Generated programs, the root included.
    pub generated: u64,
    pub expansions: u64,
    /// Programs generated more than once.
    pub duplicates: u64,
    /// Expansions after which more nodes were alive than the open list, the
    /// expanded node and its children account for.
    pub frontier_violations: u64,
    pub peak_live: usize,
    pub records: u64,
}

#[derive(Debug)]
pub struct Audit {
    report: AuditReport,
    buffer: Vec<u128>,
    /// Spill directory and buffer length, if records go to disk.
    spill: Option<(PathBuf, usize)>,
    runs: Vec<PathBuf>,
}

impl Default for Audit {
    fn default() -> Self {
        Self::new()
    }
}

impl Audit {
    /// Keeps every record in memory.
    pub fn new() -> Self {
        Audit {
            report: AuditReport::default(),
            buffer: Vec::new(),
            spill: None,
            runs: Vec::new(),
        }
    }

    /// Writes sorted runs of `chunk` records into `dir`, which must exist.
    pub fn spilling(dir: PathBuf, chunk: usize) -> Self {
        Audit {
            spill: Some((dir, chunk.max(1))),
            ..Self::new()
        }
    }

    /// Takes one event. Spill errors are returned; the audit is unusable
    /// after one.
    pub fn observe(&mut self, event: &SearchEvent) -> io::Result<()> {
        match *event {
            SearchEvent::Generated { .. } => self.report.generated += 1,
            SearchEvent::Expanded {
                program,
                line,
                live,
                open,
                children,
            } => {
                let r = &mut self.report;
                r.expansions += 1;
                r.peak_live = r.peak_live.max(live);
                if live > open + 1 + children {
                    r.frontier_violations += 1;
                }
                self.record(program, line)?;
            }
        }
        Ok(())
    }

    fn record(&mut self, program: &Program, programmed: usize) -> io::Result<()> {
        let lines = program.lines();
        let fp = fingerprint(program);
        for (b, ins) in lines.iter().enumerate().take(lines.len() - 1) {
            if ins.is_undefined() {
                continue;
            }
            let without = fp
                .wrapping_sub(line_word(b, ins))
                .wrapping_add(line_word(b, &Instruction::Undefined));
            let (lo, hi) = (programmed.min(b), programmed.max(b));
            let key = without.wrapping_add(pair_word(lo, hi)) & !1;
            self.buffer.push(key | (programmed < b) as u128);
        }
        if let Some((dir, chunk)) = &self.spill {
            if self.buffer.len() >= *chunk {
                let path = dir.join(format!("audit-run-{}.bin", self.runs.len()));
                write_run(&path, &mut self.buffer)?;
                self.runs.push(path);
            }
        }
        Ok(())
    }

    /// Sorts and compares all records, removing spilled files.
    pub fn finish(mut self) -> io::Result<AuditReport> {
        let mut report = std::mem::take(&mut self.report);
        let mut scan = Scan::default();
        if self.runs.is_empty() {
            self.buffer.sort_unstable();
            self.buffer.iter().for_each(|&k| scan.push(k));
        } else {
            if !self.buffer.is_empty() {
                let path = self
                    .spill
                    .as_ref()
                    .expect("runs imply a spill dir")
                    .0
                    .join(format!("audit-run-{}.bin", self.runs.len()));
                write_run(&path, &mut self.buffer)?;
                self.runs.push(path);
            }
            merge(&self.runs, |k| scan.push(k))?;
            for p in &self.runs {
                let _ = fs::remove_file(p);
            }
        }
        scan.close();
        report.records = scan.records;
        report.duplicates = scan.duplicates;
        Ok(report)
    }
}

/// Walks sorted keys, counting key groups that carry both tags.
#[derive(Default)]
struct Scan {
    current: Option<u128>,
    tags: u8,
    records: u64,
    duplicates: u64,
}

impl Scan {
    fn push(&mut self, key: u128) {
        self.records += 1;
        let group = key & !1;
        if self.current != Some(group) {
            self.close();
            self.current = Some(group);
        }
        self.tags |= 1 << (key & 1);
    }

    fn close(&mut self) {
        if self.tags == 0b11 {
            self.duplicates += 1;
        }
        self.tags = 0;
    }
}

fn write_run(path: &PathBuf, buffer: &mut Vec<u128>) -> io::Result<()> {
    buffer.sort_unstable();
    let mut w = BufWriter::new(File::create(path)?);
    for k in buffer.iter() {
        w.write_all(&k.to_le_bytes())?;
    }
    w.flush()?;
    buffer.clear();
    Ok(())
}

fn next_key(r: &mut impl Read) -> io::Result<Option<u128>> {
    let mut b = [0u8; 16];
    match r.read_exact(&mut b) {
        Ok(()) => Ok(Some(u128::from_le_bytes(b))),
        Err(e) if e.kind() == io::ErrorKind::UnexpectedEof => Ok(None),
        Err(e) => Err(e),
    }
}

/// K-way merge of sorted run files.
fn merge(runs: &[PathBuf], mut f: impl FnMut(u128)) -> io::Result<()> {
    let mut readers = runs
        .iter()
        .map(|p| File::open(p).map(|f| BufReader::with_capacity(1 << 16, f)))
        .collect::<io::Result<Vec<_>>>()?;
    let mut heap = BinaryHeap::new();
    for (i, r) in readers.iter_mut().enumerate() {
        if let Some(k) = next_key(r)? {
            heap.push(Reverse((k, i)));
        }
    }
    while let Some(Reverse((k, i))) = heap.pop() {
        f(k);
        if let Some(k) = next_key(&mut readers[i])? {
            heap.push(Reverse((k, i)));
        }
    }
    Ok(())
}
