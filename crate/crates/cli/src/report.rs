//! Result rows and peak-memory measurement.

use std::io::Write;

use anyhow::Result;
use bfgp_core::{Outcome, SearchResult};

pub const COLUMNS: [&str; 9] = [
    "domain",
    "n",
    "pointers",
    "eval",
    "time_s",
    "mem_mb",
    "expanded",
    "evaluated",
    "status",
];

/// How the `mem_mb` column was measured.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MemorySource {
    /// Peak resident set size of the process.
    PeakRss,
    /// Bytes held by live search nodes at their peak.
    NodeProxy,
}

impl MemorySource {
    pub fn comment(self) -> &'static str {
        match self {
            MemorySource::PeakRss => "# mem_mb: peak resident set size of the process (VmHWM)",
            MemorySource::NodeProxy => {
                "# mem_mb: estimated bytes held by live search nodes at their peak"
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResultRow {
    pub domain: String,
    pub n: usize,
    pub pointers: usize,
    pub eval: String,
    pub time_s: f64,
    pub mem_mb: f64,
    pub expanded: u64,
    pub evaluated: u64,
    pub status: &'static str,
}

pub fn status_name(outcome: &Outcome) -> &'static str {
    match outcome {
        Outcome::Solved(_) => "SOLUTION",
        Outcome::NoSolution => "NO_SOLUTION",
        Outcome::BudgetExhausted => "BUDGET_EXHAUSTED",
    }
}

impl ResultRow {
    pub fn new(
        domain: &str,
        n: usize,
        pointers: usize,
        eval: &str,
        result: &SearchResult,
        mem_mb: f64,
    ) -> Self {
        ResultRow {
            domain: domain.to_string(),
            n,
            pointers,
            eval: eval.to_string(),
            time_s: result.stats.elapsed.as_secs_f64(),
            mem_mb,
            expanded: result.stats.expanded,
            evaluated: result.stats.evaluated,
            status: status_name(&result.outcome),
        }
    }

    pub fn fields(&self) -> [String; 9] {
        [
            self.domain.clone(),
            self.n.to_string(),
            self.pointers.to_string(),
            self.eval.clone(),
            format!("{:.3}", self.time_s),
            format!("{:.1}", self.mem_mb),
            self.expanded.to_string(),
            self.evaluated.to_string(),
            self.status.to_string(),
        ]
    }
}

/// Writes a comment line, the header and `rows` as CSV.
pub fn write_rows<W: Write>(mut out: W, source: MemorySource, rows: &[ResultRow]) -> Result<()> {
    writeln!(out, "{}", source.comment())?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(COLUMNS)?;
    for r in rows {
        w.write_record(r.fields())?;
    }
    w.flush()?;
    Ok(())
}

/// `VmHWM` from `/proc/self/status`, in MB.
pub fn peak_rss_mb() -> Option<f64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    let line = status.lines().find(|l| l.starts_with("VmHWM:"))?;
    let kb: f64 = line.split_whitespace().nth(1)?.parse().ok()?;
    Some(kb / 1024.0)
}

/// Resets the kernel's peak-RSS counter so the next reading covers only
/// what follows.
pub fn reset_peak_rss() -> bool {
    std::fs::write("/proc/self/clear_refs", "5").is_ok()
}

pub fn proxy_mb(result: &SearchResult, lines: usize) -> f64 {
    result.stats.node_bytes(lines) as f64 / (1024.0 * 1024.0)
}
