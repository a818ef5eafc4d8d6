//! The benchmark grid behind `bfgp bench`.

use std::fs::File;
use std::io::Write;
use std::path::PathBuf;
use std::time::Duration;

use anyhow::{Context, Result};
use clap::ValueEnum;
use rayon::prelude::*;

use bfgp_core::domains::{build_suite, Domain};
use bfgp_core::{bfgp, EvalConfig, GpProblem, SearchConfig};

use crate::report::{self, MemorySource, ResultRow};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    /// All eight domains under every single function and both pairings of
    /// `f1` with `h5`.
    Paper,
    /// The five smaller domains under `h5,f1`.
    Desk,
    /// Fibonacci, gripper and sorting under `h5,f1`.
    Extended,
}

const SINGLE: [&str; 6] = ["f1", "f2", "f3", "h4", "h5", "f6"];
const PAIRS: [&str; 2] = ["f1,h5", "h5,f1"];
const DESK: [Domain; 5] = [
    Domain::TriangularSum,
    Domain::Corridor,
    Domain::Reverse,
    Domain::Select,
    Domain::Find,
];
const EXTENDED: [Domain; 3] = [Domain::Fibonacci, Domain::Gripper, Domain::Sorting];

impl Suite {
    /// `(domain, eval)` cells in output order.
    pub fn cells(self) -> Vec<(Domain, EvalConfig)> {
        let grid = |domains: &[Domain], evals: &[&str]| -> Vec<(Domain, EvalConfig)> {
            domains
                .iter()
                .flat_map(|&d| {
                    evals
                        .iter()
                        .map(move |e| (d, e.parse().expect("valid eval config")))
                })
                .collect()
        };
        match self {
            Suite::Paper => {
                let evals: Vec<&str> = SINGLE.iter().chain(&PAIRS).copied().collect();
                grid(&Domain::ALL, &evals)
            }
            Suite::Desk => grid(&DESK, &["h5,f1"]),
            Suite::Extended => grid(&EXTENDED, &["h5,f1"]),
        }
    }
}

#[derive(clap::Args, Debug)]
pub struct BenchArgs {
    #[arg(long, value_enum, default_value_t = Suite::Paper)]
    pub suite: Suite,
    /// Budget per run in seconds.
    #[arg(long, default_value_t = 60)]
    pub timeout: u64,
    /// Seed of the generated training instances.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Restrict to these domains (comma-separated).
    #[arg(long, value_delimiter = ',')]
    pub domains: Vec<Domain>,
    #[arg(long)]
    pub out: PathBuf,
}

/// Runs one cell on the domain's default training set.
pub fn run_cell(
    domain: Domain,
    eval: &EvalConfig,
    seed: u64,
    timeout: Duration,
) -> Result<(ResultRow, f64)> {
    let suite = build_suite(domain, usize::MAX, 0, seed)?;
    let problem = GpProblem::from_specs(&suite.training, domain.schemas(), domain.pointers())?;
    let mut config = SearchConfig::new(eval.clone());
    config.budget.time = Some(timeout);
    let result = bfgp(&problem, domain.lines(), &config)?;
    let proxy = report::proxy_mb(&result, domain.lines());
    let row = ResultRow::new(
        domain.name(),
        domain.lines(),
        domain.pointers(),
        &eval.to_string(),
        &result,
        proxy,
    );
    Ok((row, proxy))
}

pub fn bench(args: &BenchArgs, out: &mut dyn Write) -> Result<i32> {
    let cells: Vec<_> = args
        .suite
        .cells()
        .into_iter()
        .filter(|(d, _)| args.domains.is_empty() || args.domains.contains(d))
        .collect();
    let timeout = Duration::from_secs(args.timeout);
    let threads = crate::gp_threads();
    // Peak RSS is per process, so it can only be attributed to a cell when
    // cells run one at a time and the counter can be reset between them.
    let rss = threads == 1 && report::reset_peak_rss() && report::peak_rss_mb().is_some();
    let rows: Vec<ResultRow> = if rss {
        let mut rows = Vec::with_capacity(cells.len());
        for (d, e) in &cells {
            report::reset_peak_rss();
            let (mut row, proxy) = run_cell(*d, e, args.seed, timeout)?;
            row.mem_mb = report::peak_rss_mb().unwrap_or(proxy);
            writeln!(out, "{}", row.fields().join(","))?;
            rows.push(row);
        }
        rows
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()?;
        let rows = pool.install(|| {
            cells
                .par_iter()
                .map(|(d, e)| run_cell(*d, e, args.seed, timeout).map(|(r, _)| r))
                .collect::<Result<Vec<_>>>()
        })?;
        for row in &rows {
            writeln!(out, "{}", row.fields().join(","))?;
        }
        rows
    };
    let source = if rss {
        MemorySource::PeakRss
    } else {
        MemorySource::NodeProxy
    };
    let file =
        File::create(&args.out).with_context(|| format!("creating {}", args.out.display()))?;
    report::write_rows(file, source, &rows)?;
    Ok(crate::EXIT_OK)
}
