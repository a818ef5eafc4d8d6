//! Command-line front end: `synth`, `validate`, `gen` and `bench`.

pub mod bench;
pub mod files;
pub mod report;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use bfgp_core::domains::{build_suite, Domain};
use bfgp_core::interp::{Executor, DEFAULT_MAX_STEPS};
use bfgp_core::{
    bfgp, serialize_program, EvalConfig, GpProblem, Halt, Outcome, Program, RunOptions,
    SearchConfig,
};

use report::{MemorySource, ResultRow};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_NO_SOLUTION: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
/// `validate`: some instance did not end in a goal state.
pub const EXIT_INVALID: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "bfgp",
    version,
    about = "Synthesize and validate planning programs with best-first search"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Search for a program that solves every instance in a directory.
    Synth(SynthArgs),
    /// Run a program on every instance in a directory.
    Validate(ValidateArgs),
    /// Write generated instances of a domain.
    Gen(GenArgs),
    /// Run a grid of searches and write one CSV row per run.
    Bench(bench::BenchArgs),
}

#[derive(clap::Args, Debug)]
pub struct SynthArgs {
    #[arg(long)]
    pub domain: Domain,
    /// Directory of `.inst` files.
    #[arg(long)]
    pub instances: PathBuf,
    /// Program lines; defaults to the domain's.
    #[arg(long)]
    pub lines: Option<usize>,
    /// Pointers; defaults to the domain's.
    #[arg(long)]
    pub pointers: Option<usize>,
    #[arg(long, default_value = "h5,f1")]
    pub eval: EvalConfig,
    /// Search budget in seconds.
    #[arg(long, default_value_t = 3600)]
    pub timeout: u64,
    /// Worker threads for child evaluation [default: GP_THREADS or 1].
    #[arg(long)]
    pub threads: Option<usize>,
    /// Where to write the program.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(clap::Args, Debug)]
pub struct ValidateArgs {
    #[arg(long)]
    pub program: PathBuf,
    #[arg(long)]
    pub instances: PathBuf,
    /// Do not store program states to detect infinite executions.
    #[arg(long)]
    pub no_infinite_detection: bool,
    /// Cap on executed instructions per instance.
    #[arg(long, default_value_t = DEFAULT_MAX_STEPS)]
    pub max_steps: u64,
    /// Print only the totals.
    #[arg(long)]
    pub summary: bool,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Split {
    Training,
    #[default]
    Validation,
}

#[derive(clap::Args, Debug)]
pub struct GenArgs {
    #[arg(long)]
    pub domain: Domain,
    /// Number of instances; training sets are capped at the domain's
    /// training sizes.
    #[arg(long)]
    pub count: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Split::Validation)]
    pub split: Split,
    #[arg(long)]
    pub out: PathBuf,
}

/// Thread cap from `GP_THREADS`, defaulting to 1.
pub fn gp_threads() -> usize {
    std::env::var("GP_THREADS")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .filter(|&n| n >= 1)
        .unwrap_or(1)
}

/// Parses `args` and runs the command, returning the process exit code.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
        }
    };
    match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_ERROR
        }
    }
}

pub fn execute(command: Command) -> Result<i32> {
    let stdout = std::io::stdout();
    match command {
        Command::Synth(a) => synth(&a, &mut stdout.lock()),
        Command::Validate(a) => validate(&a, &mut stdout.lock()),
        Command::Gen(a) => gen(&a, &mut stdout.lock()),
        Command::Bench(a) => bench::bench(&a, &mut stdout.lock()),
    }
}

pub fn synth(args: &SynthArgs, out: &mut dyn Write) -> Result<i32> {
    let d = args.domain;
    let specs: Vec<_> = files::load_instances(&args.instances)?
        .into_iter()
        .map(|(_, s)| s)
        .collect();
    let lines = args.lines.unwrap_or(d.lines());
    let pointers = args.pointers.unwrap_or(d.pointers());
    let problem = GpProblem::from_specs(&specs, d.schemas(), pointers)?;
    let mut config = SearchConfig::new(args.eval.clone());
    config.budget.time = Some(Duration::from_secs(args.timeout));
    config.threads = args.threads.unwrap_or_else(gp_threads);

    let result = bfgp(&problem, lines, &config)?;
    let (source, mem) = match report::peak_rss_mb() {
        Some(mb) => (MemorySource::PeakRss, mb),
        None => (MemorySource::NodeProxy, report::proxy_mb(&result, lines)),
    };
    let row = ResultRow::new(
        d.name(),
        lines,
        pointers,
        &args.eval.to_string(),
        &result,
        mem,
    );
    let code = match &result.outcome {
        Outcome::Solved(p) => {
            fs::write(&args.out, serialize_program(p))
                .with_context(|| format!("writing {}", args.out.display()))?;
            EXIT_OK
        }
        Outcome::NoSolution => EXIT_NO_SOLUTION,
        Outcome::BudgetExhausted => EXIT_BUDGET,
    };
    report::write_rows(out, source, &[row])?;
    Ok(code)
}

/// Pointers needed by `program` and by the pointer initialisations.
fn pointer_count(program: &Program, specs: &[bfgp_core::InstanceSpec]) -> usize {
    let from_program = program.max_pointer().map_or(0, |p| p + 1);
    let from_specs = specs
        .iter()
        .flat_map(|s| &s.pointer_init)
        .map(|(p, _)| p.index() + 1)
        .max()
        .unwrap_or(0);
    from_program.max(from_specs).max(1)
}

/// Verdict of one validated instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub name: String,
    pub halt: Halt,
    pub steps: u64,
    pub stored_states: usize,
}

/// Runs `program` on every instance of `dir`, in parallel up to the
/// `GP_THREADS` cap. Verdicts come back in file order.
pub fn validate_dir(program: &Program, dir: &Path, opts: &RunOptions) -> Result<Vec<Verdict>> {
    let loaded = files::load_instances(dir)?;
    let specs: Vec<_> = loaded.iter().map(|(_, s)| s.clone()).collect();
    let k = pointer_count(program, &specs);
    let instances = specs
        .iter()
        .map(|s| s.extend(k))
        .collect::<bfgp_core::Result<Vec<_>>>()?;
    let check = |(path, inst): (&PathBuf, &bfgp_core::Instance)| {
        let mut exec = Executor::new();
        let s = exec.execute(program, inst, opts, None);
        Verdict {
            name: path
                .file_name()
                .map_or_else(String::new, |n| n.to_string_lossy().into_owned()),
            halt: s.halt,
            steps: s.actions_applied + s.gotos + 1,
            stored_states: s.stored_states,
        }
    };
    let pairs: Vec<_> = loaded.iter().map(|(p, _)| p).zip(&instances).collect();
    let threads = gp_threads();
    if threads > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()?;
        Ok(pool.install(|| pairs.into_par_iter().map(check).collect()))
    } else {
        Ok(pairs.into_iter().map(check).collect())
    }
}

pub fn validate(args: &ValidateArgs, out: &mut dyn Write) -> Result<i32> {
    let program = files::load_program(&args.program)?;
    let opts = RunOptions {
        detect_revisit: !args.no_infinite_detection,
        max_steps: args.max_steps,
        record_plan: false,
    };
    let start = Instant::now();
    let verdicts = validate_dir(&program, &args.instances, &opts)?;
    let elapsed = start.elapsed();
    if !args.summary {
        for v in &verdicts {
            writeln!(
                out,
                "{}\t{}\t{}\t{}",
                v.name,
                v.halt.name(),
                v.steps,
                v.stored_states
            )?;
        }
    }
    let solved = verdicts.iter().filter(|v| v.halt == Halt::EndGoal).count();
    let mut counts: Vec<(&str, usize)> = Vec::new();
    for v in &verdicts {
        match counts.iter_mut().find(|(n, _)| *n == v.halt.name()) {
            Some((_, c)) => *c += 1,
            None => counts.push((v.halt.name(), 1)),
        }
    }
    let breakdown: Vec<String> = counts.iter().map(|(n, c)| format!("{n}={c}")).collect();
    let mem = report::peak_rss_mb().map_or_else(|| "n/a".to_string(), |m| format!("{m:.1}"));
    writeln!(
        out,
        "total={} solved={} {} time_s={:.3} mem_mb={}",
        verdicts.len(),
        solved,
        breakdown.join(" "),
        elapsed.as_secs_f64(),
        mem
    )?;
    Ok(if solved == verdicts.len() {
        EXIT_OK
    } else {
        EXIT_INVALID
    })
}

pub fn gen(args: &GenArgs, out: &mut dyn Write) -> Result<i32> {
    if args.count == 0 {
        bail!("--count must be at least 1");
    }
    let d = args.domain;
    let suite = match args.split {
        Split::Training => build_suite(d, args.count, 0, args.seed)?,
        Split::Validation => build_suite(d, 0, args.count, args.seed)?,
    };
    let specs = match args.split {
        Split::Training => suite.training,
        Split::Validation => suite.validation,
    };
    let paths = files::write_instances(&args.out, d.name(), &specs)?;
    writeln!(
        out,
        "wrote {} instances to {}",
        paths.len(),
        args.out.display()
    )?;
    Ok(EXIT_OK)
}
