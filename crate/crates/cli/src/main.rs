//! `heisid`: decide the identity and group problems for Heisenberg matrix
//! semigroups given as JSON instance files.
//!
//! Exit status is 0 whenever a decision or run completed (the answer is in
//! the payload), 2 on input errors and 3 on internal errors or a failed audit.

mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use heisenberg_core::decider::{decide_group, decide_identity, DeciderError, Decision};
use heisenberg_core::generate::{generate, Family, GenParams};
use heisenberg_core::instance::Instance;
use heisenberg_core::oracle::{self, AuditVerdict};
use heisenberg_core::HeisenbergMatrix;
use rayon::prelude::*;

use report::OracleRun;

#[derive(Parser, Debug)]
#[command(
    name = "heisid",
    version,
    about = "Identity and group problems for Heisenberg matrix semigroups"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Global {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Include the full decision trace.
    #[arg(long, global = true)]
    trace: bool,
    /// Worker threads for batch decisions.
    #[arg(long, default_value_t = 1, global = true)]
    jobs: usize,
    /// State budget for the brute-force oracle.
    #[arg(long, default_value_t = oracle::DEFAULT_BUDGET, global = true)]
    budget: usize,
    /// Maximum word length explored by the oracle.
    #[arg(long, default_value_t = 8, global = true)]
    max_len: usize,
    /// Seed for instance generation.
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum ProblemArg {
    Identity,
    Group,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide whether the identity matrix lies in the generated semigroup.
    Decide {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Decide whether the generated semigroup is a group.
    Group {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Search for an identity word by bounded enumeration and audit the decider.
    Oracle { file: PathBuf },
    /// Check a decision against bounded enumeration.
    Audit {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = ProblemArg::Identity)]
        problem: ProblemArg,
    },
    /// Write a random instance to stdout or a file.
    Gen {
        #[arg(long)]
        family: String,
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 4)]
        t: usize,
        /// Bound on the real and imaginary parts of a/b entries.
        #[arg(long, default_value_t = 1)]
        max_entry: i64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

const EXIT_INPUT: u8 = 2;
const EXIT_INTERNAL: u8 = 3;

/// A failure with its exit status; the message goes to stderr.
struct Failure {
    status: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            status: EXIT_INPUT,
            message: message.into(),
        }
    }

    fn internal(message: impl Into<String>) -> Self {
        Failure {
            status: EXIT_INTERNAL,
            message: message.into(),
        }
    }
}

fn load(path: &Path) -> Result<Instance, Failure> {
    let text =
        fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    Instance::parse(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn decide(problem: ProblemArg, inst: &Instance) -> Result<(Decision, f64), Failure> {
    let start = Instant::now();
    let d = match problem {
        ProblemArg::Identity => decide_identity(&inst.generators),
        ProblemArg::Group => decide_group(&inst.generators),
    }
    .map_err(|e: DeciderError| Failure::internal(format!("internal error: {e}")))?;
    Ok((d, start.elapsed().as_secs_f64() * 1e3))
}

fn render<T: serde::Serialize>(
    fmt: Format,
    json: impl FnOnce() -> T,
    text: impl FnOnce() -> String,
) -> String {
    match fmt {
        Format::Json => {
            let mut s = serde_json::to_string(&json()).expect("reports serialize");
            s.push('\n');
            s
        }
        Format::Text => text(),
    }
}

fn decide_one(g: &Global, problem: ProblemArg, path: &Path) -> Result<String, Failure> {
    let inst = load(path)?;
    let (d, ms) = decide(problem, &inst)?;
    Ok(render(
        g.format,
        || report::decision_json(&d, g.trace, ms),
        || report::decision_text(&d, g.trace, ms),
    ))
}

/// Decides every file, printing reports in input order. The status is the
/// largest of the per-file statuses.
fn run_batch(g: &Global, problem: ProblemArg, files: &[PathBuf]) -> ExitCode {
    let work = || -> Vec<Result<String, Failure>> {
        files
            .par_iter()
            .map(|p| decide_one(g, problem, p))
            .collect()
    };
    let results = match rayon::ThreadPoolBuilder::new()
        .num_threads(g.jobs.max(1))
        .build()
    {
        Ok(pool) => pool.install(work),
        Err(e) => {
            eprintln!("cannot start worker pool: {e}");
            return ExitCode::from(EXIT_INTERNAL);
        }
    };
    let mut status = 0;
    for (path, r) in files.iter().zip(results) {
        match r {
            Ok(out) => {
                if files.len() > 1 && g.format == Format::Text {
                    println!("== {}", path.display());
                }
                print!("{out}");
            }
            Err(f) => {
                eprintln!("{}", f.message);
                status = status.max(f.status);
            }
        }
    }
    ExitCode::from(status)
}

fn run_oracle(
    g: &Global,
    path: &Path,
    problem: ProblemArg,
    is_audit: bool,
) -> Result<String, Failure> {
    let inst = load(path)?;
    let gens = &inst.generators;
    let (d, _) = decide(problem, &inst)?;
    let start = Instant::now();
    let reach =
        oracle::enumerate(gens, g.max_len, g.budget).map_err(|e| Failure::input(e.to_string()))?;
    let search = reach.search(&HeisenbergMatrix::identity(gens.dim()).expect("n >= 2"));
    let audit = oracle::audit_reach(gens, &reach, &d);
    let ms = start.elapsed().as_secs_f64() * 1e3;
    let run = OracleRun {
        decision: &d,
        search: &search,
        audit: &audit,
        budget: g.budget,
        show_inverses: d.problem == heisenberg_core::Problem::Group,
    };
    let out = render(
        g.format,
        || report::oracle_json(&run, ms),
        || report::oracle_text(&run, ms),
    );
    if is_audit && audit.verdict == AuditVerdict::Fail {
        print!("{out}");
        return Err(Failure::internal(format!(
            "{}: audit FAIL, the decider answered no but a witness exists",
            path.display()
        )));
    }
    Ok(out)
}

fn run_gen(
    g: &Global,
    family: &str,
    n: usize,
    t: usize,
    max_entry: i64,
    out: Option<&Path>,
) -> Result<String, Failure> {
    let family: Family = family
        .parse()
        .map_err(|e: heisenberg_core::generate::GenError| Failure::input(e.to_string()))?;
    let mut params = GenParams::new(family, g.seed, n, t);
    params.max_entry = max_entry;
    let inst = generate(&params).map_err(|e| Failure::input(e.to_string()))?;
    let json = inst.to_json();
    match out {
        Some(path) => {
            fs::write(path, &json)
                .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
            Ok(String::new())
        }
        None => Ok(json),
    }
}

fn finish(r: Result<String, Failure>) -> ExitCode {
    match r {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("{}", f.message);
            ExitCode::from(f.status)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INPUT } else { 0 });
        }
    };
    let g = &cli.global;
    match &cli.command {
        Command::Decide { files } => run_batch(g, ProblemArg::Identity, files),
        Command::Group { files } => run_batch(g, ProblemArg::Group, files),
        Command::Oracle { file } => finish(run_oracle(g, file, ProblemArg::Identity, false)),
        Command::Audit { file, problem } => finish(run_oracle(g, file, *problem, true)),
        Command::Gen {
            family,
            n,
            t,
            max_entry,
            out,
        } => finish(run_gen(g, family, *n, *t, *max_entry, out.as_deref())),
    }
}
