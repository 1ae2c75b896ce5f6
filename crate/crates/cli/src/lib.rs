//! Command-line front end for `nfl-core`: loads problems, runs the
//! verification and counterexample procedures, and prints JSON reports.

mod commands;
pub mod problem;
pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nfl_core::algorithms::{AlgorithmKind, Seed};
use nfl_core::enumeration::Enumerator;
use nfl_core::measure::Measure;
use nfl_core::table::Orientation;
use nfl_core::{Rational, Scalar, SearchSpace, ValueTable};

use crate::problem::load_problem;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("{0}")]
    Io(String),
    #[error(transparent)]
    Core(#[from] nfl_core::Error),
}

#[derive(Debug, Parser)]
#[command(name = "nfl", version, about = "Exhaustive No-Free-Lunch verification on small search spaces")]
pub struct Cli {
    /// Also write a CSV export of the report.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Add a generation time to the report.
    #[arg(long, global = true)]
    pub timestamps: bool,
    /// Independently re-validate any witness before reporting it.
    #[arg(long, global = true)]
    pub check_witness: bool,
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true, env = "NFL_THREADS")]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a free-lunch theorem by enumerating every policy.
    Verify {
        #[command(subcommand)]
        claim: VerifyClaim,
    },
    /// Decide whether a set of functions is closed under permutation.
    CupCheck(ProblemArgs),
    /// Compare the multisets of full value traces across all policies.
    TraceMultisets(ProblemArgs),
    /// Build the function on which a second policy replays a first policy's trace.
    FocusPair {
        #[command(flatten)]
        problem: ProblemArgs,
        /// `ascending`, `descending` or `random:SEED`.
        #[arg(long, default_value = "ascending")]
        first: String,
        #[arg(long, default_value = "descending")]
        second: String,
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Average two algorithm families over a set that is not closed under permutation.
    Gap {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long, value_enum, default_value = "best-first")]
        first_algorithm: AlgorithmArg,
        #[arg(long, value_enum, default_value = "random-search")]
        second_algorithm: AlgorithmArg,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Landscape structure measures for each function.
    Metrics {
        #[command(flatten)]
        problem: ProblemArgs,
        /// Steps for the walk variant of locality.
        #[arg(long, default_value_t = 1)]
        walk: usize,
    },
    /// Problems whose permuted tables leave their class.
    Counterexample {
        #[command(subcommand)]
        which: CounterexampleKind,
    },
    /// Seed-averaged performance of every algorithm kind on each function.
    Tournament {
        #[command(flatten)]
        problem: ProblemArgs,
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Debug, Subcommand)]
pub enum VerifyClaim {
    /// All functions from the space into a codomain.
    Nfl {
        #[arg(long, default_value_t = 2)]
        space: usize,
        #[arg(long, default_value = "0,1")]
        codomain: String,
        /// `best:M` or `mean:M`.
        #[arg(long, default_value = "best:2")]
        measure: String,
    },
    /// A set closed under permutation (`--values` takes the closure of one table).
    Snfl {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long, default_value = "best:2")]
        measure: String,
    },
    /// A weighted set; weights follow the canonical member order.
    Nunfl {
        #[command(flatten)]
        problem: ProblemArgs,
        /// Comma-separated weights; uniform when omitted.
        #[arg(long)]
        weights: Option<String>,
        #[arg(long, default_value = "best:2")]
        measure: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum CounterexampleKind {
    /// MAX-2-SAT tables and formula realizability.
    Max2sat {
        #[arg(long, default_value_t = 3)]
        bits: u32,
        /// 1-based signed literal pairs, e.g. `1,2;-1,3`.
        #[arg(long, default_value = "1,2")]
        clauses: String,
        /// Table to test for realizability.
        #[arg(long, default_value = "0,1,1,0,1,1,1,1")]
        query: String,
    },
    /// Tour lengths and cost-matrix realizability.
    Tsp {
        /// JSON file holding a square cost matrix; a six-city ring by default.
        #[arg(long)]
        matrix: Option<PathBuf>,
    },
    /// Boolean programs scored against a target truth table.
    Boolgp {
        /// Program truth tables as 0/1 strings separated by `;`.
        #[arg(long, default_value = "0001;0111;1100")]
        programs: String,
        #[arg(long, default_value = "0001")]
        target: String,
        /// Scores to test for realizability.
        #[arg(long, default_value = "4,1,2")]
        scores: String,
    },
    /// Regression semantics as points; scores as squared distances.
    Symreg {
        #[arg(long, default_value = "0,0;4,0;0,3")]
        centers: String,
        #[arg(long, default_value = "1,2")]
        target: String,
        /// Squared radii to test; the target's radii with the first two swapped by default.
        #[arg(long)]
        radii: Option<String>,
        /// Semantic classes of points, e.g. `0,1;2`, checked against `--objective`.
        #[arg(long, requires = "objective")]
        classes: Option<String>,
        #[arg(long)]
        objective: Option<String>,
    },
}

/// Where the functions come from.
#[derive(Debug, Clone, Default, Args)]
pub struct ProblemArgs {
    /// Problem definition file; repeat to form a set.
    #[arg(long = "problem")]
    pub problems: Vec<PathBuf>,
    /// One table, comma separated; rationals as `p/q`.
    #[arg(long, conflicts_with_all = ["problems", "tables"])]
    pub values: Option<String>,
    /// Several tables separated by `;`.
    #[arg(long, conflicts_with = "problems")]
    pub tables: Option<String>,
    /// Number of points, for inline tables.
    #[arg(long)]
    pub space: Option<usize>,
    /// Bitstring width for inline tables; adds the bit-flip neighborhood.
    #[arg(long, conflicts_with = "space")]
    pub bits: Option<u32>,
    #[arg(long, value_enum, default_value = "maximize")]
    pub orientation: OrientationArg,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    #[arg(long, default_value = "best:4")]
    pub measure: String,
    /// `exhaustive` (every visiting order) or `lcg:N` (the first N generator seeds).
    #[arg(long, default_value = "exhaustive")]
    pub seeds: String,
}

#[derive(Debug, Clone, Copy, Default, ValueEnum)]
pub enum OrientationArg {
    #[default]
    Maximize,
    Minimize,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum AlgorithmArg {
    RandomSearch,
    BestFirst,
    WorstFirst,
}

impl From<AlgorithmArg> for AlgorithmKind {
    fn from(a: AlgorithmArg) -> Self {
        match a {
            AlgorithmArg::RandomSearch => AlgorithmKind::RandomSearch,
            AlgorithmArg::BestFirst => AlgorithmKind::BestFirst,
            AlgorithmArg::WorstFirst => AlgorithmKind::WorstFirst,
        }
    }
}

/// Functions sharing one search space.
pub struct ProblemSet {
    pub space: SearchSpace,
    pub tables: Vec<ValueTable>,
    /// True when the set came from `--values`.
    pub single_inline: bool,
    pub tours: Option<Vec<nfl_core::counterexamples::Tour>>,
}

pub fn parse_list(s: &str) -> Result<Vec<Rational>, CliError> {
    s.split(',')
        .map(|t| Rational::from_str_exact(t).ok_or_else(|| CliError::Usage(format!("`{t}` is not a rational"))))
        .collect()
}

pub fn parse_lists(s: &str) -> Result<Vec<Vec<Rational>>, CliError> {
    s.split(';').map(parse_list).collect()
}

pub fn parse_usizes(s: &str) -> Result<Vec<usize>, CliError> {
    s.split(',')
        .map(|t| t.trim().parse().map_err(|_| CliError::Usage(format!("`{t}` is not a count"))))
        .collect()
}

pub fn parse_measure(s: &str) -> Result<Measure, CliError> {
    let usage = || CliError::Usage(format!("measure `{s}` is not `best:M` or `mean:M`"));
    let (kind, m) = s.split_once(':').ok_or_else(usage)?;
    let m: usize = m.parse().map_err(|_| usage())?;
    Ok(match kind {
        "best" => Measure::best_so_far(m)?,
        "mean" => Measure::mean_of_trace(m)?,
        _ => return Err(usage()),
    })
}

pub fn parse_seeds(s: &str, size: usize) -> Result<Vec<Seed>, CliError> {
    if s == "exhaustive" {
        return Ok(nfl_core::algorithms::exhaustive_seeds(size, &Enumerator::default())?);
    }
    let n = s
        .strip_prefix("lcg:")
        .and_then(|n| n.parse::<u64>().ok())
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("seeds `{s}` is not `exhaustive` or `lcg:N`")))?;
    Ok((0..n).map(Seed::Lcg).collect())
}

impl ProblemArgs {
    pub fn resolve(&self) -> Result<ProblemSet, CliError> {
        let orientation = match self.orientation {
            OrientationArg::Maximize => Orientation::Maximize,
            OrientationArg::Minimize => Orientation::Minimize,
        };
        if !self.problems.is_empty() {
            let defs = self.problems.iter().map(|p| load_problem(p)).collect::<Result<Vec<_>, _>>()?;
            let first = &defs[0];
            if let Some(d) = defs.iter().find(|d| d.space.size() != first.space.size()) {
                return Err(CliError::Usage(format!(
                    "problems mix spaces of {} and {} points",
                    first.space.size(),
                    d.space.size()
                )));
            }
            return Ok(ProblemSet {
                space: first.space.clone(),
                tours: first.tours.clone(),
                tables: defs.into_iter().map(|d| d.table).collect(),
                single_inline: false,
            });
        }
        let (lists, single) = match (&self.values, &self.tables) {
            (Some(v), None) => (vec![parse_list(v)?], true),
            (None, Some(t)) => (parse_lists(t)?, false),
            _ => return Err(CliError::Usage("give --problem, --values or --tables".into())),
        };
        let len = lists[0].len();
        let space = match (self.bits, self.space) {
            (Some(n), _) => SearchSpace::bitstrings(n)?,
            (None, Some(s)) => SearchSpace::new(s)?,
            (None, None) => SearchSpace::new(len)?,
        };
        let tables = lists
            .into_iter()
            .map(|l| {
                if l.len() != space.size() {
                    return Err(CliError::Usage(format!(
                        "table of length {} for a space of {} points",
                        l.len(),
                        space.size()
                    )));
                }
                Ok(ValueTable::new(l, orientation)?)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ProblemSet {
            space,
            tables,
            single_inline: single,
            tours: None,
        })
    }
}

/// Runs one invocation, writing the report to `out` and diagnostics to
/// `err`. Returns the process exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{e}");
                return 1;
            }
            let _ = write!(out, "{e}");
            return 0;
        }
    };
    let result = match cli.threads {
        Some(0) => Err(CliError::Usage("--threads must be at least 1".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Usage(e.to_string()))
            .and_then(|pool| pool.install(|| commands::dispatch(&cli))),
        None => commands::dispatch(&cli),
    };
    let mut report = match result {
        Ok(r) => r,
        Err(CliError::Core(e)) => commands::precondition_report(&cli, &e),
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return 1;
        }
    };
    if cli.timestamps {
        report.generated_at = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .ok()
            .map(|d| d.as_secs());
    }
    if report.witness_checked == Some(false) {
        let _ = writeln!(err, "error: witness failed independent re-validation");
    }
    if let Some(path) = &cli.out {
        if let Err(e) = report.write_csv(path) {
            let _ = writeln!(err, "error: {e}");
            return 1;
        }
    }
    if let Err(e) = report.print(out) {
        let _ = writeln!(err, "error: {e}");
        return 1;
    }
    if let Some(e) = &report.error {
        let _ = writeln!(err, "precondition violated: {e}");
    }
    report.verdict.exit_code()
}
