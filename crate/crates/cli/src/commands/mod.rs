mod counterexample;
mod explore;
mod verify;

use nfl_core::enumeration::{is_cup, FunctionSet as GenericSet};
use nfl_core::{Error, FunctionSet, Rational};
use serde_json::{json, Value};

use crate::report::{cup_witness, rationals, Outcome, Report};
use crate::{Cli, CliError, Command, CounterexampleKind, VerifyClaim};

pub(crate) fn dispatch(cli: &Cli) -> Result<Report, CliError> {
    let check = cli.check_witness;
    match &cli.command {
        Command::Verify { claim } => match claim {
            VerifyClaim::Nfl { space, codomain, measure } => verify::nfl(*space, codomain, measure, check),
            VerifyClaim::Snfl { problem, measure } => verify::snfl(problem, measure, check),
            VerifyClaim::Nunfl { problem, weights, measure } => {
                verify::nunfl(problem, weights.as_deref(), measure, check)
            }
        },
        Command::CupCheck(problem) => verify::cup_check(problem, check),
        Command::TraceMultisets(problem) => verify::trace_multisets(problem, check),
        Command::FocusPair { problem, first, second, budget } => {
            verify::focus(problem, first, second, *budget, check)
        }
        Command::Gap { problem, first_algorithm, second_algorithm, run } => {
            explore::gap(problem, (*first_algorithm).into(), (*second_algorithm).into(), run)
        }
        Command::Metrics { problem, walk } => explore::metrics(problem, *walk),
        Command::Tournament { problem, run } => explore::tournament(problem, run),
        Command::Counterexample { which } => match which {
            CounterexampleKind::Max2sat { bits, clauses, query } => {
                counterexample::max2sat(*bits, clauses, query, check)
            }
            CounterexampleKind::Tsp { matrix } => counterexample::tsp(matrix.as_deref(), check),
            CounterexampleKind::Boolgp { programs, target, scores } => {
                counterexample::boolgp(programs, target, scores, check)
            }
            CounterexampleKind::Symreg { centers, target, radii, classes, objective } => counterexample::symreg(
                centers,
                target,
                radii.as_deref(),
                classes.as_deref(),
                objective.as_deref(),
                check,
            ),
        },
    }
}

fn names(cli: &Cli) -> (&'static str, &'static str) {
    match &cli.command {
        Command::Verify { claim } => match claim {
            VerifyClaim::Nfl { .. } => ("verify nfl", "NFL"),
            VerifyClaim::Snfl { .. } => ("verify snfl", "SNFL"),
            VerifyClaim::Nunfl { .. } => ("verify nunfl", "NUNFL"),
        },
        Command::CupCheck(_) => ("cup-check", "closed under permutation"),
        Command::TraceMultisets(_) => ("trace-multisets", "equal trace multisets"),
        Command::FocusPair { .. } => ("focus-pair", "focused pair replay"),
        Command::Gap { .. } => ("gap", "performance gap"),
        Command::Metrics { .. } => ("metrics", "structure measures"),
        Command::Tournament { .. } => ("tournament", "algorithm tournament"),
        Command::Counterexample { which } => match which {
            CounterexampleKind::Max2sat { .. } => ("counterexample max2sat", "MAX-2-SAT realizability"),
            CounterexampleKind::Tsp { .. } => ("counterexample tsp", "TSP realizability"),
            CounterexampleKind::Boolgp { .. } => ("counterexample boolgp", "Boolean GP realizability"),
            CounterexampleKind::Symreg { .. } => ("counterexample symreg", "regression realizability"),
        },
    }
}

/// Report for an input that violates a procedure's precondition.
pub(crate) fn precondition_report(cli: &Cli, e: &Error) -> Report {
    let (command, claim) = names(cli);
    let mut r = Report::new(command, claim, Outcome::PreconditionViolated);
    r.error = Some(e.to_string());
    if let Error::NotCup(w) = e {
        r.witness = Some(cup_witness(*w));
    }
    r
}

/// A not-closed set as a precondition report, with the swap witness
/// optionally re-checked.
fn require_cup(command: &str, claim: &str, fs: &FunctionSet, check: bool) -> Option<Report> {
    let verdict = is_cup(fs);
    let w = verdict.witness?;
    let mut r = Report::new(command, claim, Outcome::PreconditionViolated)
        .witness(cup_witness(w))
        .table("functions", tables_json(fs));
    r.error = Some(Error::NotCup(w).to_string());
    if check {
        r.witness_checked = Some(cup_witness_holds(fs, w));
    }
    Some(r)
}

fn cup_witness_holds(fs: &FunctionSet, w: nfl_core::error::CupWitness) -> bool {
    fs.members()
        .get(w.member)
        .is_some_and(|f| !fs.contains_values(f.swapped(w.swap.0, w.swap.1).values()))
}

fn tables_json<S>(fs: &GenericSet<S>) -> Value
where
    S: nfl_core::Scalar,
{
    Value::Array(
        fs.members()
            .iter()
            .map(|f| Value::Array(f.values().iter().map(|v| json!(v.to_string())).collect()))
            .collect(),
    )
}

fn values_json(values: &[Rational]) -> Value {
    rationals(values)
}
