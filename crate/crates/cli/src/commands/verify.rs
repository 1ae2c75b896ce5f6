use nfl_core::enumeration::{is_cup, Enumerator};
use nfl_core::measure::Measure;
use nfl_core::policy::BlackBox;
use nfl_core::table::Orientation;
use nfl_core::verifier::{
    average_performance, focus_pair, trace_multiset_equal, verify_nfl, verify_nunfl, verify_snfl, Verdict,
};
use nfl_core::{FunctionSet, Policy, ProblemDistribution, Rational, Scalar, SearchSpace, VerificationReport};
use serde_json::{json, Value};

use super::{cup_witness, cup_witness_holds, require_cup, tables_json, values_json};
use crate::report::{rational, Outcome, Report};
use crate::{parse_list, parse_measure, CliError, ProblemArgs};

fn outcome(v: Verdict) -> Outcome {
    match v {
        Verdict::Verified => Outcome::Verified,
        Verdict::Refuted => Outcome::Refuted,
    }
}

/// The explicit set, or the closure of a single `--values` table.
fn function_set(problem: &ProblemArgs, close: bool) -> Result<(SearchSpace, FunctionSet), CliError> {
    let set = problem.resolve()?;
    let fs = if close && set.single_inline {
        Enumerator::default().cup_class(&set.tables[0])?
    } else {
        FunctionSet::new(set.space.size(), set.tables)?
    };
    Ok((set.space, fs))
}

fn verification(
    command: &str,
    report: &VerificationReport,
    space: &SearchSpace,
    dist: &ProblemDistribution,
    measure: &Measure,
    check: bool,
) -> Result<Report, CliError> {
    let mut r = Report::new(command, report.claim().name(), outcome(report.verdict()))
        .averages("policy", report.averages())
        .table("policies", json!(report.averages().len()))
        .table("functions", json!(dist.support().count()));
    if let Some(avg) = report.common_average() {
        r = r.table("common_average", rational(avg));
    }
    if let Some(w) = report.witness() {
        r = r.witness(json!({
            "first_policy": w.first,
            "second_policy": w.second,
            "first_average": rational(&w.first_average),
            "second_average": rational(&w.second_average),
        }));
        if check {
            // Re-enumerate the two policies and recompute their averages.
            let policies = Enumerator::default().policies(space.size(), &dist.value_range())?;
            let a = average_performance(space, dist, &policies[w.first], measure)?;
            let b = average_performance(space, dist, &policies[w.second], measure)?;
            r.witness_checked = Some(a == w.first_average && b == w.second_average && a != b);
        }
    }
    Ok(r)
}

pub(super) fn nfl(size: usize, codomain: &str, measure: &str, check: bool) -> Result<Report, CliError> {
    let space = SearchSpace::new(size)?;
    let codomain = parse_list(codomain)?;
    let measure = parse_measure(measure)?;
    let enumerator = Enumerator::default();
    let report = verify_nfl(&space, &codomain, &measure, &enumerator)?;
    let fs = enumerator.functions(size, &codomain, Orientation::Maximize)?;
    let dist = ProblemDistribution::uniform(&fs)?;
    verification("verify nfl", &report, &space, &dist, &measure, check)
}

pub(super) fn snfl(problem: &ProblemArgs, measure: &str, check: bool) -> Result<Report, CliError> {
    let (space, fs) = function_set(problem, true)?;
    if let Some(r) = require_cup("verify snfl", "SNFL", &fs, check) {
        return Ok(r);
    }
    let measure = parse_measure(measure)?;
    let report = verify_snfl(&space, &fs, &measure, &Enumerator::default())?;
    let dist = ProblemDistribution::uniform(&fs)?;
    Ok(verification("verify snfl", &report, &space, &dist, &measure, check)?.table("set", tables_json(&fs)))
}

pub(super) fn nunfl(
    problem: &ProblemArgs,
    weights: Option<&str>,
    measure: &str,
    check: bool,
) -> Result<Report, CliError> {
    let (space, fs) = function_set(problem, true)?;
    let measure = parse_measure(measure)?;
    let weights = match weights {
        Some(w) => parse_list(w)?,
        None => vec![Rational::ratio(1, fs.len() as i64); fs.len()],
    };
    if weights.len() != fs.len() {
        return Err(CliError::Usage(format!("{} weights for a set of {} functions", weights.len(), fs.len())));
    }
    let dist = ProblemDistribution::new(fs.members().iter().cloned().zip(weights.iter().cloned()))?;
    let report = verify_nunfl(&space, &dist, &measure, &Enumerator::default())?;
    Ok(verification("verify nunfl", &report.report, &space, &dist, &measure, check)?
        .table("block_uniform", json!(report.block_uniform))
        .table("set", tables_json(&fs))
        .table("weights", values_json(&weights)))
}

pub(super) fn cup_check(problem: &ProblemArgs, check: bool) -> Result<Report, CliError> {
    let (_, fs) = function_set(problem, false)?;
    let verdict = is_cup(&fs);
    let outcome = if verdict.closed { Outcome::Verified } else { Outcome::Refuted };
    let mut r = Report::new("cup-check", "closed under permutation", outcome).table("functions", tables_json(&fs));
    if let Some(w) = verdict.witness {
        r = r.witness(cup_witness(w));
        if check {
            r.witness_checked = Some(cup_witness_holds(&fs, w));
        }
    }
    Ok(r)
}

fn trace_json(traces: &[Vec<Rational>]) -> Value {
    Value::Array(traces.iter().map(|t| values_json(t)).collect())
}

pub(super) fn trace_multisets(problem: &ProblemArgs, check: bool) -> Result<Report, CliError> {
    let (space, fs) = function_set(problem, true)?;
    if let Some(r) = require_cup("trace-multisets", "equal trace multisets", &fs, check) {
        return Ok(r);
    }
    let policies = Enumerator::default().policies(space.size(), &fs.value_range())?;
    let report = trace_multiset_equal(&space, &fs, &policies)?;
    let outcome = if report.equal { Outcome::Verified } else { Outcome::Refuted };
    let mut r = Report::new("trace-multisets", "equal trace multisets", outcome)
        .table("policies", json!(policies.len()))
        .table("set", tables_json(&fs))
        .table("multiset", trace_json(&report.multisets[0]));
    if let Some(i) = report.mismatch {
        r = r.witness(json!({ "policy": i, "multiset": trace_json(&report.multisets[i]) }));
        if check {
            let mut a: Vec<Vec<Rational>> = Vec::new();
            let mut b: Vec<Vec<Rational>> = Vec::new();
            for f in fs.members() {
                a.push(policies[0].run(&space, f, space.size())?.values());
                b.push(policies[i].run(&space, f, space.size())?.values());
            }
            a.sort();
            b.sort();
            r.witness_checked = Some(a != b);
        }
    }
    Ok(r)
}

fn named_policy(spec: &str, size: usize, codomain: Vec<Rational>) -> Result<Policy, CliError> {
    Ok(match spec {
        "ascending" => Policy::ascending(size, codomain)?,
        "descending" => Policy::descending(size, codomain)?,
        _ => {
            let seed = spec
                .strip_prefix("random:")
                .and_then(|s| s.parse::<u64>().ok())
                .ok_or_else(|| CliError::Usage(format!("policy `{spec}` is not ascending, descending or random:SEED")))?;
            let mut rng = nfl_core::algorithms::Lcg::new(seed);
            Policy::random(size, codomain, |k| rng.below(k))?
        }
    })
}

pub(super) fn focus(
    problem: &ProblemArgs,
    first: &str,
    second: &str,
    budget: Option<usize>,
    check: bool,
) -> Result<Report, CliError> {
    let set = problem.resolve()?;
    let f1 = &set.tables[0];
    let size = set.space.size();
    let m = budget.unwrap_or(size);
    let codomain = FunctionSet::singleton(f1.clone()).value_range();
    let a1 = named_policy(first, size, codomain.clone())?;
    let a2 = named_policy(second, size, codomain)?;
    let f2 = focus_pair(&set.space, &a1, &a2, f1, m)?;
    let t1 = a1.run(&set.space, f1, m)?;
    let t2 = a2.run(&set.space, &f2, m)?;
    let replayed = t1.values() == t2.values();
    let mut r = Report::new(
        "focus-pair",
        "focused pair replay",
        if replayed { Outcome::Verified } else { Outcome::Refuted },
    )
    .table("f1", values_json(f1.values()))
    .table("first_points", json!(t1.points()))
    .table("second_points", json!(t2.points()))
    .table("trace", values_json(&t1.values()))
    .witness(json!({ "f2": values_json(f2.values()) }));
    if check {
        let replay = a2.run(&set.space, &f2, m)?.values();
        r.witness_checked = Some(replay == t1.values() && f2.signature() == f1.signature());
    }
    Ok(r)
}
