use nfl_core::algorithms::{seed_average, AlgorithmKind, SeededAlgorithm};
use nfl_core::metrics::{
    count_local_optima, crossover_locality, fdc, local_optima_counts, locality, locality_steps, modularity_score,
    steepness, Comparison, OptimumTies, UniformMask,
};
use nfl_core::verifier::demonstrate_gap;
use nfl_core::{FunctionSet, Rational, Scalar};
use rayon::prelude::*;
use serde_json::{json, Value};

use super::{tables_json, values_json};
use crate::report::{rational, Outcome, Report};
use crate::{parse_measure, parse_seeds, CliError, ProblemArgs, RunArgs};

fn kind_name(k: AlgorithmKind) -> &'static str {
    match k {
        AlgorithmKind::RandomSearch => "random-search",
        AlgorithmKind::BestFirst => "best-first",
        AlgorithmKind::WorstFirst => "worst-first",
    }
}

pub(super) fn gap(problem: &ProblemArgs, a: AlgorithmKind, b: AlgorithmKind, run: &RunArgs) -> Result<Report, CliError> {
    let set = problem.resolve()?;
    let fs = FunctionSet::new(set.space.size(), set.tables)?;
    let measure = parse_measure(&run.measure)?;
    let seeds = parse_seeds(&run.seeds, set.space.size())?;
    let gap = demonstrate_gap(
        &set.space,
        &fs,
        &SeededAlgorithm::family(a, &seeds),
        &SeededAlgorithm::family(b, &seeds),
        &measure,
    )?;
    Ok(Report::new("gap", "performance gap", Outcome::Answered)
        .table("set", tables_json(&fs))
        .table("seeds", json!(seeds.len()))
        .witness(json!({
            "first_algorithm": kind_name(a),
            "second_algorithm": kind_name(b),
            "first_average": rational(&gap.average_a),
            "second_average": rational(&gap.average_b),
            "difference": rational(&gap.difference),
        })))
}

fn comparison(c: &Comparison<Rational>) -> Value {
    json!({ "left": rational(&c.left), "right": rational(&c.right), "holds": c.holds })
}

fn or_error<T>(r: nfl_core::Result<T>, f: impl FnOnce(T) -> Value) -> Value {
    match r {
        Ok(v) => f(v),
        Err(e) => json!({ "unavailable": e.to_string() }),
    }
}

pub(super) fn metrics(problem: &ProblemArgs, walk: usize) -> Result<Report, CliError> {
    let set = problem.resolve()?;
    let space = &set.space;
    let per_function: Vec<Value> = set
        .tables
        .iter()
        .map(|f| {
            let mut m = serde_json::Map::new();
            m.insert("values".into(), values_json(f.values()));
            m.insert("locality".into(), or_error(locality(space, f), |c| comparison(&c)));
            if walk > 1 {
                m.insert(format!("locality_{walk}_steps"), or_error(locality_steps(space, f, walk), |c| comparison(&c)));
            }
            if let Some(n) = space.bit_width() {
                m.insert(
                    "crossover_locality_uniform".into(),
                    or_error(crossover_locality(space, f, &UniformMask { bits: n }), |c| comparison(&c)),
                );
            }
            m.insert("steepness".into(), or_error(steepness(space, f), |c| comparison(&c)));
            m.insert("fdc".into(), or_error(fdc(space, f, OptimumTies::Reject), |r| json!(r)));
            m.insert("local_optima".into(), or_error(count_local_optima(space, f), |n| json!(n)));
            m.insert(
                "modularity (simplified)".into(),
                or_error(modularity_score(space, f), |s| rational(&s)),
            );
            Value::Object(m)
        })
        .collect();
    let mut r = Report::new("metrics", "structure measures", Outcome::Answered).table("functions", Value::Array(per_function));
    if set.tables.len() > 1 {
        let fs = FunctionSet::new(space.size(), set.tables.clone())?;
        r = r.table("local_optima_counts", or_error(local_optima_counts(space, &fs), |s| json!(s)));
    }
    Ok(r)
}

pub(super) fn tournament(problem: &ProblemArgs, run: &RunArgs) -> Result<Report, CliError> {
    let set = problem.resolve()?;
    let measure = parse_measure(&run.measure)?;
    let seeds = parse_seeds(&run.seeds, set.space.size())?;
    let kinds = [AlgorithmKind::RandomSearch, AlgorithmKind::BestFirst, AlgorithmKind::WorstFirst];
    let jobs: Vec<(usize, AlgorithmKind)> = (0..set.tables.len())
        .flat_map(|i| kinds.iter().map(move |&k| (i, k)))
        .collect();
    let scores = jobs
        .par_iter()
        .map(|&(i, k)| seed_average(k, &set.space, &set.tables[i], &measure, &seeds))
        .collect::<nfl_core::Result<Vec<Rational>>>()?;
    let mut csv = vec![vec!["function".to_string(), "algorithm".to_string(), "average".to_string()]];
    let mut rows = Vec::new();
    for (&(i, k), s) in jobs.iter().zip(&scores) {
        csv.push(vec![i.to_string(), kind_name(k).to_string(), s.to_string()]);
        rows.push(json!({ "function": i, "algorithm": kind_name(k), "average": rational(s) }));
    }
    let n = Rational::count(set.tables.len());
    let overall: serde_json::Map<String, Value> = kinds
        .iter()
        .enumerate()
        .map(|(ki, &k)| {
            let total = scores
                .iter()
                .skip(ki)
                .step_by(kinds.len())
                .fold(Rational::int(0), |acc, s| acc + s.clone());
            (kind_name(k).to_string(), rational(&(total / n.clone())))
        })
        .collect();
    let mut r = Report::new("tournament", "algorithm tournament", Outcome::Answered)
        .table("seeds", json!(seeds.len()))
        .table("results", Value::Array(rows))
        .table("overall", Value::Object(overall));
    r.csv = csv;
    Ok(r)
}
