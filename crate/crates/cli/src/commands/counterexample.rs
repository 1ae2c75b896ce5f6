use std::path::Path;

use nfl_core::counterexamples::{
    all_tours, boolgp_objective, boolgp_realizable, duplicated_semantics_check, max2sat_realizable, max2sat_table,
    spheres_intersect, squared_distances, tour_length, tsp_realizable, two_opt_neighbors_within, Exhaustion,
    Max2SatInstance, Realizability, SemanticsVerdict, Tour, TourConstraint,
};
use nfl_core::linalg::transpose_apply;
use nfl_core::table::Orientation;
use nfl_core::{Rational, Scalar, TspInstance, ValueTable};
use serde_json::{json, Value};

use super::values_json;
use crate::problem::parse_number;
use crate::report::{rational, Outcome, Report};
use crate::{parse_list, parse_lists, parse_usizes, CliError};

/// Six cities on a ring: neighbors cost 1, two apart 2, opposite 9.
const RING_COSTS: [[i64; 6]; 6] = [
    [0, 1, 2, 9, 2, 1],
    [1, 0, 1, 2, 9, 2],
    [2, 1, 0, 1, 2, 9],
    [9, 2, 1, 0, 1, 2],
    [2, 9, 2, 1, 0, 1],
    [1, 2, 9, 2, 1, 0],
];

fn exhaustion(e: &Exhaustion) -> Value {
    json!({ "examined": e.examined.to_string(), "search_space": e.search_space.to_string(), "complete": e.is_complete() })
}

fn same_multiset(a: &[Rational], b: &[Rational]) -> bool {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    a.sort();
    b.sort();
    a == b
}

pub(super) fn max2sat(bits: u32, clauses: &str, query: &str, check: bool) -> Result<Report, CliError> {
    let pairs = clauses
        .split(';')
        .filter(|c| !c.trim().is_empty())
        .map(|c| {
            let lits: Vec<i64> = c
                .split(',')
                .map(|l| l.trim().parse().map_err(|_| CliError::Usage(format!("`{l}` is not a literal"))))
                .collect::<Result<_, _>>()?;
            <[i64; 2]>::try_from(lits).map_err(|_| CliError::Usage(format!("clause `{c}` needs two literals")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let inst = Max2SatInstance::from_signed(bits, &pairs)?;
    let table: ValueTable = max2sat_table(&inst)?;
    let query = ValueTable::new(parse_list(query)?, Orientation::Maximize)?;
    let answer = max2sat_realizable(&query, bits)?;
    let formula: Vec<String> = inst.clauses().iter().map(|c| c.to_string()).collect();
    let mut r = Report::new("counterexample max2sat", "MAX-2-SAT realizability", Outcome::Answered)
        .table("formula", json!(formula))
        .table("table", values_json(table.values()))
        .table("query", values_json(query.values()))
        .table("query_is_permutation", json!(same_multiset(table.values(), query.values())))
        .table("query_realizable", json!(answer.is_realizable()));
    match &answer {
        Realizability::Realizable(found) => {
            let clauses: Vec<String> = found.clauses().iter().map(|c| c.to_string()).collect();
            r = r.witness(json!({ "realizing_formula": clauses }));
            if check {
                r.witness_checked = Some(max2sat_table::<Rational>(found)? == query);
            }
        }
        Realizability::Unrealizable(cert) => {
            r = r.witness(json!({ "no_realizing_formula": exhaustion(cert) }));
            if check {
                let again = max2sat_realizable(&query, bits)?;
                r.witness_checked = Some(cert.is_complete() && again.certificate() == Some(cert));
            }
        }
    }
    Ok(r)
}

fn label(t: &Tour) -> String {
    let sep = if t.len() > 9 { "-" } else { "" };
    t.cities().iter().map(|c| (c + 1).to_string()).collect::<Vec<_>>().join(sep)
}

fn load_matrix(path: &Path) -> Result<TspInstance, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let raw: Vec<Vec<Value>> = serde_json::from_str(&text).map_err(|e| {
        CliError::Schema(format!("{}: line {}, column {}: {e}", path.display(), e.line(), e.column()))
    })?;
    let rows = raw
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(j, v)| {
                    parse_number(v).ok_or_else(|| {
                        CliError::Schema(format!("{}: entry [{i}][{j}] ({v}) is not a rational", path.display()))
                    })
                })
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    TspInstance::new(rows).map_err(|e| CliError::Schema(format!("{}: {e}", path.display())))
}

/// Swaps the best and worst tour lengths and asks whether any cost matrix
/// gives the best tour the worst length while its adjacent-exchange
/// neighbors keep theirs: once with free costs, once with costs >= 0.
pub(super) fn tsp(matrix: Option<&Path>, check: bool) -> Result<Report, CliError> {
    let inst = match matrix {
        Some(p) => load_matrix(p)?,
        None => TspInstance::from_integers(&RING_COSTS.map(|r| r.to_vec()))?,
    };
    let n = inst.cities();
    let tours = all_tours(n)?;
    let lengths = tours
        .iter()
        .map(|t| tour_length(&inst, t.cities()))
        .collect::<nfl_core::Result<Vec<_>>>()?;
    let best = (0..tours.len()).min_by_key(|&i| &lengths[i]).expect("at least one tour");
    let worst = (0..tours.len()).max_by_key(|&i| (&lengths[i], std::cmp::Reverse(i))).expect("at least one tour");
    let neighbors = two_opt_neighbors_within(&tours[best], 2)?;
    let mut constraints = vec![TourConstraint { tour: tours[best].clone(), length: lengths[worst].clone() }];
    for nb in &neighbors {
        constraints.push(TourConstraint { length: tour_length(&inst, nb.cities())?, tour: nb.clone() });
    }
    let tour_json = |t: &Tour, l: &Rational| json!({ "tour": label(t), "length": rational(l) });
    let mut r = Report::new("counterexample tsp", "TSP realizability", Outcome::Answered)
        .table("cities", json!(n))
        .table("best_tour", tour_json(&tours[best], &lengths[best]))
        .table("worst_tour", tour_json(&tours[worst], &lengths[worst]))
        .table(
            "system",
            Value::Array(constraints.iter().map(|c| tour_json(&c.tour, &c.length)).collect()),
        );
    let mut witness = serde_json::Map::new();
    let mut all_checked = true;
    for (key, nonnegative) in [("equations", false), ("nonnegative_costs", true)] {
        let answer = tsp_realizable(n, &constraints, nonnegative)?;
        r = r.table(&format!("{key}_consistent"), json!(answer.is_realizable()));
        let (w, ok) = tsp_witness(n, &constraints, &answer, nonnegative);
        witness.insert(key.to_string(), w);
        all_checked &= ok;
    }
    r = r.witness(Value::Object(witness));
    if check {
        r.witness_checked = Some(all_checked);
    }
    Ok(r)
}

/// The witness for one analysis and whether it re-validates.
fn tsp_witness(
    n: usize,
    constraints: &[TourConstraint<Rational>],
    answer: &Realizability<TspInstance, Vec<Rational>>,
    nonnegative: bool,
) -> (Value, bool) {
    let zero = Rational::int(0);
    match answer {
        Realizability::Realizable(found) => {
            let costs: Vec<Value> = found.costs().iter().map(|row| values_json(row)).collect();
            let ok = constraints
                .iter()
                .all(|c| tour_length(found, c.tour.cities()).is_ok_and(|l| l == c.length))
                && (!nonnegative || found.costs().iter().flatten().all(|c| c >= &zero));
            (json!({ "cost_matrix": costs }), ok)
        }
        Realizability::Unrealizable(y) => {
            let rhs = y
                .iter()
                .zip(constraints)
                .fold(zero.clone(), |acc, (yi, c)| acc + yi.clone() * c.length.clone());
            let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
            let rows: Vec<Vec<Rational>> = constraints
                .iter()
                .map(|c| {
                    let edges: Vec<(usize, usize)> = c.tour.edges().collect();
                    pairs.iter().map(|p| Rational::count(edges.iter().filter(|e| *e == p).count())).collect()
                })
                .collect();
            let combined = transpose_apply(&rows, y, pairs.len());
            let ok = if nonnegative {
                combined.iter().all(|v| v <= &zero) && rhs > zero
            } else {
                combined.iter().all(|v| v == &zero) && rhs != zero
            };
            (json!({ "multipliers": values_json(y), "combined_length": rational(&rhs) }), ok)
        }
    }
}

fn parse_bits(s: &str) -> Result<Vec<bool>, CliError> {
    s.trim()
        .chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(CliError::Usage(format!("`{s}` is not a 0/1 string"))),
        })
        .collect()
}

fn bits_string(v: &[bool]) -> String {
    v.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

pub(super) fn boolgp(programs: &str, target: &str, scores: &str, check: bool) -> Result<Report, CliError> {
    let programs = programs.split(';').map(parse_bits).collect::<Result<Vec<_>, _>>()?;
    let target = parse_bits(target)?;
    let actual = boolgp_objective(&programs, &target)?;
    let query = parse_usizes(scores)?;
    let answer = boolgp_realizable(&programs, &query)?;
    let mut r = Report::new("counterexample boolgp", "Boolean GP realizability", Outcome::Answered)
        .table("programs", json!(programs.iter().map(|p| bits_string(p)).collect::<Vec<_>>()))
        .table("target", json!(bits_string(&target)))
        .table("scores", json!(actual))
        .table("query", json!(query))
        .table("query_realizable", json!(answer.is_realizable()));
    match &answer {
        Realizability::Realizable(t) => {
            r = r.witness(json!({ "target": bits_string(t) }));
            if check {
                r.witness_checked = Some(boolgp_objective(&programs, t)? == query);
            }
        }
        Realizability::Unrealizable(cert) => {
            r = r.witness(json!({ "no_target": exhaustion(cert) }));
            if check {
                let cases = programs[0].len() as u32;
                r.witness_checked = Some(cert.is_complete() && cert.search_space == 1u128 << cases);
            }
        }
    }
    Ok(r)
}

pub(super) fn symreg(
    centers: &str,
    target: &str,
    radii: Option<&str>,
    classes: Option<&str>,
    objective: Option<&str>,
    check: bool,
) -> Result<Report, CliError> {
    let centers = parse_lists(centers)?;
    let target = parse_list(target)?;
    let true_radii = squared_distances(&centers, &target)?;
    let query = match radii {
        Some(r) => parse_list(r)?,
        None => {
            let mut q = true_radii.clone();
            if q.len() >= 2 {
                q.swap(0, 1);
            }
            q
        }
    };
    let answer = spheres_intersect(&centers, &query)?;
    let mut r = Report::new("counterexample symreg", "regression realizability", Outcome::Answered)
        .table("centers", Value::Array(centers.iter().map(|c| values_json(c)).collect()))
        .table("target", values_json(&target))
        .table("squared_radii", values_json(&true_radii))
        .table("query", values_json(&query))
        .table("note", json!("scores are squared distances; realizability matches RMSE"))
        .table("query_realizable", json!(answer.intersect))
        .table(
            "distance_range",
            json!({
                "min": answer.range_min.as_ref().map(rational),
                "max": answer.range_max.as_ref().map(rational),
            }),
        );
    if let Some(w) = &answer.witness {
        r = r.witness(json!({ "target": values_json(w) }));
        if check {
            r.witness_checked = Some(squared_distances(&centers, w)? == query);
        }
    }
    if let (Some(classes), Some(objective)) = (classes, objective) {
        let classes = classes.split(';').map(parse_usizes).collect::<Result<Vec<_>, _>>()?;
        let table = ValueTable::new(parse_list(objective)?, Orientation::Minimize)?;
        let verdict = match duplicated_semantics_check(&classes, &table)? {
            SemanticsVerdict::Consistent => json!("consistent"),
            SemanticsVerdict::NotRegression { first, second } => {
                json!({ "not_regression": { "first": first, "second": second } })
            }
        };
        r = r.table("duplicate_semantics", verdict);
    }
    Ok(r)
}
