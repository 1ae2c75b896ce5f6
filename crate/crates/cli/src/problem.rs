//! JSON problem definitions.
//!
//! ```json
//! {"space": {"bits": 2}, "values": [0, 1, 1, 2]}
//! {"space": {"size": 3}, "values": ["1/2", 0, 3], "orientation": "minimize"}
//! {"generator": "onemax", "bits": 4}
//! {"generator": "max2sat", "bits": 3, "clauses": [[1, 2], [-1, 3]]}
//! {"generator": "tsp", "matrix": [[0, 1, 2], [1, 0, 3], [2, 3, 0]]}
//! ```
//!
//! `neighborhood` is `"bit-flip"`, `"2-opt"`, `"none"` or `{"edges": [[0, 1], ...]}`.

use std::path::Path;

use nfl_core::counterexamples::{max2sat_table, tour_space, tour_table, Max2SatInstance, Tour};
use nfl_core::space::Encoding;
use nfl_core::table::Orientation;
use nfl_core::{Rational, Scalar, SearchSpace, TspInstance, ValueTable};
use serde::Deserialize;
use serde_json::Value;

use crate::CliError;

#[derive(Debug, Clone)]
pub struct ProblemDefinition {
    pub space: SearchSpace,
    pub table: ValueTable,
    /// Point labels for tour spaces.
    pub tours: Option<Vec<Tour>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProblem {
    space: Option<RawSpace>,
    values: Option<Vec<Value>>,
    generator: Option<String>,
    bits: Option<u32>,
    clauses: Option<Vec<[i64; 2]>>,
    matrix: Option<Vec<Vec<Value>>>,
    neighborhood: Option<RawNeighborhood>,
    orientation: Option<RawOrientation>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpace {
    size: Option<usize>,
    bits: Option<u32>,
    cities: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RawNeighborhood {
    Named(String),
    Edges { edges: Vec<(usize, usize)> },
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "lowercase")]
enum RawOrientation {
    Maximize,
    Minimize,
}

/// Where a schema problem was found: the first line mentioning `field`.
fn schema_error(text: &str, field: &str, message: impl std::fmt::Display) -> CliError {
    let needle = format!("\"{field}\"");
    let line = text.lines().position(|l| l.contains(&needle)).map_or(1, |i| i + 1);
    CliError::Schema(format!("line {line}, field `{field}`: {message}"))
}

/// Parses a JSON number or a `"p/q"` string exactly.
pub fn parse_number(v: &Value) -> Option<Rational> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(Rational::int)
            .or_else(|| Rational::from_str_exact(&n.to_string())),
        Value::String(s) => Rational::from_str_exact(s),
        _ => None,
    }
}

fn numbers(text: &str, field: &str, raw: &[Value]) -> Result<Vec<Rational>, CliError> {
    raw.iter()
        .enumerate()
        .map(|(i, v)| {
            parse_number(v).ok_or_else(|| {
                schema_error(text, field, format!("entry {i} ({v}) is not an integer or \"p/q\" rational"))
            })
        })
        .collect()
}

pub fn load_problem(path: &Path) -> Result<ProblemDefinition, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    parse_problem(&text).map_err(|e| match e {
        CliError::Schema(msg) => CliError::Schema(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn parse_problem(text: &str) -> Result<ProblemDefinition, CliError> {
    let raw: RawProblem = serde_json::from_str(text)
        .map_err(|e| CliError::Schema(format!("line {}, column {}: {e}", e.line(), e.column())))?;
    let orientation = match raw.orientation {
        Some(RawOrientation::Minimize) => Orientation::Minimize,
        Some(RawOrientation::Maximize) => Orientation::Maximize,
        None if raw.generator.as_deref() == Some("tsp") => Orientation::Minimize,
        None => Orientation::Maximize,
    };
    let bits = raw.bits.or(raw.space.as_ref().and_then(|s| s.bits));
    let mut tours = None;
    let (space, values) = match raw.generator.as_deref() {
        None => {
            let values = raw.values.as_deref().ok_or_else(|| schema_error(text, "values", "missing"))?;
            let values = numbers(text, "values", values)?;
            let space = match (&raw.space, bits) {
                (_, Some(n)) => SearchSpace::bitstrings(n).map_err(|e| schema_error(text, "bits", e))?,
                (Some(RawSpace { size: Some(s), .. }), None) => {
                    SearchSpace::new(*s).map_err(|e| schema_error(text, "size", e))?
                }
                (Some(RawSpace { cities: Some(_), .. }), None) => {
                    return Err(schema_error(text, "cities", "tour spaces need the tsp generator"))
                }
                _ => SearchSpace::new(values.len()).map_err(|e| schema_error(text, "values", e))?,
            };
            if values.len() != space.size() {
                return Err(schema_error(
                    text,
                    "values",
                    format!("{} values for a space of {} points", values.len(), space.size()),
                ));
            }
            (space, values)
        }
        Some(name @ ("onemax" | "zeromax" | "parity")) => {
            let n = bits.ok_or_else(|| schema_error(text, "bits", format!("{name} needs a bit width")))?;
            let table = match name {
                "onemax" => ValueTable::onemax(n),
                "zeromax" => ValueTable::zeromax(n),
                _ => ValueTable::parity(n),
            }
            .map_err(|e| schema_error(text, "bits", e))?;
            let space = SearchSpace::bitstrings(n).map_err(|e| schema_error(text, "bits", e))?;
            (space, table.into_values())
        }
        Some("max2sat") => {
            let n = bits.ok_or_else(|| schema_error(text, "bits", "max2sat needs a variable count"))?;
            let clauses = raw.clauses.as_deref().unwrap_or(&[]);
            let inst = Max2SatInstance::from_signed(n, clauses).map_err(|e| schema_error(text, "clauses", e))?;
            let table: ValueTable = max2sat_table(&inst).map_err(|e| schema_error(text, "bits", e))?;
            let space = SearchSpace::bitstrings(n).map_err(|e| schema_error(text, "bits", e))?;
            (space, table.into_values())
        }
        Some("tsp") => {
            let rows = raw.matrix.as_deref().ok_or_else(|| schema_error(text, "matrix", "missing"))?;
            let matrix = rows
                .iter()
                .map(|r| numbers(text, "matrix", r))
                .collect::<Result<Vec<_>, _>>()?;
            let inst = TspInstance::new(matrix).map_err(|e| schema_error(text, "matrix", e))?;
            if let Some(c) = raw.space.as_ref().and_then(|s| s.cities) {
                if c != inst.cities() {
                    return Err(schema_error(text, "cities", format!("matrix has {} cities", inst.cities())));
                }
            }
            let (ts, space) = tour_space(inst.cities()).map_err(|e| schema_error(text, "matrix", e))?;
            let table = tour_table(&inst, &ts).map_err(|e| schema_error(text, "matrix", e))?;
            tours = Some(ts);
            (space, table.into_values())
        }
        Some(other) => return Err(schema_error(text, "generator", format!("unknown generator `{other}`"))),
    };
    let space = apply_neighborhood(text, space, raw.neighborhood)?;
    let table = ValueTable::new(values, orientation).map_err(|e| schema_error(text, "values", e))?;
    Ok(ProblemDefinition { space, table, tours })
}

fn apply_neighborhood(
    text: &str,
    space: SearchSpace,
    nb: Option<RawNeighborhood>,
) -> Result<SearchSpace, CliError> {
    let field = "neighborhood";
    match nb {
        None => Ok(space),
        Some(RawNeighborhood::Named(name)) => match name.as_str() {
            "bit-flip" => match space.encoding() {
                Some(Encoding::Bits(n)) => SearchSpace::bitstrings(n).map_err(|e| schema_error(text, field, e)),
                _ => Err(schema_error(text, field, "bit-flip needs a bitstring space")),
            },
            "2-opt" => match space.encoding() {
                Some(Encoding::Permutation(_)) => Ok(space),
                _ => Err(schema_error(text, field, "2-opt needs the tsp generator")),
            },
            "none" => {
                let mut bare = SearchSpace::new(space.size()).map_err(|e| schema_error(text, field, e))?;
                if let Some(enc) = space.encoding() {
                    bare = bare.with_encoding(enc).map_err(|e| schema_error(text, field, e))?;
                }
                Ok(bare)
            }
            other => Err(schema_error(text, field, format!("unknown neighborhood `{other}`"))),
        },
        Some(RawNeighborhood::Edges { edges }) => {
            let mut bare = SearchSpace::new(space.size()).map_err(|e| schema_error(text, field, e))?;
            if let Some(enc) = space.encoding() {
                bare = bare.with_encoding(enc).map_err(|e| schema_error(text, field, e))?;
            }
            bare.with_edges(&edges).map_err(|e| schema_error(text, field, e))
        }
    }
}
