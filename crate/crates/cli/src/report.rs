use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use nfl_core::Rational;
use serde::Serialize;
use serde_json::{json, Value};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Verified,
    Refuted,
    /// A question with no expected answer, such as a realizability query.
    Answered,
    PreconditionViolated,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Verified | Outcome::Answered => 0,
            Outcome::Refuted | Outcome::PreconditionViolated => 2,
        }
    }
}

/// One JSON document per invocation. Rationals are `"p/q"` strings (plain
/// `"p"` for integers).
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub claim: String,
    pub verdict: Outcome,
    pub witness: Option<Value>,
    pub tables: BTreeMap<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_checked: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generated_at: Option<u64>,
    /// Flat rows for `--out`, header first.
    #[serde(skip)]
    pub csv: Vec<Vec<String>>,
}

impl Report {
    pub fn new(command: &str, claim: &str, verdict: Outcome) -> Self {
        Self {
            command: command.to_string(),
            claim: claim.to_string(),
            verdict,
            witness: None,
            tables: BTreeMap::new(),
            error: None,
            witness_checked: None,
            generated_at: None,
            csv: Vec::new(),
        }
    }

    pub fn table(mut self, key: &str, value: Value) -> Self {
        self.tables.insert(key.to_string(), value);
        self
    }

    pub fn witness(mut self, value: Value) -> Self {
        self.witness = Some(value);
        self
    }

    /// Per-item averages as both a report table and CSV rows.
    pub fn averages(mut self, label: &str, averages: &[Rational]) -> Self {
        self.csv = std::iter::once(vec![label.to_string(), "average".to_string()])
            .chain(averages.iter().enumerate().map(|(i, a)| vec![i.to_string(), a.to_string()]))
            .collect();
        self.table("averages", rationals(averages))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }

    pub fn write_csv(&self, path: &Path) -> Result<(), CliError> {
        let io = |e: csv::Error| CliError::Io(format!("{}: {e}", path.display()));
        let mut w = csv::WriterBuilder::new().flexible(true).from_path(path).map_err(io)?;
        let fallback;
        let rows = if self.csv.is_empty() {
            fallback = flatten_tables(&self.tables);
            &fallback
        } else {
            &self.csv
        };
        for row in rows {
            w.write_record(row).map_err(io)?;
        }
        w.flush().map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Ok(())
    }

    pub fn print(&self, out: &mut dyn Write) -> Result<(), CliError> {
        out.write_all(self.to_json().as_bytes())
            .map_err(|e| CliError::Io(format!("stdout: {e}")))
    }
}

/// `key,path,value` rows for every scalar leaf of the tables.
fn flatten_tables(tables: &BTreeMap<String, Value>) -> Vec<Vec<String>> {
    fn walk(prefix: String, v: &Value, out: &mut Vec<Vec<String>>) {
        match v {
            Value::Array(items) => {
                for (i, item) in items.iter().enumerate() {
                    walk(format!("{prefix}[{i}]"), item, out);
                }
            }
            Value::Object(map) => {
                for (k, item) in map {
                    walk(format!("{prefix}.{k}"), item, out);
                }
            }
            Value::String(s) => out.push(vec![prefix, s.clone()]),
            other => out.push(vec![prefix, other.to_string()]),
        }
    }
    let mut out = vec![vec!["key".to_string(), "value".to_string()]];
    for (k, v) in tables {
        walk(k.clone(), v, &mut out);
    }
    out
}

pub fn rational(r: &Rational) -> Value {
    Value::String(r.to_string())
}

pub fn rationals(rs: &[Rational]) -> Value {
    Value::Array(rs.iter().map(rational).collect())
}

pub fn cup_witness(w: nfl_core::error::CupWitness) -> Value {
    json!({ "member": w.member, "swap": [w.swap.0, w.swap.1] })
}

#[cfg(test)]
mod tests {
    use super::*;
    use nfl_core::Scalar;

    #[test]
    fn rationals_render_exactly() {
        assert_eq!(rational(&Rational::ratio(5, 3)), json!("5/3"));
        assert_eq!(rational(&Rational::int(-2)), json!("-2"));
    }

    #[test]
    fn csv_falls_back_to_flattened_tables() {
        let r = Report::new("x", "y", Outcome::Answered).table("t", json!({"a": ["1", 2]}));
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.csv");
        r.write_csv(&path).unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "key,value\nt.a[0],1\nt.a[1],2\n");
    }

    #[test]
    fn exit_codes() {
        assert_eq!(Outcome::Verified.exit_code(), 0);
        assert_eq!(Outcome::Answered.exit_code(), 0);
        assert_eq!(Outcome::Refuted.exit_code(), 2);
        assert_eq!(Outcome::PreconditionViolated.exit_code(), 2);
    }
}
