//! The algebra file format:
//! `{"field": F, "dim": d, "basis": [names], "table": [{"i", "j", "terms": [{"k", "c"}]}]}`.

use std::collections::BTreeSet;

use serde::Deserialize;
use serde_json::{json, Value};

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::field::{Field, FieldDescriptor};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAlgebra {
    field: RawField,
    dim: i64,
    #[serde(default)]
    basis: Option<Vec<String>>,
    #[serde(default)]
    table: Vec<RawRow>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawField {
    Name(String),
    Descriptor(FieldDescriptor),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRow {
    i: i64,
    j: i64,
    terms: Vec<RawTerm>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTerm {
    k: i64,
    c: Value,
}

fn index(value: i64, dim: usize, at: &str) -> Result<usize> {
    usize::try_from(value)
        .ok()
        .filter(|&v| v < dim)
        .ok_or_else(|| Error::Format(format!("{at}: index {value} out of range for dimension {dim}")))
}

/// Parses the JSON text of an algebra file.
pub fn parse_algebra(text: &str) -> Result<Algebra> {
    let raw: RawAlgebra = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
    let desc = match raw.field {
        RawField::Name(s) => s.parse()?,
        RawField::Descriptor(d) => d,
    };
    let field = Field::new(&desc).map_err(|e| Error::Format(format!("field: {e}")))?;
    let dim = usize::try_from(raw.dim)
        .map_err(|_| Error::Format(format!("dim: expected a non-negative integer, got {}", raw.dim)))?;
    let mut seen = BTreeSet::new();
    let mut entries = Vec::new();
    for (n, row) in raw.table.iter().enumerate() {
        let i = index(row.i, dim, &format!("table[{n}].i"))?;
        let j = index(row.j, dim, &format!("table[{n}].j"))?;
        if !seen.insert((i, j)) {
            return Err(Error::Format(format!(
                "table[{n}]: duplicate row for (i, j) = ({i}, {j})"
            )));
        }
        for (m, term) in row.terms.iter().enumerate() {
            let at = format!("table[{n}].terms[{m}]");
            let k = index(term.k, dim, &format!("{at}.k"))?;
            let c = field
                .decode(&term.c)
                .map_err(|e| Error::Format(format!("{at}.c: {e}")))?;
            entries.push((i, j, k, c));
        }
    }
    let algebra = Algebra::new(&field, dim, entries).map_err(|e| Error::Format(e.to_string()))?;
    match raw.basis {
        Some(names) => algebra
            .with_names(names)
            .map_err(|e| Error::Format(format!("basis: {e}"))),
        None => Ok(algebra),
    }
}

pub fn algebra_to_json(a: &Algebra) -> Value {
    let field = a.field();
    let mut table = Vec::new();
    for i in 0..a.dim() {
        for j in 0..a.dim() {
            let entries = a.entries(i, j);
            if entries.is_empty() {
                continue;
            }
            let terms: Vec<Value> = entries
                .iter()
                .map(|(k, c)| json!({"k": k, "c": field.encode(c)}))
                .collect();
            table.push(json!({"i": i, "j": j, "terms": terms}));
        }
    }
    json!({
        "field": field.descriptor(),
        "dim": a.dim(),
        "basis": a.names(),
        "table": table,
    })
}

pub fn write_algebra(a: &Algebra) -> String {
    serde_json::to_string_pretty(&algebra_to_json(a)).expect("algebra serializes")
}
