//! JSON input documents for matroids and mixed-form computations.
//!
//! Matroids: `{"type": "uniform", "r": 2, "n": 3}`, `{"type": "graph", "edges": [[0, 1], …]}`,
//! `{"type": "linear", "matrix": [["1", "1/2"], …]}`, `{"type": "gf", "p": 2, "matrix": [[1, 0], …]}`
//! and `{"type": "flats", "ground": 3, "flats": [[], [0], …]}`.
//!
//! Mixed forms: `{"type": "discriminant", "d": 3, "matrices": [[["1", "0", "0"], …], …]}`,
//! `{"type": "permanent", "matrix": […]}` and `{"type": "boxes", "d": 2, "widths": [["1", "0"], …]}`.

use std::path::Path;

use serde_json::Value;

use crate::error::{Error, Result};
use crate::linalg::{parse_rational, Rational, RationalMatrix};
use crate::matroid::Matroid;
use crate::mixed::{BoxTuple, SymMatrixTuple};

fn err(location: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Parse {
        location: location.into(),
        message: message.into(),
    }
}

fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| err(format!("line {} column {}", e.line(), e.column()), e.to_string()))
}

fn field<'a>(doc: &'a Value, key: &str) -> Result<&'a Value> {
    doc.get(key).ok_or_else(|| err(key, "missing field"))
}

fn as_usize(v: &Value, at: &str) -> Result<usize> {
    v.as_u64()
        .and_then(|x| usize::try_from(x).ok())
        .ok_or_else(|| err(at, "expected a nonnegative integer"))
}

fn as_array<'a>(v: &'a Value, at: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| err(at, "expected an array"))
}

/// A rational given as a `"p/q"` string or a JSON integer.
fn as_rational(v: &Value, at: &str) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s).map_err(|_| err(at, format!("invalid rational {s:?}"))),
        Value::Number(n) if n.is_i64() => Ok(Rational::from_integer(n.as_i64().unwrap_or(0).into())),
        _ => Err(err(at, "expected a rational string or an integer")),
    }
}

fn rational_rows(v: &Value, at: &str) -> Result<Vec<Vec<Rational>>> {
    as_array(v, at)?
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let here = format!("{at}[{i}]");
            as_array(row, &here)?
                .iter()
                .enumerate()
                .map(|(j, x)| as_rational(x, &format!("{here}[{j}]")))
                .collect()
        })
        .collect()
}

fn rational_matrix(v: &Value, at: &str) -> Result<RationalMatrix> {
    let rows = rational_rows(v, at)?;
    if let Some(i) = rows.iter().position(|r| r.len() != rows[0].len()) {
        return Err(err(format!("{at}[{i}]"), "rows have different lengths"));
    }
    RationalMatrix::from_rows(rows).map_err(|e| err(at, e.to_string()))
}

fn integer_rows(v: &Value, at: &str) -> Result<Vec<Vec<i64>>> {
    as_array(v, at)?
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let here = format!("{at}[{i}]");
            as_array(row, &here)?
                .iter()
                .enumerate()
                .map(|(j, x)| x.as_i64().ok_or_else(|| err(format!("{here}[{j}]"), "expected an integer")))
                .collect()
        })
        .collect()
}

fn index_lists(v: &Value, at: &str) -> Result<Vec<Vec<usize>>> {
    as_array(v, at)?
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let here = format!("{at}[{i}]");
            as_array(row, &here)?
                .iter()
                .enumerate()
                .map(|(j, x)| as_usize(x, &format!("{here}[{j}]")))
                .collect()
        })
        .collect()
}

pub fn matroid_from_value(doc: &Value) -> Result<Matroid> {
    let kind = field(doc, "type")?
        .as_str()
        .ok_or_else(|| err("type", "expected a string"))?;
    match kind {
        "uniform" => Matroid::uniform(as_usize(field(doc, "r")?, "r")?, as_usize(field(doc, "n")?, "n")?),
        "graph" => {
            let edges = index_lists(field(doc, "edges")?, "edges")?;
            let pairs = edges
                .iter()
                .enumerate()
                .map(|(i, e)| match e.as_slice() {
                    &[a, b] => Ok((a, b)),
                    _ => Err(err(format!("edges[{i}]"), "an edge has exactly two endpoints")),
                })
                .collect::<Result<Vec<_>>>()?;
            Matroid::from_graph(&pairs)
        }
        "linear" => Matroid::from_linear(&rational_matrix(field(doc, "matrix")?, "matrix")?),
        "gf" => {
            let p = field(doc, "p")?.as_u64().ok_or_else(|| err("p", "expected a prime"))?;
            let rows = integer_rows(field(doc, "matrix")?, "matrix")?;
            if let Some(i) = rows.iter().position(|r| r.len() != rows[0].len()) {
                return Err(err(format!("matrix[{i}]"), "rows have different lengths"));
            }
            Matroid::from_linear_gf(&rows, p)
        }
        "flats" => {
            let n = as_usize(field(doc, "ground")?, "ground")?;
            Matroid::from_flats(n, &index_lists(field(doc, "flats")?, "flats")?)
        }
        other => Err(err("type", format!("unknown matroid type {other:?}"))),
    }
}

pub fn parse_matroid_str(text: &str) -> Result<Matroid> {
    matroid_from_value(&parse_json(text)?)
}

pub fn parse_matroid_file(path: &Path) -> Result<Matroid> {
    parse_matroid_str(&std::fs::read_to_string(path)?)
}

#[derive(Clone, Debug, PartialEq)]
pub enum MixedDocument {
    Discriminant(SymMatrixTuple),
    Permanent(RationalMatrix),
    Boxes(BoxTuple),
}

pub fn mixed_from_value(doc: &Value) -> Result<MixedDocument> {
    let kind = field(doc, "type")?
        .as_str()
        .ok_or_else(|| err("type", "expected a string"))?;
    match kind {
        "discriminant" => {
            let d = as_usize(field(doc, "d")?, "d")?;
            let matrices = as_array(field(doc, "matrices")?, "matrices")?
                .iter()
                .enumerate()
                .map(|(i, m)| rational_matrix(m, &format!("matrices[{i}]")))
                .collect::<Result<Vec<_>>>()?;
            Ok(MixedDocument::Discriminant(SymMatrixTuple::new(d, matrices)?))
        }
        "permanent" => Ok(MixedDocument::Permanent(rational_matrix(field(doc, "matrix")?, "matrix")?)),
        "boxes" => {
            let d = as_usize(field(doc, "d")?, "d")?;
            Ok(MixedDocument::Boxes(BoxTuple::new(d, rational_rows(field(doc, "widths")?, "widths")?)?))
        }
        other => Err(err("type", format!("unknown document type {other:?}"))),
    }
}

pub fn parse_mixed_str(text: &str) -> Result<MixedDocument> {
    mixed_from_value(&parse_json(text)?)
}

pub fn parse_mixed_file(path: &Path) -> Result<MixedDocument> {
    parse_mixed_str(&std::fs::read_to_string(path)?)
}
