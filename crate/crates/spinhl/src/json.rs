//! Text and JSON encodings. Rationals are written as `"p/q"` strings, or as
//! plain integers when the denominator is 1.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::Deserialize;
use serde_json::{json, Value};
use spinhl_core::identities::Report;
use spinhl_core::pfaffian::SkewMatrix;
use spinhl_core::robbins::{Arrow, Damt, MonotoneTriangle};
use spinhl_core::series::TruncSeries;
use spinhl_core::vertex::PathEnsemble;
use spinhl_core::{Partition, Rat};

pub fn parse_rat(text: &str) -> Result<Rat> {
    let text = text.trim();
    let value = match text.split_once('/') {
        Some((n, d)) => {
            let n: i64 = n.trim().parse().with_context(|| format!("bad numerator in {text:?}"))?;
            let d: i64 = d.trim().parse().with_context(|| format!("bad denominator in {text:?}"))?;
            if d == 0 {
                bail!("zero denominator in {text:?}");
            }
            Rat::new(n.into(), d.into())
        }
        None => Rat::from_integer(text.parse::<i64>().with_context(|| format!("bad rational {text:?}"))?.into()),
    };
    Ok(value)
}

/// A comma separated list of rationals; the empty string is the empty list.
pub fn parse_rats(text: &str) -> Result<Vec<Rat>> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',').map(parse_rat).collect()
}

pub fn parse_ints(text: &str) -> Result<Vec<i64>> {
    text.split(',').map(|p| p.trim().parse::<i64>().with_context(|| format!("bad integer {p:?}"))).collect()
}

pub fn parse_partition(text: &str) -> Result<Partition> {
    text.parse::<Partition>().map_err(|e| anyhow::anyhow!("{e}"))
}

pub fn rat(r: &Rat) -> Value {
    Value::String(r.to_string())
}

pub fn rats(rs: &[Rat]) -> Value {
    Value::Array(rs.iter().map(rat).collect())
}

pub fn series(s: &TruncSeries) -> Value {
    let terms: Vec<Value> = s.terms().map(|(e, c)| json!({ "exponents": e, "coeff": rat(c) })).collect();
    json!({ "variables": s.basis().n(), "D": s.basis().cap(), "terms": terms })
}

pub fn report(r: &Report) -> Value {
    let params: serde_json::Map<String, Value> =
        r.params.iter().map(|(k, v)| (k.clone(), Value::String(v.clone()))).collect();
    json!({
        "check": r.check,
        "params": params,
        "status": r.status.to_string(),
        "witness": r.witness,
        "notes": r.notes,
    })
}

pub fn ensemble(e: &PathEnsemble) -> Value {
    json!({ "states": e.states })
}

pub fn triangle(m: &MonotoneTriangle) -> Value {
    json!({ "rows": m.rows() })
}

fn arrow(a: Arrow) -> &'static str {
    match a {
        Arrow::SouthWest => "sw",
        Arrow::Down => "down",
        Arrow::SouthEast => "se",
    }
}

pub fn damt(d: &Damt) -> Value {
    let arrows: Vec<Vec<&str>> = d.arrows.iter().map(|row| row.iter().map(|&a| arrow(a)).collect()).collect();
    json!({ "rows": d.triangle.rows(), "arrows": arrows })
}

/// A skew-symmetric matrix file: `{"entries": [["0", "3/4"], ["-3/4", "0"]]}`,
/// optionally with `"labels"` naming the rows.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixFile {
    entries: Vec<Vec<Value>>,
    labels: Option<Vec<usize>>,
}

fn entry(v: &Value) -> Result<Rat> {
    match v {
        Value::String(s) => parse_rat(s),
        Value::Number(n) => match n.as_i64() {
            Some(i) => Ok(Rat::from_integer(i.into())),
            None => bail!("non-integer number {n}; write rationals as \"p/q\""),
        },
        other => bail!("unexpected matrix entry {other}"),
    }
}

pub fn read_matrix(path: &Path) -> Result<SkewMatrix<Rat>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let file: MatrixFile = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    let d = file.entries.len();
    let mut m = Vec::with_capacity(d);
    for row in &file.entries {
        if row.len() != d {
            bail!("matrix is not square");
        }
        m.push(row.iter().map(entry).collect::<Result<Vec<_>>>()?);
    }
    if let Some((i, j)) = (0..d).flat_map(|i| (0..d).map(move |j| (i, j))).find(|&(i, j)| m[i][j] != -m[j][i].clone()) {
        bail!("matrix is not skew-symmetric at ({i}, {j})");
    }
    let labels = file.labels.unwrap_or_else(|| (1..=d).collect());
    if labels.len() != d {
        bail!("{} labels for dimension {d}", labels.len());
    }
    let index = |l: usize| labels.iter().position(|&k| k == l).unwrap();
    SkewMatrix::from_upper(labels.clone(), Rat::from_integer(1.into()), |a, b| Ok(m[index(a)][index(b)].clone()))
        .map_err(|e| anyhow::anyhow!("{e}"))
}
