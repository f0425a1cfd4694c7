//! Arguments that carry JSON: either a path or the JSON text itself.

use std::path::Path;

use cubestrata::cell_classifier::CoefficientAssignment;
use cubestrata::subdivisions::{HeightFunction, Subdivision};
use cubestrata::vinberg::{CoxeterDiagram, GramLattice};
use serde_json::Value;

use crate::CliError;

pub fn load(arg: &str) -> Result<Value, CliError> {
    let t = arg.trim_start();
    let text = if t.starts_with('{') || t.starts_with('[') {
        arg.to_string()
    } else {
        std::fs::read_to_string(Path::new(arg)).map_err(|e| CliError::Input(format!("{arg}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{arg}: {e}")))
}

pub fn subdivision(arg: &str) -> Result<Subdivision, CliError> {
    Subdivision::from_json(&load(arg)?).map_err(|e| CliError::Input(e.to_string()))
}

pub fn heights(arg: &str) -> Result<HeightFunction, CliError> {
    HeightFunction::from_json(&load(arg)?).map_err(|e| CliError::Input(e.to_string()))
}

pub fn coefficients(arg: &str) -> Result<CoefficientAssignment, CliError> {
    CoefficientAssignment::from_json(&load(arg)?).map_err(|e| CliError::Input(e.to_string()))
}

pub fn lattice(arg: &str) -> Result<GramLattice, CliError> {
    GramLattice::from_json(&load(arg)?).map_err(|e| CliError::Input(e.to_string()))
}

/// `"1,0,0,0"` or `"[1,0,0,0]"`.
pub fn vector(arg: &str) -> Result<Vec<i64>, CliError> {
    arg.trim()
        .trim_start_matches('[')
        .trim_end_matches(']')
        .split(',')
        .map(|s| s.trim().parse::<i64>().map_err(|e| CliError::Input(format!("bad vector {arg:?}: {e}"))))
        .collect()
}

/// `{"gram": [[..]], "labels": [..]}`; labels default to vertex numbers.
/// The literal `odd1` selects the closed-form diagram at the odd1 cusp.
pub fn diagram(arg: &str, window: i64) -> Result<CoxeterDiagram, CliError> {
    if arg == "odd1" {
        return Ok(CoxeterDiagram::odd1_window(window));
    }
    let v = load(arg)?;
    let v = v.get("diagram").unwrap_or(&v);
    let gram: Vec<Vec<i64>> = serde_json::from_value(v.get("gram").cloned().unwrap_or(Value::Null))
        .map_err(|e| CliError::Input(format!("diagram gram: {e}")))?;
    let n = gram.len();
    if gram.iter().any(|r| r.len() != n) {
        return Err(CliError::Input("diagram gram must be square".into()));
    }
    if (0..n).any(|i| (0..n).any(|j| gram[i][j] != gram[j][i])) {
        return Err(CliError::Input("diagram gram must be symmetric".into()));
    }
    let labels: Vec<String> = match v.get("labels") {
        Some(l) => serde_json::from_value(l.clone()).map_err(|e| CliError::Input(format!("diagram labels: {e}")))?,
        None => (0..n).map(|i| i.to_string()).collect(),
    };
    if labels.len() != n {
        return Err(CliError::Input("one label per vertex".into()));
    }
    Ok(CoxeterDiagram { labels, gram, vectors: None, coords: None })
}
