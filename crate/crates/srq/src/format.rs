//! JSON instance files.
//!
//! An instance is an object with an integer `n` and the matrices `B`, `W`,
//! `D` and optionally `V` (identity when absent). Each matrix is either a
//! row-major array of `n * n` numbers or an array of `n` numbers standing for
//! a diagonal matrix.

use std::path::Path;

use serde::Serialize;
use serde_json::{Map, Value};
use srq_core::{Matrix, SrqError, SrqInstance};

use crate::error::{CliError, Result};

fn input(msg: String) -> CliError {
    CliError::Input(msg)
}

fn matrix_field(obj: &Map<String, Value>, name: &str, n: usize) -> Result<Option<Matrix>> {
    let Some(value) = obj.get(name) else {
        return Ok(None);
    };
    let items = value.as_array().ok_or_else(|| input(format!("field `{name}`: expected an array of numbers")))?;
    let mut data = Vec::with_capacity(items.len());
    for (k, item) in items.iter().enumerate() {
        let v = item.as_f64().ok_or_else(|| input(format!("field `{name}`: element {k} is not a number")))?;
        if !v.is_finite() {
            return Err(input(format!("field `{name}`: element {k} is not finite")));
        }
        data.push(v);
    }
    if data.len() == n * n {
        Matrix::from_row_major(n, data).map(Some).map_err(|e| input(format!("field `{name}`: {e}")))
    } else if data.len() == n {
        Ok(Some(Matrix::from_diag(&data)))
    } else {
        Err(input(format!(
            "field `{name}`: expected {} (row-major) or {n} (diagonal) numbers, found {}",
            n * n,
            data.len()
        )))
    }
}

fn describe(e: SrqError) -> CliError {
    input(format!("invalid instance: {e}"))
}

/// Parses and validates an instance from JSON text.
pub fn parse_instance(text: &str) -> Result<SrqInstance> {
    let value: Value = serde_json::from_str(text).map_err(|e| input(format!("malformed JSON: {e}")))?;
    let obj = value.as_object().ok_or_else(|| input("top level: expected a JSON object".to_string()))?;
    let n = obj
        .get("n")
        .ok_or_else(|| input("field `n`: missing".to_string()))?
        .as_u64()
        .filter(|&n| n > 0)
        .ok_or_else(|| input("field `n`: expected a positive integer".to_string()))? as usize;
    let required = |name: &str| -> Result<Matrix> {
        matrix_field(obj, name, n)?.ok_or_else(|| input(format!("field `{name}`: missing")))
    };
    let b = required("B")?;
    let w = required("W")?;
    let d = required("D")?;
    let v = matrix_field(obj, "V", n)?.unwrap_or_else(|| Matrix::identity(n));
    SrqInstance::validate(b, w, d, v).map_err(describe)
}

pub fn read_instance(path: &Path) -> Result<SrqInstance> {
    let text = std::fs::read_to_string(path).map_err(|e| input(format!("cannot read {}: {e}", path.display())))?;
    parse_instance(&text)
}

#[derive(Serialize)]
struct InstanceFile<'a> {
    n: usize,
    #[serde(rename = "B")]
    b: &'a [f64],
    #[serde(rename = "W")]
    w: &'a [f64],
    #[serde(rename = "D")]
    d: &'a [f64],
    #[serde(rename = "V")]
    v: &'a [f64],
}

/// Row-major JSON rendering of an instance, one line.
pub fn instance_to_json(inst: &SrqInstance) -> Result<String> {
    let file = InstanceFile {
        n: inst.dim(),
        b: inst.b().as_slice(),
        w: inst.w().as_slice(),
        d: inst.d().as_slice(),
        v: inst.v().as_slice(),
    };
    Ok(serde_json::to_string(&file)?)
}
