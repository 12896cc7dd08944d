//! JSON input for the information calculus.

use serde_json::Value;
use trendwave_core::infocalc::JointDistribution;

/// Accepts either `{"cardinalities": [...], "probabilities": [...]}` with a
/// flat row-major table, or a rectangular nested array such as
/// `[[0.25, 0.25], [0.25, 0.25]]`.
pub fn parse_distribution(value: &Value) -> Result<JointDistribution, String> {
    if let Value::Object(map) = value {
        let cards = map
            .get("cardinalities")
            .and_then(Value::as_array)
            .ok_or("missing `cardinalities` array")?
            .iter()
            .map(|v| v.as_u64().map(|c| c as usize).ok_or("cardinalities must be integers"))
            .collect::<Result<Vec<_>, _>>()?;
        let probs = map
            .get("probabilities")
            .and_then(Value::as_array)
            .ok_or("missing `probabilities` array")?
            .iter()
            .map(|v| v.as_f64().ok_or("probabilities must be numbers"))
            .collect::<Result<Vec<_>, _>>()?;
        return JointDistribution::new(cards, probs).map_err(|e| e.to_string());
    }
    let mut shape = Vec::new();
    let mut probe = value;
    while let Value::Array(items) = probe {
        if items.is_empty() {
            return Err("empty array in table".into());
        }
        shape.push(items.len());
        probe = &items[0];
    }
    if shape.is_empty() {
        return Err("expected an object or a nested array".into());
    }
    let mut flat = Vec::with_capacity(shape.iter().product());
    flatten(value, &shape, &mut flat)?;
    JointDistribution::new(shape, flat).map_err(|e| e.to_string())
}

fn flatten(value: &Value, shape: &[usize], out: &mut Vec<f64>) -> Result<(), String> {
    match (value, shape.split_first()) {
        (Value::Array(items), Some((&n, rest))) => {
            if items.len() != n {
                return Err(format!("ragged table: expected {n} entries, found {}", items.len()));
            }
            items.iter().try_for_each(|v| flatten(v, rest, out))
        }
        (v, None) => {
            out.push(v.as_f64().ok_or_else(|| format!("expected a number, found {v}"))?);
            Ok(())
        }
        (v, Some(_)) => Err(format!("ragged table: expected an array, found {v}")),
    }
}
