//! Deterministic JSON: numbers rounded to 12 significant digits, integral
//! values written as integers, keys in insertion order.

use serde_json::{Number, Value};

pub fn round12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

pub fn normalize(v: Value) -> Value {
    match v {
        Value::Number(n) => match n.as_f64() {
            Some(x) if n.is_f64() => number(x),
            _ => Value::Number(n),
        },
        Value::Array(items) => Value::Array(items.into_iter().map(normalize).collect()),
        Value::Object(map) => Value::Object(map.into_iter().map(|(k, v)| (k, normalize(v))).collect()),
        other => other,
    }
}

fn number(x: f64) -> Value {
    let r = round12(x);
    if r.fract() == 0.0 && r.abs() < 1e15 {
        Value::Number((r as i64).into())
    } else {
        Number::from_f64(r).map_or(Value::Null, Value::Number)
    }
}

pub fn render(v: Value) -> String {
    serde_json::to_string(&normalize(v)).expect("serializable")
}
