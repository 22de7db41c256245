//! Deterministic number formatting for every output mode.

use serde_json::Value;

/// Round to `digits` significant digits, ties to even.
pub fn round_sig(x: f64, digits: usize) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    // `{:e}` formats the exact binary value and breaks ties to even
    format!("{:.*e}", digits.saturating_sub(1), x).parse().expect("formatted float parses")
}

/// Shortest representation of the rounded value, in exponent form when
/// very small or very large.
pub fn fmt_num(x: f64, digits: usize) -> String {
    let r = round_sig(x, digits);
    if r == 0.0 {
        "0".to_string()
    } else if r.is_finite() && (r.abs() < 1e-5 || r.abs() >= 1e16) {
        format!("{r:e}")
    } else {
        r.to_string()
    }
}

/// Round every floating-point number in a JSON tree; integers are left alone.
pub fn round_json(v: &mut Value, digits: usize) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let r = round_sig(n.as_f64().expect("f64 number"), digits);
            *v = serde_json::Number::from_f64(r).map_or(Value::Null, Value::Number);
        }
        Value::Array(items) => items.iter_mut().for_each(|x| round_json(x, digits)),
        Value::Object(map) => map.values_mut().for_each(|x| round_json(x, digits)),
        _ => {}
    }
}

pub fn json_string(mut v: Value, digits: usize) -> String {
    round_json(&mut v, digits);
    serde_json::to_string(&v).expect("JSON values serialize")
}

/// `key = value` lines for a flat JSON object, nested objects prefixed.
pub fn text_lines(v: &Value, digits: usize) -> String {
    fn walk(prefix: &str, v: &Value, digits: usize, out: &mut String) {
        match v {
            Value::Object(map) => {
                for (k, x) in map {
                    let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                    walk(&key, x, digits, out);
                }
            }
            Value::Number(n) if n.is_f64() => {
                out.push_str(&format!("{prefix} = {}\n", fmt_num(n.as_f64().expect("f64"), digits)));
            }
            Value::String(s) => out.push_str(&format!("{prefix} = {s}\n")),
            other => out.push_str(&format!("{prefix} = {other}\n")),
        }
    }
    let mut out = String::new();
    walk("", v, digits, &mut out);
    out
}
