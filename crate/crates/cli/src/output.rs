use std::io::Write;

use serde_json::{json, Value};
use tatek::exactnum::{complex_approximation, Cyclotomic};

const APPROX_DIGITS: usize = 12;
const PRECISION_KEYS: [&str; 4] = ["known_below", "low", "exponent", "q_bound"];

/// Prints `body` as pretty JSON. With `approx`, every exact coefficient is
/// replaced by `{"exact": …, "approx": [re, im]}`; precision bookkeeping is left alone.
pub fn emit(body: Value, approx: bool) {
    let body = if approx { annotate(body) } else { body };
    let text = serde_json::to_string_pretty(&body).expect("JSON values serialize");
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn annotate(v: Value) -> Value {
    let is_number = matches!(&v, Value::String(_))
        || matches!(&v, Value::Object(m) if m.len() == 2 && m.contains_key("conductor") && m.contains_key("coeffs"));
    if is_number {
        if let Ok(x) = serde_json::from_value::<Cyclotomic>(v.clone()) {
            let (re, im) = complex_approximation(&x, APPROX_DIGITS);
            return json!({ "exact": v, "approx": [re, im] });
        }
    }
    match v {
        Value::Array(items) => Value::Array(items.into_iter().map(annotate).collect()),
        Value::Object(map) => Value::Object(
            map.into_iter()
                .map(|(k, v)| {
                    let v = if PRECISION_KEYS.contains(&k.as_str()) { v } else { annotate(v) };
                    (k, v)
                })
                .collect(),
        ),
        other => other,
    }
}
