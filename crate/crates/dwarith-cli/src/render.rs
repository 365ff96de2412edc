//! Plain-text rendering of structured reports.

use serde_json::Value;

/// Longest object rendered on a single line.
const INLINE_WIDTH: usize = 72;

/// Indented `key: value` lines; short arrays and objects stay on one line.
pub fn text(value: &Value) -> String {
    let mut out = String::new();
    write_value(value, 0, &mut out);
    while out.ends_with('\n') {
        out.pop();
    }
    out
}

fn inline(value: &Value) -> Option<String> {
    match value {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(items) => {
            let parts: Option<Vec<String>> = items.iter().map(inline).collect();
            parts.map(|p| format!("[{}]", p.join(", ")))
        }
        Value::Object(map) => {
            let parts: Option<Vec<String>> = map.iter().map(|(k, v)| inline(v).map(|s| format!("{k}: {s}"))).collect();
            parts.map(|p| format!("{{{}}}", p.join(", "))).filter(|s| s.len() <= INLINE_WIDTH)
        }
    }
}

fn write_value(value: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                match inline(v) {
                    Some(s) => out.push_str(&format!("{pad}{k}: {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        write_value(v, indent + 1, out);
                    }
                }
            }
        }
        Value::Array(items) => {
            for item in items {
                match inline(item) {
                    Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                    None => {
                        let mut nested = String::new();
                        write_value(item, indent + 1, &mut nested);
                        let body = nested.trim_start();
                        out.push_str(&format!("{pad}- {body}"));
                    }
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", inline(other).unwrap_or_default())),
    }
}
