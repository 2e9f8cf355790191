//! Plain-text rendering of a report.

use std::fmt::Write;
use std::time::Duration;

use serde_json::Value;

use crate::Report;

/// Arrays longer than this are elided.
const LIST_LIMIT: usize = 12;

pub fn human(report: &Report, elapsed: Duration) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "unirat {} [{}] seed {}",
        report.command, report.status, report.seed
    );
    if let Some(e) = &report.error {
        let _ = writeln!(out, "error: {}::{}: {}", e.module, e.error, e.message);
    }
    write_value(&mut out, &report.result, 0);
    let _ = writeln!(out, "elapsed: {:.3} s", elapsed.as_secs_f64());
    out
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(a) if a.iter().all(|x| !x.is_array() && !x.is_object()) => {
            let shown: Vec<String> = a.iter().take(LIST_LIMIT).filter_map(scalar).collect();
            let more = if a.len() > LIST_LIMIT {
                format!(", ... ({} total)", a.len())
            } else {
                String::new()
            };
            Some(format!("[{}{more}]", shown.join(", ")))
        }
        _ => None,
    }
}

fn write_value(out: &mut String, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                match scalar(x) {
                    Some(s) => {
                        let _ = writeln!(out, "{pad}{k}: {s}");
                    }
                    None => {
                        let _ = writeln!(out, "{pad}{k}:");
                        write_value(out, x, depth + 1);
                    }
                }
            }
        }
        Value::Array(a) => {
            for x in a.iter().take(LIST_LIMIT) {
                match scalar(x) {
                    Some(s) => {
                        let _ = writeln!(out, "{pad}- {s}");
                    }
                    None => {
                        let _ = writeln!(out, "{pad}-");
                        write_value(out, x, depth + 1);
                    }
                }
            }
            if a.len() > LIST_LIMIT {
                let _ = writeln!(out, "{pad}... ({} total)", a.len());
            }
        }
        other => {
            if let Some(s) = scalar(other) {
                let _ = writeln!(out, "{pad}{s}");
            }
        }
    }
}
