use serde_json::Value;

use crate::args::Format;

pub const SCHEMA: &str = "permuton-lab/1";

/// Renders a result document. `table` names an array of objects that the
/// TSV format prints as rows; everything else is flattened to key/value lines.
pub fn render(doc: &Value, format: Format, table: Option<&str>) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(doc).expect("serializable");
            s.push('\n');
            s
        }
        Format::Tsv => tsv(doc, table),
        Format::Human => {
            let mut out = String::new();
            human(doc, 0, &mut out);
            out
        }
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(map) => {
            for (k, child) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, child, out);
            }
        }
        Value::Array(items) if items.iter().all(|i| !i.is_object() && !i.is_array()) => {
            out.push((prefix.to_string(), items.iter().map(scalar).collect::<Vec<_>>().join(";")));
        }
        Value::Array(items) => {
            for (i, child) in items.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), child, out);
            }
        }
        other => out.push((prefix.to_string(), scalar(other))),
    }
}

/// Like [`flatten`], but keeps nested arrays in one cell so every row has
/// the same columns.
fn flatten_row(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(map) => {
            for (k, child) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten_row(&key, child, out);
            }
        }
        Value::Array(items) if items.iter().all(|i| !i.is_object() && !i.is_array()) => {
            out.push((prefix.to_string(), items.iter().map(scalar).collect::<Vec<_>>().join(";")));
        }
        Value::Array(_) => out.push((prefix.to_string(), v.to_string())),
        other => out.push((prefix.to_string(), scalar(other))),
    }
}

fn tsv(doc: &Value, table: Option<&str>) -> String {
    let mut out = String::new();
    if let Some(rows) = table.and_then(|t| doc.get(t)).and_then(Value::as_array) {
        let flat: Vec<Vec<(String, String)>> = rows
            .iter()
            .map(|r| {
                let mut f = Vec::new();
                flatten_row("", r, &mut f);
                f
            })
            .collect();
        if let Some(first) = flat.first() {
            out.push_str(&first.iter().map(|(k, _)| k.as_str()).collect::<Vec<_>>().join("\t"));
            out.push('\n');
        }
        for row in flat {
            out.push_str(&row.into_iter().map(|(_, v)| v).collect::<Vec<_>>().join("\t"));
            out.push('\n');
        }
        return out;
    }
    let mut flat = Vec::new();
    flatten("", doc, &mut flat);
    for (k, v) in flat {
        out.push_str(&k);
        out.push('\t');
        out.push_str(&v);
        out.push('\n');
    }
    out
}

fn human(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, child) in map {
                match child {
                    Value::Object(_) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        human(child, indent + 1, out);
                    }
                    Value::Array(items) if items.iter().any(|i| i.is_object() || i.is_array()) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        human(child, indent + 1, out);
                    }
                    _ => out.push_str(&format!("{pad}{k}: {}\n", inline(child))),
                }
            }
        }
        Value::Array(items) => {
            for (i, item) in items.iter().enumerate() {
                match item {
                    Value::Object(_) | Value::Array(_) => {
                        out.push_str(&format!("{pad}[{i}]\n"));
                        human(item, indent + 1, out);
                    }
                    _ => out.push_str(&format!("{pad}- {}\n", inline(item))),
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", inline(other))),
    }
}

fn inline(v: &Value) -> String {
    match v {
        Value::Array(items) => format!("[{}]", items.iter().map(inline).collect::<Vec<_>>().join(", ")),
        other => scalar(other),
    }
}
