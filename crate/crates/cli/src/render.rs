//! Plain-text tables for `--format table`. Presentation only; JSON is the
//! interchange format.

use serde_json::Value;

const CELL_LIMIT: usize = 100;

fn inline(v: &Value) -> String {
    let text = match v {
        Value::Null => "-".to_string(),
        Value::String(s) => s.clone(),
        Value::Array(items) if items.iter().all(|i| i.is_array()) => {
            // Edge lists read best as {a,b,c}.
            items.iter().map(set_like).collect::<Vec<_>>().join(" ")
        }
        Value::Array(items) => items.iter().map(inline).collect::<Vec<_>>().join(","),
        Value::Object(map) => map.iter().map(|(k, v)| format!("{k}={}", inline(v))).collect::<Vec<_>>().join(" "),
        other => other.to_string(),
    };
    if text.chars().count() > CELL_LIMIT {
        let cut: String = text.chars().take(CELL_LIMIT).collect();
        format!("{cut}...")
    } else {
        text
    }
}

fn set_like(v: &Value) -> String {
    match v {
        Value::Array(items) => format!("{{{}}}", items.iter().map(inline).collect::<Vec<_>>().join(",")),
        other => inline(other),
    }
}

fn grid(header: &[String], rows: &[Vec<String>]) -> String {
    let mut width: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in width.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: &[String]| {
        cells.iter().zip(&width).map(|(c, w)| format!("{c:<w$}")).collect::<Vec<_>>().join("  ").trim_end().to_string()
    };
    let mut out = vec![line(header), width.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>().join("  ")];
    out.extend(rows.iter().map(|r| line(r)));
    out.join("\n")
}

fn object_rows(items: &[Value]) -> Option<String> {
    let first = items.first()?.as_object()?;
    let header: Vec<String> = first.keys().cloned().collect();
    let mut rows = Vec::new();
    for item in items {
        let map = item.as_object()?;
        rows.push(header.iter().map(|h| map.get(h).map(inline).unwrap_or_default()).collect());
    }
    Some(grid(&header, &rows))
}

/// Top-level fields as `key  value` lines; arrays of objects become their
/// own column tables underneath.
pub fn render_table(v: &Value) -> String {
    match v {
        Value::Object(map) => {
            let mut pairs = Vec::new();
            let mut sections = Vec::new();
            for (key, value) in map {
                match value {
                    Value::Array(items) if !items.is_empty() && items.iter().all(Value::is_object) => {
                        if let Some(t) = object_rows(items) {
                            sections.push(format!("{key}:\n{t}"));
                            continue;
                        }
                        pairs.push(vec![key.clone(), inline(value)]);
                    }
                    _ => pairs.push(vec![key.clone(), inline(value)]),
                }
            }
            let mut out = vec![grid(&["field".into(), "value".into()], &pairs)];
            out.extend(sections);
            out.join("\n\n")
        }
        Value::Array(items) => object_rows(items).unwrap_or_else(|| items.iter().map(inline).collect::<Vec<_>>().join("\n")),
        other => inline(other),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn edges_render_as_sets() {
        let t = render_table(&json!({ "n": 5, "edges": [[0, 1], [0, 2]] }));
        assert!(t.contains("{0,1} {0,2}"));
        assert!(t.lines().any(|l| l.starts_with("n ")));
    }

    #[test]
    fn object_arrays_become_tables() {
        let t = render_table(&json!({ "rows": [{ "a": 1, "b": "x" }, { "a": 22, "b": "y" }] }));
        assert!(t.contains("rows:\na   b"));
        assert!(t.contains("22  y"));
    }
}
