//! Plain-text rendering of a report tree: nested objects become indented
//! sections, arrays of objects become aligned tables.

use serde_json::Value;

pub fn render(value: &Value) -> String {
    let mut out = String::new();
    match value {
        Value::Object(_) => render_object(value, 0, &mut out),
        other => out.push_str(&inline(other).unwrap_or_default()),
    }
    out
}

fn label(key: &str) -> String {
    key.replace('_', " ")
}

fn inline(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".to_string()),
        Value::Bool(b) => Some(if *b { "yes" } else { "no" }.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(items) => {
            let parts: Option<Vec<String>> = items.iter().map(inline).collect();
            parts.map(|p| format!("[{}]", p.join(", ")))
        }
        Value::Object(_) => None,
    }
}

/// String arrays too long for one line are shown as bullet lists.
fn long_strings(v: &Value) -> Option<Vec<&str>> {
    let Value::Array(items) = v else { return None };
    let strings: Option<Vec<&str>> = items.iter().map(Value::as_str).collect();
    strings.filter(|s| s.iter().map(|x| x.len() + 2).sum::<usize>() > 72)
}

fn render_object(v: &Value, depth: usize, out: &mut String) {
    let Value::Object(map) = v else { return };
    let indent = "  ".repeat(depth);
    let width = map
        .iter()
        .filter(|(_, v)| inline(v).is_some() && long_strings(v).is_none())
        .map(|(k, _)| label(k).len())
        .max()
        .unwrap_or(0);
    for (key, value) in map {
        if let Some(items) = long_strings(value) {
            out.push_str(&format!("{indent}{}\n", label(key)));
            for item in items {
                out.push_str(&format!("{indent}  - {item}\n"));
            }
        } else if let Some(text) = inline(value) {
            out.push_str(&format!("{indent}{:<width$}  {text}\n", label(key)));
        } else if let Value::Array(rows) = value {
            out.push_str(&format!("{indent}{}\n", label(key)));
            render_table(rows, depth + 1, out);
        } else {
            out.push_str(&format!("{indent}{}\n", label(key)));
            render_object(value, depth + 1, out);
        }
    }
}

fn render_table(rows: &[Value], depth: usize, out: &mut String) {
    let indent = "  ".repeat(depth);
    let Some(Value::Object(first)) = rows.first() else {
        return;
    };
    let headers: Vec<&String> = first.keys().collect();
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|row| {
            headers
                .iter()
                .map(|h| {
                    let v = row.get(h.as_str()).unwrap_or(&Value::Null);
                    inline(v).unwrap_or_else(|| v.to_string())
                })
                .collect()
        })
        .collect();
    let widths: Vec<usize> = headers
        .iter()
        .enumerate()
        .map(|(i, h)| {
            cells
                .iter()
                .map(|r| r[i].len())
                .chain([label(h).len()])
                .max()
                .unwrap_or(0)
        })
        .collect();
    let line = |parts: Vec<String>| {
        let padded: Vec<String> = parts
            .iter()
            .zip(&widths)
            .map(|(p, w)| format!("{p:<w$}"))
            .collect();
        format!("{indent}{}\n", padded.join("  ").trim_end())
    };
    out.push_str(&line(headers.iter().map(|h| label(h)).collect()));
    for row in cells {
        out.push_str(&line(row));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn renders_sections_and_tables() {
        let v = json!({
            "group": {"descriptor": "2^1x2^1", "cyclic": false},
            "witness": null,
            "rows": [{"tuple": [[0, 0]], "free_rank": 0}, {"tuple": [[1, 0]], "free_rank": 12}],
        });
        let text = render(&v);
        assert_eq!(
            text,
            "group\n  descriptor  2^1x2^1\n  cyclic      no\nwitness  -\nrows\n  tuple     free rank\n  [[0, 0]]  0\n  [[1, 0]]  12\n"
        );
    }
}
