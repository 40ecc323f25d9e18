//! Plain-text rendering of the JSON payloads.

use serde_json::Value;

/// Renders a payload as aligned rows. Verification reports, series and
/// arrays of records get dedicated layouts; anything else falls back to
/// `key: value` lines.
pub fn render(v: &Value) -> String {
    if let Some(suites) = v.get("suites").and_then(Value::as_array) {
        return verify_table(suites, v["pass"].as_bool().unwrap_or(false));
    }
    if v.get("coeffs").is_some() && v.get("offset").is_some() {
        return series_table(v);
    }
    match v {
        Value::Array(rows) => records(rows),
        Value::Object(m) => {
            let mut out = String::new();
            for (k, x) in m {
                match x {
                    Value::Array(rows) if rows.iter().all(Value::is_object) && !rows.is_empty() => {
                        out.push_str(&format!("{k}:\n"));
                        out.push_str(&records(rows));
                    }
                    _ => out.push_str(&format!("{k}: {}\n", scalar(x))),
                }
            }
            out
        }
        other => format!("{}\n", scalar(other)),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

fn records(rows: &[Value]) -> String {
    let mut cols: Vec<String> = Vec::new();
    for r in rows {
        if let Value::Object(m) = r {
            for k in m.keys() {
                if !cols.contains(k) && !matches!(m[k], Value::Object(_)) {
                    cols.push(k.clone());
                }
            }
        }
    }
    if cols.is_empty() {
        return rows.iter().map(|r| format!("{}\n", scalar(r))).collect();
    }
    let cells: Vec<Vec<String>> = rows.iter().map(|r| cols.iter().map(|c| scalar(r.get(c).unwrap_or(&Value::Null))).collect()).collect();
    let widths: Vec<usize> =
        cols.iter().enumerate().map(|(i, c)| cells.iter().map(|r| r[i].len()).chain([c.len()]).max().unwrap_or(0)).collect();
    let line = |xs: &[String]| {
        let s: Vec<String> = xs.iter().zip(&widths).map(|(x, w)| format!("{x:<w$}")).collect();
        format!("{}\n", s.join("  ").trim_end())
    };
    let mut out = line(&cols);
    for r in &cells {
        out.push_str(&line(r));
    }
    out
}

fn series_table(v: &Value) -> String {
    let mut out = format!("offset {}  cutoff {}\n", scalar(&v["offset"]), scalar(&v["cutoff"]));
    if let Some(cs) = v["coeffs"].as_array() {
        for (i, c) in cs.iter().enumerate() {
            out.push_str(&format!("{i:>4}  {}\n", scalar(c)));
        }
    }
    out
}

fn verify_table(suites: &[Value], pass: bool) -> String {
    let mut out = String::new();
    for s in suites {
        let name = scalar(&s["suite"]);
        for c in s["checks"].as_array().into_iter().flatten() {
            let mark = if c["pass"].as_bool() == Some(true) { "PASS" } else { "FAIL" };
            out.push_str(&format!("{mark}  {name:<10}  {}\n", scalar(&c["name"])));
        }
        if let Some(ms) = s.get("elapsed_ms") {
            out.push_str(&format!("      {name:<10}  {} ms\n", scalar(ms)));
        }
    }
    out.push_str(if pass { "all checks passed\n" } else { "some checks failed\n" });
    out
}
