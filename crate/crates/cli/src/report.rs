//! Ordered `key=value` reports with an equivalent JSON form.

use serde_json::{Map, Value};

#[derive(Debug, Default)]
pub struct Report {
    entries: Vec<(String, Value)>,
    /// Set when a verification verdict came out negative (exit code 1).
    pub failed: bool,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn text(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.entries
            .push((key.to_string(), Value::String(value.to_string())));
        self
    }

    pub fn int(&mut self, key: &str, value: i64) -> &mut Self {
        self.entries.push((key.to_string(), Value::from(value)));
        self
    }

    pub fn flag(&mut self, key: &str, value: bool) -> &mut Self {
        self.entries.push((key.to_string(), Value::Bool(value)));
        self
    }

    /// A boolean whose `false` value marks the report as failed.
    pub fn verdict(&mut self, key: &str, value: bool) -> &mut Self {
        self.failed |= !value;
        self.flag(key, value)
    }

    pub fn list<T: ToString>(&mut self, key: &str, values: &[T]) -> &mut Self {
        let items = values
            .iter()
            .map(|v| Value::String(v.to_string()))
            .collect();
        self.entries.push((key.to_string(), Value::Array(items)));
        self
    }

    pub fn matrix<T: ToString>(&mut self, key: &str, rows: &[Vec<T>]) -> &mut Self {
        let items = rows
            .iter()
            .map(|r| Value::Array(r.iter().map(|v| Value::String(v.to_string())).collect()))
            .collect();
        self.entries.push((key.to_string(), Value::Array(items)));
        self
    }

    /// One `key=value` line per scalar; arrays expand to `key[i]=value`.
    pub fn to_lines(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.entries {
            flatten(k, v, &mut out);
        }
        out
    }

    pub fn to_json(&self) -> String {
        let map: Map<String, Value> = self.entries.iter().cloned().collect();
        let mut s =
            serde_json::to_string_pretty(&Value::Object(map)).expect("report values serialize");
        s.push('\n');
        s
    }
}

/// Writes the line form of one JSON value under `key`.
pub fn flatten(key: &str, value: &Value, out: &mut String) {
    match value {
        Value::Array(items) => {
            for (i, item) in items.iter().enumerate() {
                flatten(&format!("{key}[{i}]"), item, out);
            }
        }
        Value::String(s) => {
            out.push_str(&format!("{key}={s}\n"));
        }
        other => {
            out.push_str(&format!("{key}={other}\n"));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lines_and_json_agree() {
        let mut r = Report::new();
        r.text("ord", "w*1+2")
            .int("height", 1)
            .list("rank", &[2, 1]);
        r.matrix("jacobian", &[vec!["2*x", "0"], vec!["1", "E(y)"]]);
        r.verdict("verdict", false);
        assert!(r.failed);
        let json: Value = serde_json::from_str(&r.to_json()).unwrap();
        let mut lines = String::new();
        for (k, v) in json.as_object().unwrap() {
            flatten(k, v, &mut lines);
        }
        assert_eq!(lines, r.to_lines());
        assert!(
            lines.starts_with("ord=w*1+2\nheight=1\nrank[0]=2\nrank[1]=1\njacobian[0][0]=2*x\n")
        );
    }
}
