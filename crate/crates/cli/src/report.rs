use serde::{Deserialize, Serialize};
use serde_json::Value;

/// One JSON document per invocation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub order: usize,
    pub inputs: Value,
    pub result: Value,
    pub exact: bool,
}

impl Report {
    pub fn new(command: &str, order: usize, inputs: Value, result: Value) -> Self {
        Report {
            command: command.to_string(),
            order,
            inputs,
            result,
            exact: true,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// `key: value` lines, one per result field.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} (order {})\n", self.command, self.order);
        match &self.result {
            Value::Object(map) => {
                for (k, v) in map {
                    out.push_str(&format!("{k}: {}\n", render(v)));
                }
            }
            other => out.push_str(&format!("{}\n", render(other))),
        }
        out
    }
}

fn render(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(items) if items.iter().all(|x| !x.is_object()) => {
            let parts: Vec<String> = items.iter().map(render).collect();
            format!("[{}]", parts.join(", "))
        }
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn json_round_trip() {
        let r = Report::new(
            "center",
            8,
            json!({"file": "C1.json"}),
            json!({"center_to_order": 8, "verdict": true, "first_failing_degree": null}),
        );
        let back: Report = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
        assert!(back.exact);
    }
}
