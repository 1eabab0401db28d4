//! JSON output, and CSV as a flat `key,value` projection of the same JSON.

use serde_json::Value;

use crate::config::Format;
use crate::envelope::ResultEnvelope;
use crate::CliError;

pub fn render(envelope: &ResultEnvelope, format: Format) -> Result<String, CliError> {
    let value = serde_json::to_value(envelope).map_err(|e| CliError::Usage(e.to_string()))?;
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&value).map_err(|e| CliError::Usage(e.to_string()))?;
            s.push('\n');
            Ok(s)
        }
        Format::Csv => to_csv(&value),
    }
}

/// Leaves of `value` as `(dotted.path, scalar)`; array elements are keyed by index.
pub fn flatten(value: &Value) -> Vec<(String, String)> {
    fn walk(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
        let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
        match v {
            Value::Object(map) => map.iter().for_each(|(k, v)| walk(&key(k), v, out)),
            Value::Array(items) => items.iter().enumerate().for_each(|(i, v)| walk(&key(&i.to_string()), v, out)),
            Value::String(s) => out.push((prefix.to_string(), s.clone())),
            Value::Null => out.push((prefix.to_string(), String::new())),
            other => out.push((prefix.to_string(), other.to_string())),
        }
    }
    let mut out = Vec::new();
    walk("", value, &mut out);
    out
}

fn to_csv(value: &Value) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Io(std::io::Error::other(e));
    w.write_record(["key", "value"]).map_err(io)?;
    for (k, v) in flatten(value) {
        w.write_record([k, v]).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(std::io::Error::other(e.to_string())))?;
    String::from_utf8(bytes).map_err(|e| CliError::Usage(e.to_string()))
}
