use serde::Serialize;
use serde_json::Value;

pub const SCHEMA: &str = "staircase.report/1";

/// Envelope written by every command. `wall_time_s` is serialized last so the
/// rest of the payload can be compared byte for byte across runs.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub command: Vec<String>,
    pub results: Value,
    pub warnings: Vec<String>,
    pub wall_time_s: f64,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report values are plain JSON");
        s.push('\n');
        s
    }
}
