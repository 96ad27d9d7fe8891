//! Machine-readable run reports.

use serde::Serialize;
use serde_json::Value;

pub const SCHEMA: u32 = 1;

/// One checked case.
#[derive(Clone, Debug, Serialize)]
pub struct Record {
    pub inputs: Value,
    pub expected: Value,
    pub actual: Value,
    pub agree: bool,
}

#[derive(Clone, Debug, Default, Serialize, PartialEq, Eq)]
pub struct Summary {
    pub records: usize,
    pub agree: usize,
    pub disagree: usize,
}

/// Report written by `--json`. It holds no timing, so equal inputs give
/// equal bytes.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: u32,
    pub command: Vec<String>,
    pub result: Value,
    pub records: Vec<Record>,
    pub summary: Summary,
    pub caveats: Vec<String>,
}

impl Report {
    pub fn new(command: Vec<String>) -> Self {
        Report {
            schema: SCHEMA,
            command,
            result: Value::Null,
            records: Vec::new(),
            summary: Summary::default(),
            caveats: Vec::new(),
        }
    }

    pub fn record(&mut self, inputs: Value, expected: Value, actual: Value) {
        let agree = expected == actual;
        self.records.push(Record { inputs, expected, actual, agree });
    }

    pub fn caveat(&mut self, text: impl Into<String>) {
        self.caveats.push(text.into());
    }

    /// Recomputes the summary from the records.
    pub fn finish(&mut self) {
        let agree = self.records.iter().filter(|r| r.agree).count();
        self.summary = Summary { records: self.records.len(), agree, disagree: self.records.len() - agree };
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}
