//! Per-stage run logs.

use std::collections::BTreeMap;

use serde::Serialize;

/// One pipeline stage: what it ran with, what it produced, and which construction it stands for.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct StageRecord {
    pub stage: String,
    /// The construction this stage instantiates.
    pub lemma: String,
    pub params: BTreeMap<String, f64>,
    pub sizes: BTreeMap<String, usize>,
    pub discards: usize,
    pub outcome: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl StageRecord {
    pub fn new(stage: &str, lemma: &str) -> Self {
        StageRecord {
            stage: stage.to_string(),
            lemma: lemma.to_string(),
            outcome: "ok".to_string(),
            ..Default::default()
        }
    }

    pub fn param(mut self, key: &str, value: f64) -> Self {
        self.params.insert(key.to_string(), value);
        self
    }

    pub fn size(mut self, key: &str, value: usize) -> Self {
        self.sizes.insert(key.to_string(), value);
        self
    }

    pub fn discards(mut self, n: usize) -> Self {
        self.discards = n;
        self
    }

    pub fn outcome(mut self, outcome: impl Into<String>) -> Self {
        self.outcome = outcome.into();
        self
    }

    pub fn warn(&mut self, msg: impl Into<String>) {
        self.warnings.push(msg.into());
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct RunReport {
    pub mode: String,
    pub profile: String,
    pub seed: u64,
    /// Parameter overrides exactly as supplied.
    pub overrides: serde_json::Value,
    pub stages: Vec<StageRecord>,
    pub ell: usize,
    pub valid: bool,
    pub outcome: String,
}

impl RunReport {
    pub fn push(&mut self, record: StageRecord) {
        self.stages.push(record);
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }
}
