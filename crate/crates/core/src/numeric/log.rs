use serde::{Deserialize, Serialize};

/// One univariate solve: where it happened and its degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveEntry {
    pub context: String,
    pub degree: usize,
}

/// Append-only record of every univariate equation solved.
///
/// Entries are labelled `stage/label`; the stage is whatever was last set
/// with [`SolveLog::set_stage`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveLog {
    entries: Vec<SolveEntry>,
    max_degree: usize,
    #[serde(skip)]
    stage: String,
}

impl SolveLog {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set_stage(&mut self, stage: &str) {
        self.stage = stage.to_string();
    }

    pub fn stage(&self) -> &str {
        &self.stage
    }

    pub fn record(&mut self, label: &str, degree: usize) {
        let context = if self.stage.is_empty() {
            label.to_string()
        } else {
            format!("{}/{}", self.stage, label)
        };
        self.entries.push(SolveEntry { context, degree });
        self.max_degree = self.max_degree.max(degree);
    }

    pub fn entries(&self) -> &[SolveEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Running maximum as stored (may be forged in a deserialized log).
    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    /// Maximum recomputed from the entries.
    pub fn recomputed_max(&self) -> usize {
        self.entries.iter().map(|e| e.degree).max().unwrap_or(0)
    }

    /// Maximum over entries whose context starts with `prefix`.
    pub fn max_degree_in(&self, prefix: &str) -> usize {
        self.entries
            .iter()
            .filter(|e| e.context.starts_with(prefix))
            .map(|e| e.degree)
            .max()
            .unwrap_or(0)
    }

    /// Appends another log's entries, keeping their labels.
    pub fn absorb(&mut self, other: &SolveLog) {
        for e in &other.entries {
            self.entries.push(e.clone());
            self.max_degree = self.max_degree.max(e.degree);
        }
    }
}
