//! Pass/fail records produced by the checkers.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::collections::BTreeMap;

/// Witness lists are truncated to this many entries.
pub const MAX_WITNESSES: usize = 10;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Witness {
    pub note: String,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub points: Vec<usize>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub lines: Vec<usize>,
}

impl Witness {
    pub fn new(note: impl Into<String>) -> Self {
        Witness { note: note.into(), points: Vec::new(), lines: Vec::new() }
    }

    pub fn points(mut self, pts: impl IntoIterator<Item = usize>) -> Self {
        self.points.extend(pts);
        self
    }

    pub fn lines(mut self, lines: impl IntoIterator<Item = usize>) -> Self {
        self.lines.extend(lines);
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub id: String,
    pub paper_anchor: String,
    pub holds: bool,
    pub violations: usize,
    pub witnesses: Vec<Witness>,
    pub statistics: BTreeMap<String, Value>,
}

impl AxiomReport {
    pub fn new(id: impl Into<String>, anchor: impl Into<String>) -> Self {
        AxiomReport {
            id: id.into(),
            paper_anchor: anchor.into(),
            holds: true,
            violations: 0,
            witnesses: Vec::new(),
            statistics: BTreeMap::new(),
        }
    }

    pub fn fail(&mut self, w: Witness) {
        self.holds = false;
        self.violations += 1;
        if self.witnesses.len() < MAX_WITNESSES {
            self.witnesses.push(w);
        }
    }

    /// Records a violation when `ok` is false; the witness is built lazily.
    pub fn require(&mut self, ok: bool, w: impl FnOnce() -> Witness) {
        if !ok {
            self.fail(w());
        }
    }

    pub fn stat(&mut self, key: &str, value: impl Serialize) {
        self.statistics.insert(key.to_string(), serde_json::to_value(value).expect("serializable statistic"));
    }

    /// Merges failures collected out of order, keeping the smallest
    /// witnesses so results do not depend on scheduling.
    pub fn absorb(&mut self, mut failures: Vec<Witness>) {
        failures.sort();
        let n = failures.len();
        for w in failures {
            self.fail(w);
        }
        debug_assert!(self.violations >= n);
    }

    pub fn summary(&self) -> String {
        let verdict = if self.holds { "holds" } else { "FAILS" };
        format!("{} {} ({} violations)", self.id, verdict, self.violations)
    }
}

/// A histogram with sorted keys, for statistics blocks.
pub fn histogram<K: Ord + ToString>(values: impl IntoIterator<Item = K>) -> BTreeMap<String, usize> {
    let mut counts: BTreeMap<K, usize> = BTreeMap::new();
    for v in values {
        *counts.entry(v).or_default() += 1;
    }
    counts.into_iter().map(|(k, c)| (k.to_string(), c)).collect()
}
