use serde::Serialize;
use serde_json::Value;

/// Outcome of an exhaustive checker: how many cases ran and the first
/// failing case, if any.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub suite: String,
    pub pass: bool,
    pub checks: usize,
    pub witness: Option<Value>,
}

impl CheckReport {
    pub fn new(suite: impl Into<String>) -> Self {
        CheckReport { suite: suite.into(), pass: true, checks: 0, witness: None }
    }

    /// Counts one case; on the first failure stores `witness()`.
    pub fn record(&mut self, ok: bool, witness: impl FnOnce() -> Value) -> bool {
        self.checks += 1;
        if !ok && self.pass {
            self.pass = false;
            self.witness = Some(witness());
        }
        ok
    }

    pub fn fail(&mut self, witness: Value) {
        self.record(false, || witness);
    }

    /// Folds `other` into `self`, keeping the earliest witness.
    pub fn absorb(&mut self, other: CheckReport) {
        self.checks += other.checks;
        if !other.pass && self.pass {
            self.pass = false;
            self.witness = other.witness;
        }
    }
}
