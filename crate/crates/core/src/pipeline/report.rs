use serde::Serialize;
use serde_json::Value;
use std::collections::BTreeMap;
use std::fmt::Write;

pub const SCHEMA: &str = "floer-lab/1";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        Check { name: name.to_string(), passed, detail: detail.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub schema: &'static str,
    pub theorem: String,
    /// Full input configuration, seeds and tolerances included.
    pub inputs: Value,
    pub verdicts: BTreeMap<String, bool>,
    pub expected: BTreeMap<String, bool>,
    pub witnesses: BTreeMap<String, String>,
    pub counts: Value,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
    pub timing_ms: u128,
}

impl VerificationReport {
    pub fn new(theorem: &str, inputs: Value) -> Self {
        VerificationReport {
            schema: SCHEMA,
            theorem: theorem.to_string(),
            inputs,
            verdicts: BTreeMap::new(),
            expected: BTreeMap::new(),
            witnesses: BTreeMap::new(),
            counts: Value::Null,
            checks: Vec::new(),
            notes: Vec::new(),
            timing_ms: 0,
        }
    }

    pub fn verdict(&mut self, key: &str, found: bool, expected: bool) {
        self.verdicts.insert(key.to_string(), found);
        self.expected.insert(key.to_string(), expected);
    }

    pub fn check(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check::new(name, passed, detail));
    }

    pub fn verdicts_as_expected(&self) -> bool {
        self.verdicts == self.expected
    }

    pub fn all_passed(&self) -> bool {
        self.verdicts_as_expected() && self.checks.iter().all(|c| c.passed)
    }

    pub fn failed_checks(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{} [{}]", self.theorem, self.schema);
        for (k, v) in &self.verdicts {
            let exp = self.expected.get(k).copied();
            let mark = if exp == Some(*v) { "ok" } else { "UNEXPECTED" };
            let _ = writeln!(s, "  {k}: {} ({mark})", if *v { "quasi-isomorphic" } else { "not quasi-isomorphic" });
        }
        for (k, w) in &self.witnesses {
            let _ = writeln!(s, "  witness {k}: {w}");
        }
        for c in &self.checks {
            let _ = writeln!(s, "  [{}] {}: {}", if c.passed { "pass" } else { "FAIL" }, c.name, c.detail);
        }
        for n in &self.notes {
            let _ = writeln!(s, "  note: {n}");
        }
        let _ = writeln!(s, "  time: {} ms", self.timing_ms);
        s
    }
}
