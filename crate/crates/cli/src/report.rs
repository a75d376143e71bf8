use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckEntry {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

/// Summary of a command run. `exit_status` is 0 iff every check passed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunReport {
    pub command: String,
    pub checks: Vec<CheckEntry>,
    pub counts: BTreeMap<String, usize>,
    pub exit_status: i32,
}

impl RunReport {
    pub fn new(command: impl Into<String>) -> Self {
        RunReport {
            command: command.into(),
            checks: Vec::new(),
            counts: BTreeMap::new(),
            exit_status: 0,
        }
    }

    pub fn check(&mut self, name: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.checks.push(CheckEntry {
            name: name.into(),
            pass,
            detail: detail.into(),
        });
        if !pass {
            self.exit_status = 1;
        }
    }

    pub fn count(&mut self, name: impl Into<String>, n: usize) {
        self.counts.insert(name.into(), n);
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{}", self.command).unwrap();
        let width = self
            .checks
            .iter()
            .map(|c| c.name.chars().count())
            .max()
            .unwrap_or(0);
        for c in &self.checks {
            let mark = if c.pass { "PASS" } else { "FAIL" };
            writeln!(out, "  {mark}  {:width$}  {}", c.name, c.detail).unwrap();
        }
        if !self.counts.is_empty() {
            writeln!(out, "counts").unwrap();
            for (k, v) in &self.counts {
                writeln!(out, "  {k}: {v}").unwrap();
            }
        }
        let verdict = if self.all_pass() {
            "all checks pass"
        } else {
            "some checks FAILED"
        };
        writeln!(out, "{verdict}").unwrap();
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_status_follows_checks() {
        let mut r = RunReport::new("demo");
        r.check("a", true, "");
        assert_eq!(r.exit_status, 0);
        r.check("b", false, "broken");
        assert_eq!(r.exit_status, 1);
        assert!(r.render_text().contains("FAIL  b"));
    }
}
