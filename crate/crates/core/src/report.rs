//! Structured pass/fail reports.

use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Unknown,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Unknown => "unknown",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub id: String,
    pub status: Status,
    pub detail: String,
    /// Counterexample tuple, present on failure.
    pub witness: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub subject: String,
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn new(subject: impl Into<String>) -> Self {
        VerificationReport { subject: subject.into(), checks: Vec::new() }
    }

    /// Records a check that passed when `witness` is `None`.
    pub fn record(&mut self, id: &str, detail: &str, witness: Option<Vec<usize>>) {
        let status = if witness.is_some() { Status::Fail } else { Status::Pass };
        self.checks.push(Check { id: id.to_string(), status, detail: detail.to_string(), witness });
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.status == Status::Pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    pub fn get(&self, id: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn extend(&mut self, other: VerificationReport) {
        self.checks.extend(other.checks);
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.subject)?;
        for c in &self.checks {
            write!(f, "  [{}] {}: {}", c.status, c.id, c.detail)?;
            if let Some(w) = &c.witness {
                write!(f, " (witness {w:?})")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Lexicographically first tuple below `bounds` for which `holds` is false.
pub(crate) fn find_counterexample<const K: usize>(
    bounds: [usize; K],
    mut holds: impl FnMut([usize; K]) -> bool,
) -> Option<Vec<usize>> {
    let mut cur = [0usize; K];
    if bounds.contains(&0) {
        return None;
    }
    loop {
        if !holds(cur) {
            return Some(cur.to_vec());
        }
        let mut i = K;
        loop {
            if i == 0 {
                return None;
            }
            i -= 1;
            cur[i] += 1;
            if cur[i] < bounds[i] {
                break;
            }
            cur[i] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counterexample_search_is_lexicographic() {
        assert_eq!(find_counterexample([3, 3], |[a, b]| a + b < 3), Some(vec![1, 2]));
        assert_eq!(find_counterexample([2, 2], |_| true), None);
        assert_eq!(find_counterexample([0, 2], |_| false), None);
    }

    #[test]
    fn report_round_trips_through_json() {
        let mut r = VerificationReport::new("demo");
        r.record("a", "holds", None);
        r.record("b", "breaks", Some(vec![1, 2]));
        assert!(!r.all_pass());
        assert_eq!(r.failures().count(), 1);
        let back: VerificationReport = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
        assert_eq!(back, r);
    }
}
