//! Deterministic run reports: per-task status with witnesses, serializable
//! as a stable key-value tree for machine diffing.

use crate::laws::LawReport;
use serde::Serialize;
use std::fmt::Write as _;
use std::time::Duration;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TaskStatus {
    Pass,
    Fail,
    Error,
}

#[derive(Clone, Debug, Serialize)]
pub struct TaskReport {
    pub name: String,
    pub status: TaskStatus,
    /// One line per failed law, with its witness.
    pub witnesses: Vec<String>,
    /// Law counts as `(passed, total)`.
    pub passed: usize,
    pub total: usize,
    /// Wall time; excluded from the structured body so identical runs hash
    /// identically.
    #[serde(skip)]
    pub elapsed: Duration,
}

impl TaskReport {
    pub fn from_laws(name: impl Into<String>, laws: &LawReport, elapsed: Duration) -> TaskReport {
        let total = laws.checks.len();
        let passed = laws.checks.iter().filter(|c| c.pass).count();
        let witnesses = laws
            .failures()
            .into_iter()
            .map(|c| format!("{}: {}", c.law, c.witness.clone().unwrap_or_default()))
            .collect();
        TaskReport {
            name: name.into(),
            status: if passed == total { TaskStatus::Pass } else { TaskStatus::Fail },
            witnesses,
            passed,
            total,
            elapsed,
        }
    }

    pub fn error(name: impl Into<String>, message: String, elapsed: Duration) -> TaskReport {
        TaskReport {
            name: name.into(),
            status: TaskStatus::Error,
            witnesses: vec![message],
            passed: 0,
            total: 0,
            elapsed,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub scenario: String,
    pub tasks: Vec<TaskReport>,
    pub passed: usize,
    pub failed: usize,
    pub errored: usize,
}

impl RunReport {
    pub fn new(scenario: impl Into<String>, tasks: Vec<TaskReport>) -> RunReport {
        let passed = tasks.iter().filter(|t| t.status == TaskStatus::Pass).count();
        let failed = tasks.iter().filter(|t| t.status == TaskStatus::Fail).count();
        let errored = tasks.iter().filter(|t| t.status == TaskStatus::Error).count();
        RunReport { scenario: scenario.into(), tasks, passed, failed, errored }
    }

    pub fn all_passed(&self) -> bool {
        self.failed == 0 && self.errored == 0
    }

    /// Process exit code: 0 all-pass, 1 any check failed or errored.
    pub fn exit_code(&self) -> i32 {
        if self.all_passed() {
            0
        } else {
            1
        }
    }

    /// Human-readable text, including timings.
    pub fn text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "scenario: {}", self.scenario);
        for t in &self.tasks {
            let status = match t.status {
                TaskStatus::Pass => "pass",
                TaskStatus::Fail => "FAIL",
                TaskStatus::Error => "ERROR",
            };
            let _ = writeln!(
                out,
                "[{status}] {} ({}/{} laws, {:.1?})",
                t.name, t.passed, t.total, t.elapsed
            );
            for w in &t.witnesses {
                let _ = writeln!(out, "        {w}");
            }
        }
        let _ = writeln!(
            out,
            "{} tasks: {} passed, {} failed, {} errored",
            self.tasks.len(),
            self.passed,
            self.failed,
            self.errored
        );
        out
    }

    /// Byte-stable structured body: pretty JSON over ordered fields with no
    /// timestamps or timings.
    pub fn structured(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}
