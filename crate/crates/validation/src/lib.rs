//! Runner for the acceptance criteria: each check reports a verdict and a
//! one-line detail, and is timed against its budget.

use std::time::{Duration, Instant};

pub struct Outcome {
    pub passed: bool,
    pub detail: String,
}

pub struct Criterion {
    pub name: &'static str,
    pub budget: Duration,
    pub check: fn() -> Outcome,
}

pub struct Verdict {
    pub name: &'static str,
    pub passed: bool,
    pub line: String,
}

impl Criterion {
    pub fn run(&self) -> Verdict {
        let start = Instant::now();
        let outcome = (self.check)();
        let elapsed = start.elapsed();
        let passed = outcome.passed && elapsed <= self.budget;
        let line = format!(
            "{} {}: {}; {:.2} s (limit {} s)",
            if passed { "PASS" } else { "FAIL" },
            self.name,
            outcome.detail,
            elapsed.as_secs_f64(),
            self.budget.as_secs()
        );
        Verdict {
            name: self.name,
            passed,
            line,
        }
    }
}

/// Runs every criterion, printing one line each, and returns the failures.
pub fn run_all(criteria: &[Criterion]) -> Vec<&'static str> {
    let mut failed = Vec::new();
    for c in criteria {
        let v = c.run();
        println!("{}", v.line);
        if !v.passed {
            failed.push(v.name);
        }
    }
    println!(
        "acceptance: {} passed, {} failed",
        criteria.len() - failed.len(),
        failed.len()
    );
    failed
}
