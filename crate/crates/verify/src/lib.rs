//! Bookkeeping for the acceptance run: each criterion collects named
//! sub-checks and renders as a single pass/fail line.

use std::fmt;
use std::time::{Duration, Instant};

/// Named sub-checks of one criterion.
#[derive(Debug, Default)]
pub struct Checks {
    total: usize,
    failures: Vec<String>,
}

impl Checks {
    pub fn check(&mut self, name: impl fmt::Display, ok: bool) {
        self.total += 1;
        if !ok {
            self.failures.push(name.to_string());
        }
    }

    pub fn eq<T: PartialEq + fmt::Debug>(&mut self, name: impl fmt::Display, got: T, want: T) {
        self.total += 1;
        if got != want {
            self.failures.push(format!("{name}: got {got:?}, want {want:?}"));
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn total(&self) -> usize {
        self.total
    }

    pub fn failures(&self) -> &[String] {
        &self.failures
    }
}

#[derive(Debug)]
pub struct Outcome {
    pub id: u32,
    pub title: &'static str,
    pub checks: Checks,
    pub elapsed: Duration,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.checks.passed()
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let secs = self.elapsed.as_secs_f64();
        if self.passed() {
            write!(f, "criterion {} PASS: {} ({} checks, {secs:.1} s)", self.id, self.title, self.checks.total())
        } else {
            write!(
                f,
                "criterion {} FAIL: {} ({} of {} checks failed, {secs:.1} s): {}",
                self.id,
                self.title,
                self.checks.failures().len(),
                self.checks.total(),
                self.checks.failures().join("; ")
            )
        }
    }
}

/// Runs one criterion and times it.
pub fn run(id: u32, title: &'static str, body: impl FnOnce(&mut Checks)) -> Outcome {
    let start = Instant::now();
    let mut checks = Checks::default();
    body(&mut checks);
    Outcome { id, title, checks, elapsed: start.elapsed() }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn failures_are_listed() {
        let o = run(1, "demo", |c| {
            c.eq("two", 1 + 1, 2);
            c.check("false", false);
        });
        assert!(!o.passed());
        assert_eq!(o.checks.total(), 2);
        assert!(o.to_string().starts_with("criterion 1 FAIL: demo (1 of 2 checks failed"));
    }
}
