//! Runner for named pass/fail criteria.

use std::panic::{self, AssertUnwindSafe};
use std::time::{Duration, Instant};

/// Detail line on success, explanation on failure.
pub type Outcome = Result<String, String>;

pub fn ensure(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

pub fn within_rel(value: f64, target: f64, tol: f64) -> bool {
    (value - target).abs() <= tol * target.abs()
}

/// Fails `detail` when more than `limit` has passed since `start`.
pub fn within_time(start: Instant, limit: Duration, detail: String) -> Outcome {
    let t = start.elapsed();
    ensure(t <= limit, format!("{detail}; {:.2} s of {} s", t.as_secs_f64(), limit.as_secs()))
}

pub struct Criterion {
    pub name: &'static str,
    pub run: fn() -> Outcome,
}

/// Runs every criterion, printing `PASS`/`FAIL` lines and a summary.
/// Returns the number of failures. Panics count as failures.
pub fn run_all(criteria: &[Criterion]) -> usize {
    let mut failed = 0;
    for c in criteria {
        let outcome = panic::catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        match outcome {
            Ok(d) => println!("PASS criterion {}: {d}", c.name),
            Err(d) => {
                failed += 1;
                println!("FAIL criterion {}: {d}", c.name);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    failed
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_failures_and_panics() {
        let cs = [
            Criterion { name: "ok", run: || Ok("fine".into()) },
            Criterion { name: "bad", run: || ensure(false, "no".into()) },
            Criterion { name: "boom", run: || panic!("x") },
        ];
        assert_eq!(run_all(&cs), 2);
    }

    #[test]
    fn relative_window() {
        assert!(within_rel(101.9, 100.0, 0.02));
        assert!(!within_rel(-89.2, -81.0, 0.10));
    }
}
