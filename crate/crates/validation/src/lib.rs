//! Reporting helpers for the acceptance target.

use std::time::{Duration, Instant};

pub struct Verdict {
    pub ok: bool,
    pub detail: String,
}

/// Runs one check, prints a single PASS/FAIL line and returns whether it
/// passed within its time budget.
pub fn criterion(id: usize, name: &str, budget: Duration, check: impl FnOnce() -> Verdict) -> bool {
    let start = Instant::now();
    let v = check();
    let elapsed = start.elapsed();
    let in_time = elapsed <= budget;
    let ok = v.ok && in_time;
    println!(
        "{} criterion {id:>2} {name}: {} [{:.2}s of {}s{}]",
        if ok { "PASS" } else { "FAIL" },
        v.detail,
        elapsed.as_secs_f64(),
        budget.as_secs(),
        if in_time { "" } else { ", over budget" }
    );
    ok
}
