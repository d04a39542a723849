//! Acceptance suite: one PASS/FAIL line per criterion. Criteria 1 to 11 run
//! in full mode; criterion 12 times both the quick and the full run.

use std::process::ExitCode;
use std::time::Instant;

use btorders_core::selftest::{run_criterion, timing_result, Config, CriterionResult};

fn main() -> ExitCode {
    let quick = Config::quick();
    let started = Instant::now();
    let quick_failures: Vec<CriterionResult> = (1..=11)
        .map(|id| run_criterion(id, &quick))
        .filter(|r| !r.passed)
        .collect();
    let quick_timing = timing_result(started.elapsed(), &quick);

    let full = Config::full();
    let started = Instant::now();
    let mut results: Vec<CriterionResult> = (1..=11).map(|id| run_criterion(id, &full)).collect();
    let full_timing = timing_result(started.elapsed(), &full);

    for q in &quick_failures {
        let r = &mut results[q.id as usize - 1];
        r.passed = false;
        r.detail = format!("quick mode: {}", q.detail);
    }
    results.push(CriterionResult {
        passed: quick_timing.passed && full_timing.passed,
        detail: format!("{}; {}", quick_timing.detail, full_timing.detail),
        ..full_timing
    });

    println!();
    for r in &results {
        println!("{}", r.line());
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    println!(
        "acceptance: {} passed, {failed} failed\n",
        results.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
