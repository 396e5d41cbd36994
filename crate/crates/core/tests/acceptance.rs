//! Acceptance suite: one PASS/FAIL line per claim.

use std::process::ExitCode;
use std::time::Instant;

use qperm_core::claims::{run, ClaimOptions, CLAIM_COUNT};

fn main() -> ExitCode {
    let opts = ClaimOptions::default();
    let mut failed = 0;
    for id in 1..=CLAIM_COUNT as u8 {
        let start = Instant::now();
        let r = run(id, &opts).expect("valid id");
        let status = if r.passed { "PASS" } else { "FAIL" };
        println!(
            "{status} [{:>2}] {}: {} ({:.2}s)",
            r.id,
            r.name,
            r.detail,
            start.elapsed().as_secs_f64()
        );
        failed += usize::from(!r.passed);
    }
    println!("{} passed, {failed} failed", CLAIM_COUNT - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
