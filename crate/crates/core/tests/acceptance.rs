//! Runs every acceptance criterion at its stated tolerance and prints one
//! PASS/FAIL line per criterion. Exits nonzero if any criterion fails.
//!
//! `NSBOUNDS_QUICK=1` shrinks sample counts for a fast smoke run.

use nsbounds::oracle::{run_suite, SuiteOptions};

fn main() {
    let quick = std::env::var("NSBOUNDS_QUICK").is_ok_and(|v| v == "1");
    let opts = SuiteOptions { quick, ..SuiteOptions::default() };
    println!("acceptance criteria (seed {}{})", opts.seed, if quick { ", quick" } else { "" });
    let report = run_suite(&opts, |r| println!("{r}"));
    let failed: Vec<_> = report.rows.iter().filter(|r| !r.passed).map(|r| r.id).collect();
    println!(
        "{} of {} criteria passed{}",
        report.rows.len() - failed.len(),
        report.rows.len(),
        if failed.is_empty() { String::new() } else { format!("; failing: {}", failed.join(", ")) }
    );
    if !failed.is_empty() {
        std::process::exit(1);
    }
}
