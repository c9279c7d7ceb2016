//! One line per acceptance criterion; exits non-zero unless every row passes.

use std::process::ExitCode;

use dtfreeze::suite::{run_row, RowStatus, SuiteConfig, ROWS};

fn main() -> ExitCode {
    let cfg = SuiteConfig::default();
    let mut bad = Vec::new();
    for &(id, _) in ROWS.iter() {
        let out = run_row(id, &cfg);
        let tag = match out.status {
            RowStatus::Pass => "PASS",
            RowStatus::Fail => "FAIL",
            RowStatus::Unknown => "UNKNOWN",
        };
        let detail = if out.detail.is_empty() { String::new() } else { format!(" -- {}", out.detail) };
        println!(
            "[{tag}] criterion {:>2}: {} ({} checks, {} ms, limit {} ms){detail}",
            out.id, out.title, out.checks, out.elapsed_ms, out.limit_ms
        );
        if out.status != RowStatus::Pass {
            bad.push(out.id);
        }
    }
    if bad.is_empty() {
        println!("acceptance: all {} criteria pass", ROWS.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: criteria not passing: {bad:?}");
        ExitCode::FAILURE
    }
}
