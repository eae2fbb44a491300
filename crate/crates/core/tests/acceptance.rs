//! Acceptance run: the quick suite twice with a fixed seed, one PASS/FAIL
//! line per criterion, then a byte comparison of the two reports.
//!
//! All criteria are exact (tolerance 0). The process exits nonzero if any
//! record fails other than those in `KNOWN_DEVIATIONS`, which still print
//! as FAIL.

use std::process::ExitCode;
use std::time::Instant;

use thetaobs::report::Verdict;
use thetaobs::suite::{criterion_passed, criterion_prefix, run_suite, Level, SuiteConfig, CRITERIA};

const SEED: u64 = 20240611;

/// Records that fail because the stated expectation does not hold: `U` is
/// elementary abelian in characteristic 2, so `|[U,U]| = 1`, not 2.
const KNOWN_DEVIATIONS: [&str; 1] = ["c06.unipotent_derived_order"];

fn main() -> ExitCode {
    thetaobs::par::init_from_env();
    let cfg = SuiteConfig::new(SEED, Level::Quick);
    let command = vec!["verify-all".to_string(), format!("--seed={SEED}"), "--level=quick".to_string()];
    let start = Instant::now();
    let first = run_suite(&cfg, command.clone());
    let first_secs = start.elapsed().as_secs_f64();
    let second = run_suite(&cfg, command);
    let (a, b) = (first.to_json(), second.to_json());
    let identical = a == b && first.is_valid();

    for (id, title) in CRITERIA {
        let mut ok = criterion_passed(&first, id);
        if id == 12 {
            ok &= identical;
        }
        let prefix = criterion_prefix(id);
        let records: Vec<_> = first.records.iter().filter(|r| r.name.starts_with(&prefix)).collect();
        let failing: Vec<&str> =
            records.iter().filter(|r| r.verdict == Verdict::Fail).map(|r| r.name.as_str()).collect();
        let mut line = format!(
            "{} criterion {id:>2} ({title}): {} checks, tolerance exact",
            if ok { "PASS" } else { "FAIL" },
            records.len()
        );
        if id == 12 {
            line.push_str(&format!(", two runs byte-identical: {identical} ({} bytes)", a.len()));
        }
        if !failing.is_empty() {
            line.push_str(&format!("; failing: {}", failing.join(", ")));
        }
        println!("{line}");
    }
    for r in first.failed() {
        println!("  {}: {}", r.name, r.summary);
    }
    println!("suite wall time {first_secs:.1} s per run");

    let unexpected = first.failed().filter(|r| !KNOWN_DEVIATIONS.contains(&r.name.as_str())).count();
    if unexpected == 0 && identical {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
