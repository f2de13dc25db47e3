//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

use twoscale::acceptance::{run_criterion, CRITERIA};

fn main() {
    let only: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = Vec::new();
    for &(id, _, _) in CRITERIA.iter().filter(|c| only.is_empty() || only.contains(&c.0)) {
        let out = run_criterion(id).expect("criterion exists");
        println!("{}", out.line());
        if !out.passed {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all criteria passed");
    } else {
        println!("acceptance: failed criteria {failed:?}");
        std::process::exit(1);
    }
}
