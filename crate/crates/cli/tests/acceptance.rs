//! Runs every acceptance criterion at desk size and prints one line each.
//! A criterion fails when its checks fail or when it overruns its time limit.

use std::process::ExitCode;

use staircase_cli::suite::{run_all, run_criterion, Level, SuiteOptions};

fn main() -> ExitCode {
    if std::env::args().any(|a| a == "--list") {
        println!("acceptance: test");
        return ExitCode::SUCCESS;
    }
    let opts = SuiteOptions::new(Level::Desk);
    let mut ok = true;
    let mut total = 0.0;
    for r in run_all(&opts) {
        let secs = r.elapsed.as_secs_f64();
        total += secs;
        let pass = r.pass && r.within_budget();
        ok &= pass;
        let budget = r.budget.map(|b| format!(" / limit {} s", b.as_secs())).unwrap_or_default();
        println!(
            "{} criterion {:>2}: {} ({secs:.2} s{budget})",
            if pass { "PASS" } else { "FAIL" },
            r.id,
            r.name
        );
        if !pass {
            println!("    {}", serde_json::to_string(&r.details).unwrap());
        }
    }
    println!("desk suite total {total:.2} s (limit 180 s)");
    ok &= total <= 180.0;

    // a rank tolerance of 1 collapses every numeric range, so both
    // compatibility criteria must notice
    let broken = SuiteOptions {
        rank_tol: 1.0,
        ..opts
    };
    for id in [2, 4] {
        let r = run_criterion(id, &broken);
        let caught = !r.pass;
        ok &= caught;
        println!(
            "{} negative control (rank_tol = 1) rejected by criterion {id}",
            if caught { "PASS" } else { "FAIL" }
        );
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
