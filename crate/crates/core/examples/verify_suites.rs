//! Runs every verification suite and summarises the outcome.

use transverify::suites::{run_suite, SuiteId, SuiteOptions};

fn main() {
    let opts = SuiteOptions::default();
    for id in SuiteId::MEMBERS {
        let r = run_suite(id, &opts).unwrap();
        let failed = r.checks.iter().filter(|c| !c.passed()).count();
        println!("{:<16} {:>3} checks, {failed} failed", id.tag(), r.checks.len());
    }
}
