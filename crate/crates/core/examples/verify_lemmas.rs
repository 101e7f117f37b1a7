//! Run the verification checks on a small configuration and print one
//! JSON report per line.

use taurho::verify::{run_suite, Suite, SuiteConfig};

fn main() {
    let cfg = SuiteConfig {
        n_max: 5,
        grid_steps: 10,
        samples: 300,
        seed: 1,
        ..SuiteConfig::default()
    };
    let reports = run_suite(Suite::All, &cfg).expect("parameters within range");
    for r in &reports {
        println!("{}", r.to_json_line());
    }
    let failed = reports.iter().filter(|r| !r.passed).count();
    println!("{} checks, {failed} failed", reports.len());
}
