//! Closed-form (tau, rho) against a brute-force grid estimate that only
//! evaluates the shuffle map.

use taurho::concordance::{oracle_tau_rho, tau_rho};
use taurho::verify::{instance_rng, random_shuffle};

fn main() {
    let m = 4000;
    let mut worst = 0.0f64;
    for i in 0..20 {
        let h = random_shuffle(&mut instance_rng(42, i), 8);
        let exact = tau_rho(&h);
        let grid = oracle_tau_rho(&h, m).unwrap();
        let dev = (exact.tau - grid.tau).abs().max((exact.rho - grid.rho).abs());
        worst = worst.max(dev);
        println!(
            "{:>2} segments  tau {:+.5} vs {:+.5}   rho {:+.5} vs {:+.5}",
            h.len(),
            exact.tau,
            grid.tau,
            exact.rho,
            grid.rho
        );
    }
    println!("largest deviation at m = {m}: {worst:.2e}");
}
