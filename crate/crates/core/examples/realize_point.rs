//! Build a shuffle with prescribed (tau, rho).
//!
//! ```sh
//! cargo run --example realize_point -- 0.2 -0.1
//! ```

use taurho::concordance::tau_rho;
use taurho::realize::realize;
use taurho::RegionPoint;

fn main() {
    let args: Vec<f64> = std::env::args().skip(1).map(|a| a.parse().expect("a number")).collect();
    let targets = match args.as_slice() {
        [tau, rho] => vec![(*tau, *rho)],
        _ => vec![(0.0, 0.0), (-1.0 / 3.0, -7.0 / 9.0), (0.5, 0.4), (-0.8, -0.9)],
    };
    for (tau, rho) in targets {
        let target = RegionPoint::new(tau, rho).expect("a point of the square");
        match realize(&target) {
            Ok((h, point)) => {
                let got = tau_rho(&h);
                println!(
                    "({tau:+.4}, {rho:+.4}) -> {} segments, s = {:.6}, t = {:.6}, achieved ({:+.10}, {:+.10})",
                    h.len(),
                    point.s,
                    point.t,
                    got.tau,
                    got.rho
                );
            }
            Err(e) => println!("({tau:+.4}, {rho:+.4}) -> {e}"),
        }
    }
}
