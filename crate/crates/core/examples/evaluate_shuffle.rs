//! Kendall's tau and Spearman's rho of a shuffle, from its JSON description.
//!
//! ```sh
//! cargo run --example evaluate_shuffle -- examples/data/figure2.json
//! ```

use taurho::concordance::{inv_invs, tau_rho};
use taurho::Shuffle;

fn main() {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data/figure2.json").to_string());
    let text = std::fs::read_to_string(&path).expect("readable shuffle file");
    let h = Shuffle::from_json_str(&text).expect("valid shuffle JSON");

    let (inv, invs) = inv_invs(&h);
    let p = tau_rho(&h);
    println!("shuffle   perm {} with {} segments", h.perm(), h.len());
    println!("inv       {inv:.12}");
    println!("invs      {invs:.12}");
    println!("tau       {:.12}", p.tau);
    println!("rho       {:.12}", p.rho);

    for x in [0.0625, 0.25, 0.5, 0.9] {
        println!("h({x}) = {}", h.evaluate(x).unwrap());
    }
}
