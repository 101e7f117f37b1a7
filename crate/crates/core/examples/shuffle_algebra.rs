//! Inverse, flip and ordinal sums, and what they do to (tau, rho).

use taurho::concordance::tau_rho;
use taurho::Shuffle;

fn show(label: &str, h: &Shuffle) {
    let p = tau_rho(h);
    println!("{label:<24} perm {:<14} tau {:+.6}  rho {:+.6}", h.perm().to_string(), p.tau, p.rho);
}

fn main() {
    let h = Shuffle::from_parts(&[4, 2, 1, 3], vec![0.125, 0.375, 0.25, 0.25], &[1, -1, 1, 1]).unwrap();
    show("h", &h);
    show("inverse", &h.inverse());
    show("flip", &h.flip());
    for s in [0.25, 0.5, 0.75] {
        show(&format!("ordinal sum, s = {s}"), &h.ordinal_sum_with_identity(s).unwrap());
    }

    // a redundant description collapses to the same copula
    let long = Shuffle::from_parts(&[4, 5, 2, 1, 3], vec![0.0625, 0.0625, 0.375, 0.25, 0.25], &[1, 1, -1, 1, 1]).unwrap();
    let canon = long.canonicalize();
    println!("canonical form of the 5-segment description: {:?}", canon.to_json());
    println!("same copula as h: {}", canon.approx_eq(&h, 1e-12));
}
