use taurho::concordance::{ab_values, inv_invs, tau_rho};
use taurho::verify::{instance_rng, random_shuffle};
use taurho::{Shuffle, Sign};

fn sample(seed: u64) -> Vec<Shuffle> {
    (0..500).map(|i| random_shuffle(&mut instance_rng(seed, i), 10)).collect()
}

#[test]
fn flip_negates_exactly() {
    for h in sample(10) {
        let p = tau_rho(&h);
        let f = tau_rho(&h.flip());
        assert!((f.tau + p.tau).abs() <= 1e-14 && (f.rho + p.rho).abs() <= 1e-14);
    }
}

#[test]
fn inverse_preserves() {
    for h in sample(11) {
        let p = tau_rho(&h);
        let v = tau_rho(&h.inverse());
        assert!((v.tau - p.tau).abs() <= 1e-12 && (v.rho - p.rho).abs() <= 1e-12);
    }
}

#[test]
fn ranges_and_daniels() {
    for h in sample(12) {
        let (inv, invs) = inv_invs(&h);
        assert!((0.0..=0.5).contains(&inv) && (0.0..=1.0 / 6.0).contains(&invs));
        let p = tau_rho(&h);
        assert!((3.0 * p.tau - 2.0 * p.rho).abs() <= 1.0 + 1e-12);
    }
}

#[test]
fn b_is_a_minus_twice_invs_on_straight_shuffles() {
    for h in sample(13) {
        if h.signs().iter().any(|&s| s == Sign::Minus) {
            continue;
        }
        let (a, b) = ab_values(h.perm(), h.weights()).unwrap();
        let (inv, invs) = inv_invs(&h);
        assert!((a - inv).abs() <= 1e-14);
        assert!((b - (a - 2.0 * invs)).abs() <= 1e-14);
    }
}
