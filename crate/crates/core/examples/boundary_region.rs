//! The lower boundary Φ, its sharp points, and membership tests.

use taurho::region::{boundary_csv, boundary_samples, classical_contains, contains, durbin_stuart_lower, phi_boundary, theta};
use taurho::RegionPoint;

fn main() {
    println!("sharp points p_n = (-1 + 2/n, -1 + 2/n²):");
    for n in 2..=8usize {
        let x = -1.0 + 2.0 / n as f64;
        println!("  n = {n}  Φ({x:+.4}) = {:+.6}  Durbin-Stuart {:+.6}", phi_boundary(x).unwrap(), durbin_stuart_lower(x));
    }

    println!("ϑ on [0, 1/2]:");
    for x in [0.0, 0.1, 0.25, 0.3, 1.0 / 3.0, 0.45, 0.5] {
        println!("  ϑ({x:.4}) = {:.6}", theta(x).unwrap());
    }

    // a point allowed by the classical inequalities but not attainable
    let tau = -0.2;
    let p = RegionPoint::new(tau, 0.5 * (durbin_stuart_lower(tau) + phi_boundary(tau).unwrap())).unwrap();
    println!("({}, {:.6}) classical: {}, attainable: {}", p.tau, p.rho, classical_contains(&p), contains(&p));

    let rows = boundary_samples(9).unwrap();
    print!("{}", boundary_csv(&rows));
}
