//! Area of the exact tau-rho region and of the classical one.

use taurho::region::{area_closed_form, area_quadrature_detailed, classical_area_quadrature};

fn main() {
    let closed = area_closed_form();
    println!("closed form        {closed:.15}");
    for tol in [1e-6, 1e-8, 1e-10] {
        let q = area_quadrature_detailed(tol).unwrap();
        println!(
            "quadrature {tol:.0e}   {:.15}  (|diff| {:.1e}, {} evaluations)",
            q.value,
            (q.value - closed).abs(),
            q.evaluations
        );
    }
    let classical = classical_area_quadrature(1e-12).unwrap();
    println!("classical region   {classical:.15}  (7/6 = {:.15})", 7.0 / 6.0);
    println!("share of the classical region: {:.2}%", 100.0 * closed / classical);
}
