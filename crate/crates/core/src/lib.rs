//! Exact Kendall's τ and Spearman's ρ for shuffles of the minimum copula,
//! and the exact region of attainable `(τ, ρ)` pairs over all bivariate copulas.
//!
//! ```
//! use taurho::{tau_rho, Shuffle};
//!
//! let h = Shuffle::from_parts(&[2, 1], vec![0.5, 0.5], &[1, 1]).unwrap();
//! let p = tau_rho(&h);
//! assert!((p.tau - 0.0).abs() < 1e-15);
//! assert!((p.rho + 0.5).abs() < 1e-15);
//! ```

mod fenwick;

pub mod cli;
pub mod concordance;
pub mod format;
pub mod quadrature;
pub mod realize;
pub mod region;
pub mod shuffle;
pub mod verify;

pub use concordance::{
    ab_values, inv_invs, inversion_data, oracle_tau_rho, perturbation_coeffs, tau_rho,
    InversionData, PerturbationCoeffs,
};
pub use realize::{boundary_curve, prototype_for_tau, prototype_shuffle, realize, HomotopyPoint, Prototype};
pub use region::{area_closed_form, area_quadrature, contains, phi_boundary, theta, varphi};
pub use shuffle::{Permutation, RegionPoint, Shuffle, ShuffleError, Sign, SimplexWeights};
pub use verify::VerificationReport;
