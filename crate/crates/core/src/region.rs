//! The exact τ-ρ region and its boundary.
//!
//! The lower boundary is the piecewise function `Φ`; on the segment
//! `[-1 + 2/n, -1 + 2/(n-1)]` it equals
//!
//! ```text
//! Φₙ(x) = -1 - 4/n² + 3/n + 3x/n - (n-2) / (√2 n² √(n-1)) · (n - 2 + n x)^{3/2}
//! ```
//!
//! and `Φ(-1) = -1`. The region is `{(x, y) : Φ(x) ≤ y ≤ -Φ(-x)}`. In
//! `(inv, invs)` coordinates the same boundary is `φ`, and the main inequality
//! of the shuffle polynomials reads `b ≥ ϑ(a)` with `ϑ(x) = x - 2φ(x)`.

use thiserror::Error;

use crate::quadrature::{integrate_piecewise, Integral};
use crate::shuffle::RegionPoint;

/// Membership slack for [`contains`] and [`classical_contains`].
pub const MEMBERSHIP_TOL: f64 = 1e-12;

/// Apéry's constant ζ(3) to 20 significant digits.
pub const ZETA3: f64 = 1.202_056_903_159_594_285_4;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RegionError {
    #[error("argument {value} outside {domain}")]
    OutOfDomain { value: f64, domain: &'static str },
    #[error("segment index must be at least 2, got {0}")]
    BadSegment(usize),
    #[error("need at least 2 samples, got {0}")]
    TooFewSamples(usize),
    #[error("tolerance must be positive, got {0}")]
    BadTolerance(f64),
    #[error("malformed boundary CSV at line {line}: {reason}")]
    Csv { line: usize, reason: String },
}

pub type Result<T, E = RegionError> = std::result::Result<T, E>;

/// The n-th piece of the lower boundary together with its τ-interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundarySegment {
    pub n: usize,
    pub tau_lo: f64,
    pub tau_hi: f64,
}

impl BoundarySegment {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(RegionError::BadSegment(n));
        }
        Ok(Self {
            n,
            tau_lo: -1.0 + 2.0 / n as f64,
            tau_hi: -1.0 + 2.0 / (n - 1) as f64,
        })
    }

    /// `Φₙ(x)`; the formula is evaluated for any `x ≥ -1 + 2/n`.
    pub fn phi(&self, x: f64) -> f64 {
        phi_piece(self.n, x)
    }
}

/// `Φₙ(x)`.
pub fn phi_piece(n: usize, x: f64) -> f64 {
    let nf = n as f64;
    let base = (nf - 2.0 + nf * x).max(0.0);
    let coef = (nf - 2.0) / (std::f64::consts::SQRT_2 * nf * nf * (nf - 1.0).sqrt());
    -1.0 - 4.0 / (nf * nf) + 3.0 / nf + 3.0 * x / nf - coef * base * base.sqrt()
}

/// The `n` with `x ∈ [-1 + 2/n, -1 + 2/(n-1))`; `2` on `[0, 1]`. At shared
/// endpoints the smaller `n` is returned.
pub fn segment_index(x: f64) -> Result<usize> {
    if !(x > -1.0 && x <= 1.0) {
        return Err(RegionError::OutOfDomain {
            value: x,
            domain: "(-1, 1]",
        });
    }
    if x >= 0.0 {
        return Ok(2);
    }
    let raw = (2.0 / (1.0 + x)).ceil();
    let mut n = if raw >= usize::MAX as f64 {
        usize::MAX
    } else {
        (raw as usize).max(2)
    };
    // rounding in 2/(1+x) can push an exact left endpoint into the next segment
    if n > 2 && x >= -1.0 + 2.0 / (n - 1) as f64 - 4.0 * f64::EPSILON {
        n -= 1;
    }
    Ok(n)
}

/// `Φ(x)` on `[-1, 1]`.
pub fn phi_boundary(x: f64) -> Result<f64> {
    if !(-1.0..=1.0).contains(&x) {
        return Err(RegionError::OutOfDomain {
            value: x,
            domain: "[-1, 1]",
        });
    }
    if x == -1.0 {
        return Ok(-1.0);
    }
    Ok(phi_piece(segment_index(x)?, x).clamp(-1.0, 1.0))
}

/// Upper boundary `-Φ(-x)`.
pub fn upper_boundary(x: f64) -> Result<f64> {
    Ok(-phi_boundary(-x)?)
}

fn check_half_interval(x: f64) -> Result<()> {
    if !(0.0..=0.5).contains(&x) {
        return Err(RegionError::OutOfDomain {
            value: x,
            domain: "[0, 1/2]",
        });
    }
    Ok(())
}

/// `φ(x)`, the largest `invs` compatible with `inv = x`.
pub fn varphi(x: f64) -> Result<f64> {
    check_half_interval(x)?;
    if x == 0.5 {
        return Ok(1.0 / 6.0);
    }
    // x ∈ [1/2 - 1/(2(n-1)), 1/2 - 1/(2n)]  ⇔  n - 1 ≤ 1/(1-2x) ≤ n
    let raw = (1.0 / (1.0 - 2.0 * x)).ceil();
    let n = if raw >= usize::MAX as f64 {
        usize::MAX
    } else {
        (raw as usize).max(2)
    };
    let nf = n as f64;
    let base = (nf - 1.0 - 2.0 * nf * x).max(0.0);
    Ok(1.0 / 6.0 + 1.0 / (3.0 * nf * nf) - 1.0 / (2.0 * nf)
        + x / nf
        + (nf - 2.0) / (6.0 * nf * nf * (nf - 1.0).sqrt()) * base * base.sqrt())
}

/// `ϑ(x) = x - 2φ(x)`.
pub fn theta(x: f64) -> Result<f64> {
    Ok(x - 2.0 * varphi(x)?)
}

/// Membership in the exact region, closed with slack [`MEMBERSHIP_TOL`].
pub fn contains(p: &RegionPoint) -> bool {
    let lower = phi_boundary(p.tau).expect("RegionPoint is inside the square");
    let upper = upper_boundary(p.tau).expect("RegionPoint is inside the square");
    lower - MEMBERSHIP_TOL <= p.rho && p.rho <= upper + MEMBERSHIP_TOL
}

/// Lower Durbin–Stuart bound `(1+τ)²/2 - 1`.
pub fn durbin_stuart_lower(tau: f64) -> f64 {
    (1.0 + tau) * (1.0 + tau) / 2.0 - 1.0
}

/// Upper Durbin–Stuart bound `1 - (1-τ)²/2`.
pub fn durbin_stuart_upper(tau: f64) -> f64 {
    1.0 - (1.0 - tau) * (1.0 - tau) / 2.0
}

/// Membership in the classical region cut out by Daniels' and Durbin–Stuart's inequalities.
pub fn classical_contains(p: &RegionPoint) -> bool {
    (3.0 * p.tau - 2.0 * p.rho).abs() <= 1.0 + MEMBERSHIP_TOL
        && durbin_stuart_lower(p.tau) - MEMBERSHIP_TOL <= p.rho
        && p.rho <= durbin_stuart_upper(p.tau) + MEMBERSHIP_TOL
}

/// One row of the boundary table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundarySample {
    pub tau: f64,
    pub rho_lower: f64,
    pub rho_upper: f64,
}

/// `k` equally spaced τ values from -1 to 1 with both boundary values.
pub fn boundary_samples(k: usize) -> Result<Vec<BoundarySample>> {
    if k < 2 {
        return Err(RegionError::TooFewSamples(k));
    }
    let last = (k - 1) as f64;
    (0..k)
        .map(|i| {
            let tau = if i + 1 == k {
                1.0
            } else {
                -1.0 + 2.0 * i as f64 / last
            };
            Ok(BoundarySample {
                tau,
                rho_lower: phi_boundary(tau)?,
                rho_upper: upper_boundary(tau)?,
            })
        })
        .collect()
}

pub const BOUNDARY_CSV_HEADER: &str = "tau,rho_lower,rho_upper";

/// CSV with header `tau,rho_lower,rho_upper` and 17 significant digits per value.
pub fn boundary_csv(samples: &[BoundarySample]) -> String {
    let mut out = String::with_capacity(64 * (samples.len() + 1));
    out.push_str(BOUNDARY_CSV_HEADER);
    out.push('\n');
    for s in samples {
        out.push_str(&format!(
            "{},{},{}\n",
            crate::format::f17(s.tau),
            crate::format::f17(s.rho_lower),
            crate::format::f17(s.rho_upper)
        ));
    }
    out
}

pub fn parse_boundary_csv(text: &str) -> Result<Vec<BoundarySample>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim() == BOUNDARY_CSV_HEADER => {}
        _ => {
            return Err(RegionError::Csv {
                line: 1,
                reason: format!("expected header `{BOUNDARY_CSV_HEADER}`"),
            })
        }
    }
    let mut rows = Vec::new();
    for (idx, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 3 {
            return Err(RegionError::Csv {
                line: idx + 1,
                reason: format!("expected 3 fields, found {}", fields.len()),
            });
        }
        let mut vals = [0.0; 3];
        for (slot, field) in vals.iter_mut().zip(&fields) {
            *slot = field.trim().parse().map_err(|e| RegionError::Csv {
                line: idx + 1,
                reason: format!("{e}"),
            })?;
        }
        rows.push(BoundarySample {
            tau: vals[0],
            rho_lower: vals[1],
            rho_upper: vals[2],
        });
    }
    Ok(rows)
}

/// `4/5 - (4/5) ζ(3) + (2/15) π²`.
pub fn area_closed_form() -> f64 {
    0.8 - 0.8 * ZETA3 + 2.0 / 15.0 * std::f64::consts::PI * std::f64::consts::PI
}

fn check_tol(tol: f64) -> Result<()> {
    if !(tol > 0.0) {
        return Err(RegionError::BadTolerance(tol));
    }
    Ok(())
}

/// Number of boundary segments resolved explicitly next to each corner;
/// the remaining sliver of width `2/N` is estimated by a trapezoid.
fn corner_resolution(tol: f64) -> usize {
    // sliver error ≤ width · (Φ(-1 + 2/N) + 1) = 4/N³ per corner
    let n = (32.0 / tol).cbrt().ceil();
    (n as usize).clamp(64, 1_000_000)
}

/// Area of the exact region, `∫ (-Φ(-x) - Φ(x)) dx` over `[-1, 1]`, by
/// adaptive quadrature with nodes forced at every segment junction `±(-1 + 2/n)`.
pub fn area_quadrature(tol: f64) -> Result<f64> {
    Ok(area_quadrature_detailed(tol)?.value)
}

pub fn area_quadrature_detailed(tol: f64) -> Result<Integral> {
    check_tol(tol)?;
    let big_n = corner_resolution(tol);
    let gap = |x: f64| -phi_piece_any(-x) - phi_piece_any(x);

    let mut points = Vec::with_capacity(2 * big_n + 1);
    for n in (3..=big_n).rev() {
        points.push(-1.0 + 2.0 / n as f64);
    }
    points.push(0.0);
    for n in 3..=big_n {
        points.push(1.0 - 2.0 / n as f64);
    }
    let mut total = integrate_piecewise(&gap, &points, tol / 2.0);

    // corner slivers [-1, -1 + 2/N] and [1 - 2/N, 1]; gap(±1) = 0
    let width = 2.0 / big_n as f64;
    total.value += 0.5 * width * gap(-1.0 + width);
    total.value += 0.5 * width * gap(1.0 - width);
    total.error += 8.0 / (big_n as f64).powi(3);
    Ok(total)
}

// Φ without the domain checks, for the integrand.
fn phi_piece_any(x: f64) -> f64 {
    if x <= -1.0 {
        -1.0
    } else {
        phi_piece(segment_index(x.min(1.0)).expect("x in (-1, 1]"), x)
    }
}

/// Area of the classical region by the same quadrature.
pub fn classical_area_quadrature(tol: f64) -> Result<f64> {
    check_tol(tol)?;
    let gap = |x: f64| {
        let upper = durbin_stuart_upper(x).min((3.0 * x + 1.0) / 2.0);
        let lower = durbin_stuart_lower(x).max((3.0 * x - 1.0) / 2.0);
        upper - lower
    };
    Ok(integrate_piecewise(&gap, &[-1.0, 0.0, 1.0], tol).value)
}
