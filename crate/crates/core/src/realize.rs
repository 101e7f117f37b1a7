//! Shuffles attaining prescribed `(τ, ρ)` pairs.
//!
//! Boundary points come from prototypes: a decreasing permutation with
//! weights `(r, …, r, 1 - (n-1) r)`. For these
//!
//! ```text
//! τ = 1 - 4(n-1) r + 2 r² n (n-1)
//! ρ = 1 - 2 r (n-1) (3 - 3 r (n-1) + r² (n-2) n)
//! ```
//!
//! Interior points are reached by an ordinal sum with the identity on `[0, s]`,
//! which moves a point towards `(1, 1)` by `1 - τ ↦ (1-s)²(1 - τ)` and
//! `1 - ρ ↦ (1-s)³(1 - ρ)`, applied to a point of the boundary curve `γ`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::concordance::tau_rho;
use crate::region::{phi_boundary, segment_index, RegionError};
use crate::shuffle::{Permutation, RegionPoint, Shuffle, ShuffleError, SimplexWeights};

/// Largest prototype built by [`boundary_curve`] and [`realize`].
pub const MAX_PROTOTYPE_SEGMENTS: usize = 10_000;

/// Targets with `τ + 1` at most this are mapped to the reversal shuffle.
pub const CORNER_TOL: f64 = 1e-9;

/// Targets this close to a boundary curve are realized by a prototype.
pub const BOUNDARY_TOL: f64 = 1e-12;

/// Targets at most this far outside the region (vertically) are treated as
/// boundary points.
pub const SNAP_TOL: f64 = 1e-9;

/// Largest accepted round-trip distance.
pub const MAX_RESIDUAL: f64 = 1e-6;

const SCAN_POINTS: usize = 4096;
const REFINE_FACTOR: usize = 16;
const T_TOL: f64 = 1e-13;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RealizeError {
    #[error("({tau}, {rho}) lies outside the attainable region")]
    OutsideRegion { tau: f64, rho: f64 },
    #[error("prototype for tau = {tau} needs {n} segments, more than the cap of {MAX_PROTOTYPE_SEGMENTS}")]
    ResolutionLimit { tau: f64, n: usize },
    #[error("no sign change of the rho residual for ({tau}, {rho}) after {evaluations} evaluations; residual ranged over [{g_min}, {g_max}]")]
    NoBracket {
        tau: f64,
        rho: f64,
        evaluations: usize,
        g_min: f64,
        g_max: f64,
    },
    #[error("residual {residual} exceeds {MAX_RESIDUAL}")]
    Residual { residual: f64 },
    #[error("prototype parameter r = {r} outside [1/{n}, 1/({n}-1)]")]
    BadPrototype { n: usize, r: f64 },
    #[error("curve parameter {0} outside [0, 1]")]
    BadParameter(f64),
    #[error(transparent)]
    Region(#[from] RegionError),
    #[error(transparent)]
    Shuffle(#[from] ShuffleError),
}

pub type Result<T, E = RealizeError> = std::result::Result<T, E>;

/// Decreasing permutation of length `n` with weights `(r, …, r, 1 - (n-1) r)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prototype {
    n: usize,
    r: f64,
}

impl Prototype {
    pub fn new(n: usize, r: f64) -> Result<Self> {
        let nf = n as f64;
        let slack = 4.0 * f64::EPSILON;
        if n < 2 || !(r >= 1.0 / nf - slack && r <= 1.0 / (nf - 1.0) + slack) {
            return Err(RealizeError::BadPrototype { n, r });
        }
        Ok(Self {
            n,
            r: r.clamp(1.0 / nf, 1.0 / (nf - 1.0)),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn weights(&self) -> Vec<f64> {
        let mut w = vec![self.r; self.n];
        w[self.n - 1] = (1.0 - (self.n - 1) as f64 * self.r).max(0.0);
        w
    }

    pub fn tau(&self) -> f64 {
        let (n, r) = (self.n as f64, self.r);
        1.0 - 4.0 * (n - 1.0) * r + 2.0 * r * r * n * (n - 1.0)
    }

    pub fn rho(&self) -> f64 {
        let (n, r) = (self.n as f64, self.r);
        1.0 - 2.0 * r * (n - 1.0) * (3.0 - 3.0 * r * (n - 1.0) + r * r * (n - 2.0) * n)
    }
}

/// The prototype whose τ equals `x`.
pub fn prototype_for_tau(x: f64) -> Result<Prototype> {
    let n = segment_index(x)?;
    let nf = n as f64;
    // r = 1/n + √(2(n-1)(n-2+nx)) / (2n(n-1)), the larger root of the τ quadratic
    let disc = (2.0 * (nf - 1.0) * (nf - 2.0 + nf * x)).max(0.0);
    let r = 1.0 / nf + disc.sqrt() / (2.0 * nf * (nf - 1.0));
    Prototype::new(n, r.min(1.0 / (nf - 1.0)))
}

pub fn prototype_shuffle(p: &Prototype) -> Shuffle {
    Shuffle::straight(
        Permutation::decreasing(p.n),
        SimplexWeights::normalized(p.weights(), 1e-9).expect("prototype weights lie in the simplex"),
    )
    .expect("prototype shuffle is valid")
}

/// `γ(t)`: `(4t - 1, Φ(4t - 1))` on `[0, 1/2]` and `(3 - 4t, -Φ(4t - 3))` on `[1/2, 1]`.
pub fn boundary_point(t: f64) -> Result<RegionPoint> {
    if !(0.0..=1.0).contains(&t) {
        return Err(RealizeError::BadParameter(t));
    }
    let p = if t <= 0.5 {
        let x = 4.0 * t - 1.0;
        RegionPoint::new(x, phi_boundary(x)?)
    } else {
        let x = 4.0 * t - 3.0;
        RegionPoint::new(-x, -phi_boundary(x)?)
    };
    Ok(p?)
}

fn lower_boundary_shuffle(x: f64) -> Result<Shuffle> {
    if x + 1.0 <= CORNER_TOL {
        return Ok(Shuffle::reversal());
    }
    let p = prototype_for_tau(x)?;
    if p.n > MAX_PROTOTYPE_SEGMENTS {
        return Err(RealizeError::ResolutionLimit { tau: x, n: p.n });
    }
    Ok(prototype_shuffle(&p))
}

/// A shuffle on the boundary together with `γ(t)`.
pub fn boundary_curve(t: f64) -> Result<(Shuffle, RegionPoint)> {
    let point = boundary_point(t)?;
    let shuffle = if t <= 0.5 {
        lower_boundary_shuffle(4.0 * t - 1.0)?
    } else {
        lower_boundary_shuffle(4.0 * t - 3.0)?.flip()
    };
    Ok((shuffle, point))
}

/// Where on the homotopy a realization was found.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HomotopyPoint {
    /// Length of the identity block of the ordinal sum.
    pub s: f64,
    /// Parameter of the boundary curve.
    pub t: f64,
    pub residual: f64,
    /// Set when the point-reflected target was realized and the result flipped.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub reflected: bool,
}

fn finish(target: &RegionPoint, h: Shuffle, s: f64, t: f64) -> Result<(Shuffle, HomotopyPoint)> {
    let residual = tau_rho(&h).distance(target);
    if residual > MAX_RESIDUAL {
        return Err(RealizeError::Residual { residual });
    }
    Ok((
        h,
        HomotopyPoint {
            s,
            t,
            residual,
            reflected: false,
        },
    ))
}

/// A shuffle whose `(τ, ρ)` is within [`MAX_RESIDUAL`] of `target`.
pub fn realize(target: &RegionPoint) -> Result<(Shuffle, HomotopyPoint)> {
    let (tau, rho) = (target.tau, target.rho);
    let lower = phi_boundary(tau)?;
    let upper = -phi_boundary(-tau)?;
    if rho < lower - SNAP_TOL || rho > upper + SNAP_TOL {
        return Err(RealizeError::OutsideRegion { tau, rho });
    }
    if tau >= 1.0 - BOUNDARY_TOL {
        return finish(target, Shuffle::identity(), 1.0, 0.5);
    }
    if tau + 1.0 <= CORNER_TOL {
        return finish(target, Shuffle::reversal(), 0.0, 0.0);
    }
    if rho <= lower + BOUNDARY_TOL {
        let h = lower_boundary_shuffle(tau)?;
        return finish(target, h, 0.0, (1.0 + tau) / 4.0);
    }
    if rho >= upper - BOUNDARY_TOL {
        let h = lower_boundary_shuffle(-tau)?.flip();
        return finish(target, h, 0.0, (3.0 - tau) / 4.0);
    }
    match homotopy(target) {
        Err(RealizeError::ResolutionLimit { .. }) => {
            let (h, mut point) = homotopy(&target.reflect())?;
            let h = h.flip();
            point.residual = tau_rho(&h).distance(target);
            point.reflected = true;
            if point.residual > MAX_RESIDUAL {
                return Err(RealizeError::Residual {
                    residual: point.residual,
                });
            }
            Ok((h, point))
        }
        other => other,
    }
}

// Arc of γ from the upper boundary point above τ* through (-1, -1) to the
// lower boundary point below τ*; every point on it has τ ≤ τ*.
struct Arc {
    target: RegionPoint,
    start: f64,
    length: f64,
}

impl Arc {
    fn new(target: &RegionPoint) -> Self {
        Self {
            target: *target,
            start: (3.0 - target.tau) / 4.0,
            length: (1.0 + target.tau) / 2.0,
        }
    }

    fn t(&self, theta: f64) -> f64 {
        let t = self.start + theta * self.length;
        if t > 1.0 {
            (t - 1.0).clamp(0.0, 1.0)
        } else {
            t
        }
    }

    fn identity_block(&self, tau_t: f64) -> f64 {
        let ratio = ((1.0 - self.target.tau) / (1.0 - tau_t)).min(1.0);
        1.0 - ratio.sqrt()
    }

    // achieved ρ minus target ρ after choosing s to match τ exactly
    fn residual(&self, theta: f64) -> f64 {
        let p = boundary_point(self.t(theta)).expect("arc stays in [0, 1]");
        let ratio = ((1.0 - self.target.tau) / (1.0 - p.tau)).min(1.0);
        1.0 - ratio * ratio.sqrt() * (1.0 - p.rho) - self.target.rho
    }

    fn brackets(&self, points: usize, g_min: &mut f64, g_max: &mut f64) -> Vec<(f64, f64)> {
        let mut out = Vec::new();
        let mut prev = (0.0, self.residual(0.0));
        for i in 1..=points {
            let theta = i as f64 / points as f64;
            let g = self.residual(theta);
            *g_min = g_min.min(g);
            *g_max = g_max.max(g);
            if prev.1 == 0.0 || (prev.1 > 0.0) != (g > 0.0) {
                out.push((prev.0, theta));
            }
            prev = (theta, g);
        }
        out
    }

    fn bisect(&self, mut lo: f64, mut hi: f64) -> f64 {
        let mut g_lo = self.residual(lo);
        let mut g_hi = self.residual(hi);
        if g_lo == 0.0 {
            return lo;
        }
        for _ in 0..200 {
            if (hi - lo) * self.length <= T_TOL {
                break;
            }
            let mid = 0.5 * (lo + hi);
            let g_mid = self.residual(mid);
            if g_mid == 0.0 {
                return mid;
            }
            if (g_mid > 0.0) == (g_lo > 0.0) {
                lo = mid;
                g_lo = g_mid;
            } else {
                hi = mid;
                g_hi = g_mid;
            }
        }
        if g_lo.abs() <= g_hi.abs() {
            lo
        } else {
            hi
        }
    }
}

fn homotopy(target: &RegionPoint) -> Result<(Shuffle, HomotopyPoint)> {
    let arc = Arc::new(target);
    let mut g_min = f64::INFINITY;
    let mut g_max = f64::NEG_INFINITY;
    let mut brackets = arc.brackets(SCAN_POINTS, &mut g_min, &mut g_max);
    let mut evaluations = SCAN_POINTS + 1;
    if brackets.is_empty() {
        brackets = arc.brackets(SCAN_POINTS * REFINE_FACTOR, &mut g_min, &mut g_max);
        evaluations += SCAN_POINTS * REFINE_FACTOR + 1;
    }
    if brackets.is_empty() {
        return Err(RealizeError::NoBracket {
            tau: target.tau,
            rho: target.rho,
            evaluations,
            g_min,
            g_max,
        });
    }
    let mut limit = None;
    for (lo, hi) in brackets {
        let t = arc.t(arc.bisect(lo, hi));
        let base = match boundary_curve(t) {
            Ok((h, _)) => h,
            Err(e @ RealizeError::ResolutionLimit { .. }) => {
                limit.get_or_insert(e);
                continue;
            }
            Err(e) => return Err(e),
        };
        // s from the measured τ of the base shuffle rather than the closed form
        let s = arc.identity_block(tau_rho(&base).tau).clamp(0.0, 1.0);
        let h = base.ordinal_sum_with_identity(s)?;
        return finish(target, h, s, t);
    }
    Err(limit.expect("every bracket hit the resolution limit"))
}

/// `count` points uniform on the region, by rejection from `[-1, 1]²`.
pub fn sample_region(count: usize, seed: u64) -> Vec<RegionPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let tau = rng.gen_range(-1.0..=1.0);
        let rho = rng.gen_range(-1.0..=1.0);
        let p = RegionPoint { tau, rho };
        if crate::region::contains(&p) {
            out.push(p);
        }
    }
    out
}
