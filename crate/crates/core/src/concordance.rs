//! Kendall's τ and Spearman's ρ of shuffle copulas.
//!
//! For a shuffle `h`, `τ = 1 - 4·inv(h)` and `ρ = 1 - 12·invs(h)`, where `inv`
//! is the mass of inverted pairs and `invs` the same mass weighted by the
//! pair distance. For a straight shuffle both are polynomials in the segment
//! lengths whose monomials are indexed by the inverted pairs `I_π` and the
//! cyclic triples `Q_π` of the permutation:
//!
//! ```text
//! a_π(u) = inv(h)             = Σ_{ {i,j} ∈ I_π } uᵢuⱼ
//! b_π(u) = inv(h) - 2 invs(h) = Σ_{ {i,j,k} ∈ Q_π } uᵢuⱼuₖ
//! ```
//!
//! A reversed segment contributes `uᵢ²/2` to `inv` and `uᵢ³/6` to `invs`
//! from pairs inside the segment; pairs across segments only see `π`.

use thiserror::Error;

use crate::fenwick::Fenwick;
use crate::shuffle::{Permutation, RegionPoint, Shuffle, Sign};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConcordanceError {
    #[error("perturbation direction sums to {0}, expected 0")]
    DirectionSum(f64),
    #[error("length mismatch: permutation of {perm} vs vector of {vector}")]
    LengthMismatch { perm: usize, vector: usize },
    #[error("oracle grid needs at least 2 points per axis, got {0}")]
    GridTooSmall(usize),
}

/// Inverted pairs and cyclic triples of a permutation (zero-based indices).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InversionData {
    n: usize,
    pub pairs: Vec<(usize, usize)>,
    pub triples: Vec<(usize, usize, usize)>,
}

/// `{i, j, k}` with `i < j < k` is a cyclic triple when the images follow one
/// of the three rotations of a descending pattern.
#[inline]
pub fn is_cyclic_triple(pi: usize, pj: usize, pk: usize) -> bool {
    (pi > pj && pj > pk) || (pj > pk && pk > pi) || (pk > pi && pi > pj)
}

impl InversionData {
    /// Direct enumeration, `O(n³)`.
    pub fn new(perm: &Permutation) -> Self {
        let n = perm.len();
        let p = perm.as_slice();
        let mut pairs = Vec::new();
        let mut triples = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if p[i] > p[j] {
                    pairs.push((i, j));
                }
                for k in j + 1..n {
                    if is_cyclic_triple(p[i], p[j], p[k]) {
                        triples.push((i, j, k));
                    }
                }
            }
        }
        Self { n, pairs, triples }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn contains_triple(&self, i: usize, j: usize, k: usize) -> bool {
        let mut t = [i, j, k];
        t.sort_unstable();
        self.triples.binary_search(&(t[0], t[1], t[2])).is_ok()
    }

    /// `(a_π(u), b_π(u))`; `u` may be any real vector of length `n`.
    pub fn ab(&self, u: &[f64]) -> (f64, f64) {
        debug_assert_eq!(u.len(), self.n);
        let a = self.pairs.iter().map(|&(i, j)| u[i] * u[j]).sum();
        let b = self
            .triples
            .iter()
            .map(|&(i, j, k)| u[i] * u[j] * u[k])
            .sum();
        (a, b)
    }
}

pub fn inversion_data(perm: &Permutation) -> InversionData {
    InversionData::new(perm)
}

/// `(a_π(u), b_π(u))` by direct summation over `I_π` and `Q_π`.
///
/// The polynomials are evaluated for any real `u`, not only simplex points.
pub fn ab_values(perm: &Permutation, u: &[f64]) -> Result<(f64, f64), ConcordanceError> {
    if perm.len() != u.len() {
        return Err(ConcordanceError::LengthMismatch {
            perm: perm.len(),
            vector: u.len(),
        });
    }
    Ok(InversionData::new(perm).ab(u))
}

/// `(inv(h), invs(h))` in closed form.
///
/// Cross-segment terms are `uᵢuⱼ` and `uᵢuⱼ(cⱼ - cᵢ)` (with `c` the segment
/// midpoints) for every inverted pair; they are accumulated with a Fenwick
/// tree over image positions so the cost is `O(n log n)`.
pub fn inv_invs(h: &Shuffle) -> (f64, f64) {
    let n = h.len();
    let s = h.domain_breakpoints();
    let u = h.weights();
    // slot n-1-π(k) so that prefix sums cover images above π(k)
    let mut mass = Fenwick::<f64>::new(n);
    let mut moment = Fenwick::<f64>::new(n);
    let mut inv = 0.0;
    let mut invs = 0.0;
    for k in 0..n {
        let w = u[k];
        let mid = s[k] + 0.5 * w;
        let slot = n - 1 - h.perm().get(k);
        let above = mass.prefix(slot);
        let above_moment = moment.prefix(slot);
        inv += w * above;
        invs += w * (mid * above - above_moment);
        if h.signs()[k] == Sign::Minus {
            inv += 0.5 * w * w;
            invs += w * w * w / 6.0;
        }
        mass.add(slot, w);
        moment.add(slot, w * mid);
    }
    (inv.clamp(0.0, 0.5), invs.clamp(0.0, 1.0 / 6.0))
}

/// `(τ, ρ) = (1 - 4 inv, 1 - 12 invs)`.
pub fn tau_rho(h: &Shuffle) -> RegionPoint {
    let (inv, invs) = inv_invs(h);
    RegionPoint::new(1.0 - 4.0 * inv, 1.0 - 12.0 * invs).expect("inv and invs are clamped")
}

/// Coefficients of `a_π(u + tδ) - a_π(u)` and `b_π(u + tδ) - b_π(u)` as
/// polynomials in `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct PerturbationCoeffs {
    pub alpha1: f64,
    pub alpha2: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub beta3: f64,
    /// `aᵢ = Σ_{j : {i,j} ∈ I_π} uⱼ`
    pub a_vec: Vec<f64>,
    /// `bᵢ = Σ_{j<k : {i,j,k} ∈ Q_π} uⱼuₖ`
    pub b_vec: Vec<f64>,
    /// `c_{i,j} = Σ_{k : {i,j,k} ∈ Q_π} uₖ`, symmetric with zero diagonal.
    pub c_mat: Vec<Vec<f64>>,
    pub delta: Vec<f64>,
}

impl PerturbationCoeffs {
    pub fn a_difference(&self, t: f64) -> f64 {
        self.alpha1 * t + self.alpha2 * t * t
    }

    pub fn b_difference(&self, t: f64) -> f64 {
        ((self.beta3 * t + self.beta2) * t + self.beta1) * t
    }
}

/// First-order pieces `a_vec`, `b_vec`, `c_mat` of the perturbation expansion
/// at `u`; they do not depend on the direction.
pub fn linear_coefficients(
    data: &InversionData,
    u: &[f64],
) -> (Vec<f64>, Vec<f64>, Vec<Vec<f64>>) {
    let n = data.len();
    let mut a_vec = vec![0.0; n];
    for &(i, j) in &data.pairs {
        a_vec[i] += u[j];
        a_vec[j] += u[i];
    }
    let mut b_vec = vec![0.0; n];
    let mut c_mat = vec![vec![0.0; n]; n];
    for &(i, j, k) in &data.triples {
        b_vec[i] += u[j] * u[k];
        b_vec[j] += u[i] * u[k];
        b_vec[k] += u[i] * u[j];
        for (p, q, r) in [(i, j, k), (i, k, j), (j, k, i)] {
            c_mat[p][q] += u[r];
            c_mat[q][p] += u[r];
        }
    }
    (a_vec, b_vec, c_mat)
}

/// Perturbation coefficients for direction `delta` (which must sum to zero).
pub fn perturbation_coeffs(
    perm: &Permutation,
    u: &[f64],
    delta: &[f64],
) -> Result<PerturbationCoeffs, ConcordanceError> {
    let n = perm.len();
    for len in [u.len(), delta.len()] {
        if len != n {
            return Err(ConcordanceError::LengthMismatch {
                perm: n,
                vector: len,
            });
        }
    }
    let sum: f64 = delta.iter().sum();
    let scale: f64 = delta.iter().map(|d| d.abs()).sum::<f64>().max(1.0);
    if sum.abs() > 1e-12 * scale {
        return Err(ConcordanceError::DirectionSum(sum));
    }
    let data = InversionData::new(perm);
    Ok(perturbation_coeffs_with(&data, u, delta))
}

/// As [`perturbation_coeffs`] with precomputed inversion data and no checks.
pub fn perturbation_coeffs_with(data: &InversionData, u: &[f64], delta: &[f64]) -> PerturbationCoeffs {
    let n = data.len();
    let (a_vec, b_vec, c_mat) = linear_coefficients(data, u);
    let dot = |v: &[f64]| v.iter().zip(delta).map(|(x, d)| x * d).sum::<f64>();
    let alpha1 = dot(&a_vec);
    let beta1 = dot(&b_vec);
    let alpha2 = data.pairs.iter().map(|&(i, j)| delta[i] * delta[j]).sum();
    let beta3 = data
        .triples
        .iter()
        .map(|&(i, j, k)| delta[i] * delta[j] * delta[k])
        .sum();
    let mut beta2 = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            beta2 += c_mat[i][j] * delta[i] * delta[j];
        }
    }
    PerturbationCoeffs {
        alpha1,
        alpha2,
        beta1,
        beta2,
        beta3,
        a_vec,
        b_vec,
        c_mat,
        delta: delta.to_vec(),
    }
}

/// Midpoint-grid estimate of `(τ, ρ)` straight from the definitions of
/// `inv` and `invs`, using only [`Shuffle::evaluate`].
///
/// With `m` grid points per axis the pair counts are exact integers, so the
/// result is deterministic; the discretization error is `O(1/m)`.
pub fn oracle_tau_rho(h: &Shuffle, grid_m: usize) -> Result<RegionPoint, ConcordanceError> {
    if grid_m < 2 {
        return Err(ConcordanceError::GridTooSmall(grid_m));
    }
    let m = grid_m;
    let values: Vec<f64> = (0..m)
        .map(|a| h.eval_unchecked((a as f64 + 0.5) / m as f64))
        .collect();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
    // dense ranks, equal values share a rank
    let mut rank = vec![0usize; m];
    let mut r = 0;
    for w in 0..m {
        if w > 0 && values[order[w]] != values[order[w - 1]] {
            r += 1;
        }
        rank[order[w]] = r;
    }
    let slots = r + 1;
    let mut count = Fenwick::<u64>::new(slots);
    let mut index_sum = Fenwick::<u64>::new(slots);
    let mut pairs: u64 = 0;
    let mut spread: u64 = 0;
    for b in 0..m {
        // earlier points mapped strictly higher: slots above rank[b]
        let slot = slots - 1 - rank[b];
        let c = count.prefix(slot);
        let s = index_sum.prefix(slot);
        pairs += c;
        spread += b as u64 * c - s;
        count.add(slot, 1);
        index_sum.add(slot, b as u64);
    }
    let mf = m as f64;
    let inv = pairs as f64 / (mf * mf);
    let invs = spread as f64 / (mf * mf * mf);
    Ok(RegionPoint::new(1.0 - 4.0 * inv, 1.0 - 12.0 * invs).expect("grid sums stay in range"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shuffle::SimplexWeights;

    fn perm(images: &[usize]) -> Permutation {
        Permutation::from_images(images).unwrap()
    }

    fn figure2() -> Shuffle {
        Shuffle::from_parts(&[4, 2, 1, 3], vec![0.125, 0.375, 0.25, 0.25], &[1, -1, 1, 1]).unwrap()
    }

    #[test]
    fn inversion_data_examples() {
        let d = inversion_data(&perm(&[1, 2, 3]));
        assert!(d.pairs.is_empty() && d.triples.is_empty());
        let d = inversion_data(&perm(&[3, 2, 1]));
        assert_eq!(d.pairs, vec![(0, 1), (0, 2), (1, 2)]);
        assert_eq!(d.triples, vec![(0, 1, 2)]);
        let d = inversion_data(&perm(&[2, 1, 3]));
        assert_eq!(d.pairs, vec![(0, 1)]);
        assert_eq!(d.triples, vec![(0, 1, 2)]);
        assert!(d.contains_triple(2, 0, 1));
    }

    #[test]
    fn set_sizes_are_bounded() {
        use itertools::Itertools;
        for p in (0..5).permutations(5) {
            let d = InversionData::new(&Permutation::from_zero_based(p).unwrap());
            assert!(d.pairs.len() <= 10 && d.triples.len() <= 10);
        }
    }

    #[test]
    fn extremes() {
        let (i, s) = inv_invs(&Shuffle::identity());
        assert_eq!((i, s), (0.0, 0.0));
        let (i, s) = inv_invs(&Shuffle::reversal());
        assert_eq!(i, 0.5);
        assert!((s - 1.0 / 6.0).abs() < 1e-16);
        let p = tau_rho(&Shuffle::reversal());
        assert!((p.tau + 1.0).abs() < 1e-15 && (p.rho + 1.0).abs() < 1e-15);
        assert_eq!(tau_rho(&Shuffle::identity()), RegionPoint { tau: 1.0, rho: 1.0 });
    }

    #[test]
    fn figure2_closed_form() {
        // exact rationals, confirmed by the grid oracle below and in tests/oracle.rs
        let (i, s) = inv_invs(&figure2());
        assert!((i - 35.0 / 128.0).abs() < 1e-15);
        assert!((s - 95.0 / 1024.0).abs() < 1e-15);
        let p = tau_rho(&figure2());
        assert!((p.tau + 3.0 / 32.0).abs() < 1e-14);
        assert!((p.rho + 29.0 / 256.0).abs() < 1e-14);
    }

    #[test]
    fn figure2_oracle_agrees() {
        let closed = tau_rho(&figure2());
        let grid = oracle_tau_rho(&figure2(), 4000).unwrap();
        assert!((closed.tau - grid.tau).abs() <= 5e-3);
        assert!((closed.rho - grid.rho).abs() <= 5e-3);
    }

    #[test]
    fn oracle_extremes() {
        assert_eq!(
            oracle_tau_rho(&Shuffle::identity(), 100).unwrap(),
            RegionPoint { tau: 1.0, rho: 1.0 }
        );
        let w = oracle_tau_rho(&Shuffle::reversal(), 100).unwrap();
        // m(m-1)/2 inverted grid pairs give τ = -1 + 2/m exactly
        assert!((w.tau - (-1.0 + 2.0 / 100.0)).abs() < 1e-12);
        assert!(oracle_tau_rho(&Shuffle::identity(), 1).is_err());
    }

    #[test]
    fn prototype_three() {
        let h = Shuffle::straight(Permutation::decreasing(3), SimplexWeights::uniform(3)).unwrap();
        let p = tau_rho(&h);
        assert!((p.tau + 1.0 / 3.0).abs() < 1e-15);
        assert!((p.rho + 7.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn ab_examples() {
        let third = [1.0 / 3.0; 3];
        let (a, b) = ab_values(&Permutation::decreasing(3), &third).unwrap();
        assert!((a - 1.0 / 3.0).abs() < 1e-15 && (b - 1.0 / 27.0).abs() < 1e-15);
        let (a, b) = ab_values(&Permutation::identity(4), &[0.1, 0.2, 0.3, 0.4]).unwrap();
        assert_eq!((a, b), (0.0, 0.0));
        let (a, b) = ab_values(&perm(&[2, 1, 3]), &third).unwrap();
        assert!((a - 1.0 / 9.0).abs() < 1e-15 && (b - 1.0 / 27.0).abs() < 1e-15);
        assert!(ab_values(&perm(&[2, 1, 3]), &[0.5, 0.5]).is_err());
    }

    #[test]
    fn b_equals_a_minus_twice_invs_on_straight_shuffles() {
        let p = perm(&[3, 5, 1, 4, 2]);
        let u = vec![0.1, 0.25, 0.15, 0.3, 0.2];
        let (a, b) = ab_values(&p, &u).unwrap();
        let h = Shuffle::straight(p, SimplexWeights::new(u).unwrap()).unwrap();
        let (inv, invs) = inv_invs(&h);
        assert!((a - inv).abs() < 1e-15);
        assert!((b - (a - 2.0 * invs)).abs() < 1e-15);
    }

    #[test]
    fn perturbation_zero_direction() {
        let c = perturbation_coeffs(&perm(&[2, 3, 1]), &[0.2, 0.3, 0.5], &[0.0; 3]).unwrap();
        assert_eq!(
            [c.alpha1, c.alpha2, c.beta1, c.beta2, c.beta3],
            [0.0; 5]
        );
    }

    #[test]
    fn perturbation_worked_example() {
        let u = [1.0 / 3.0; 3];
        let c = perturbation_coeffs(&Permutation::decreasing(3), &u, &[1.0, -1.0, 0.0]).unwrap();
        assert!(c.alpha1.abs() < 1e-15);
        assert!((c.alpha2 + 1.0).abs() < 1e-15);
        assert!(c.beta1.abs() < 1e-15);
        assert!((c.beta2 + 1.0 / 3.0).abs() < 1e-15);
        assert!(c.beta3.abs() < 1e-15);
        for t in [0.1, -0.3] {
            let moved: Vec<f64> = u.iter().zip(&c.delta).map(|(x, d)| x + t * d).collect();
            let (a0, b0) = ab_values(&Permutation::decreasing(3), &u).unwrap();
            let (a1, b1) = ab_values(&Permutation::decreasing(3), &moved).unwrap();
            assert!((a1 - a0 - c.a_difference(t)).abs() < 1e-15);
            assert!((b1 - b0 - c.b_difference(t)).abs() < 1e-15);
        }
    }

    #[test]
    fn perturbation_rejects_non_zero_sum() {
        assert!(matches!(
            perturbation_coeffs(&Permutation::decreasing(3), &[1.0 / 3.0; 3], &[1.0, 0.0, 0.0]),
            Err(ConcordanceError::DirectionSum(_))
        ));
    }

    #[test]
    fn c_matrix_shape() {
        let p = perm(&[3, 1, 4, 2, 5]);
        let u = [0.1, 0.2, 0.3, 0.15, 0.25];
        let c = perturbation_coeffs(&p, &u, &[0.0; 5]).unwrap();
        for i in 0..5 {
            assert_eq!(c.c_mat[i][i], 0.0);
            for j in 0..5 {
                assert_eq!(c.c_mat[i][j], c.c_mat[j][i]);
                assert!(c.c_mat[i][j] >= 0.0);
            }
        }
    }
}
