//! Shuffles of the minimum copula.
//!
//! A shuffle `h` is a measure-preserving bijection of `[0, 1]` made of `n`
//! line segments of slope `+1` or `-1`. It is described by a permutation
//! `π` (the order in which the segments land on the image axis), segment
//! lengths `u` in the unit simplex, and one sign per segment. The induced
//! copula is `A_h(x, y) = λ([0, x] ∩ h⁻¹([0, y]))`.
//!
//! All types here are immutable once constructed.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Tolerance on `Σ uᵢ = 1` for weights constructed in-process.
pub const WEIGHT_SUM_TOL: f64 = 1e-12;
/// Tolerance on `Σ uᵢ = 1` for weights read from JSON; they are renormalized afterwards.
pub const INGEST_SUM_TOL: f64 = 1e-9;
/// Segments at or below this (renormalized) length are dropped by [`Shuffle::canonicalize`].
pub const ZERO_SEGMENT_TOL: f64 = 1e-12;
/// Slack allowed when validating that a [`RegionPoint`] lies in `[-1, 1]²`.
pub const REGION_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ShuffleError {
    #[error("a shuffle needs at least one segment")]
    Empty,
    #[error("length mismatch: {perm} permutation images, {weights} weights, {signs} signs")]
    LengthMismatch {
        perm: usize,
        weights: usize,
        signs: usize,
    },
    #[error("images {images:?} are not a permutation of 1..={n}")]
    NotBijective { images: Vec<usize>, n: usize },
    #[error("weight {value} at position {index} is negative or not finite")]
    InvalidWeight { index: usize, value: f64 },
    #[error("weights sum to {sum}, which is not 1 within {tol:e}")]
    WeightSum { sum: f64, tol: f64 },
    #[error("sign {0} is not -1 or 1")]
    InvalidSign(i64),
    #[error("argument {0} lies outside [0, 1]")]
    OutsideUnitInterval(f64),
    #[error("point ({tau}, {rho}) lies outside [-1, 1]²")]
    OutsideSquare { tau: f64, rho: f64 },
    #[error("malformed shuffle JSON: {0}")]
    Json(String),
}

pub type Result<T, E = ShuffleError> = std::result::Result<T, E>;

/// A bijection of `{0, …, n-1}` in one-line notation.
///
/// Stored zero-based; [`Permutation::from_images`] and
/// [`Permutation::images`] use the one-based convention of the JSON schema.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    /// Builds a permutation from one-based images `π(1), …, π(n)`.
    pub fn from_images(images: &[usize]) -> Result<Self> {
        if images.iter().any(|&v| v == 0) {
            return Err(ShuffleError::NotBijective {
                images: images.to_vec(),
                n: images.len(),
            });
        }
        Self::from_zero_based(images.iter().map(|&v| v - 1).collect()).map_err(|_| {
            ShuffleError::NotBijective {
                images: images.to_vec(),
                n: images.len(),
            }
        })
    }

    pub fn from_zero_based(values: Vec<usize>) -> Result<Self> {
        let n = values.len();
        if n == 0 {
            return Err(ShuffleError::Empty);
        }
        let mut seen = vec![false; n];
        for &v in &values {
            if v >= n || seen[v] {
                return Err(ShuffleError::NotBijective {
                    images: values.iter().map(|v| v + 1).collect(),
                    n,
                });
            }
            seen[v] = true;
        }
        Ok(Self(values))
    }

    pub fn identity(n: usize) -> Self {
        assert!(n > 0, "permutation must be non-empty");
        Self((0..n).collect())
    }

    /// `(n, n-1, …, 1)`.
    pub fn decreasing(n: usize) -> Self {
        assert!(n > 0, "permutation must be non-empty");
        Self((0..n).rev().collect())
    }

    /// Relabels distinct values by their rank, e.g. `[7, 2, 5] -> [2, 0, 1]`.
    pub(crate) fn rank_compress(values: &[usize]) -> Self {
        let mut order: Vec<usize> = (0..values.len()).collect();
        order.sort_by_key(|&i| values[i]);
        let mut ranked = vec![0; values.len()];
        for (rank, &i) in order.iter().enumerate() {
            ranked[i] = rank;
        }
        Self(ranked)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Zero-based image of zero-based position `i`.
    #[inline]
    pub fn get(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    /// One-based images.
    pub fn images(&self) -> Vec<usize> {
        self.0.iter().map(|v| v + 1).collect()
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.0.len()];
        for (i, &v) in self.0.iter().enumerate() {
            inv[v] = i;
        }
        Self(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &v)| i == v)
    }

    pub fn is_decreasing(&self) -> bool {
        let n = self.0.len();
        self.0.iter().enumerate().all(|(i, &v)| v == n - 1 - i)
    }

    /// Number of positions `i` with `π(i) < π(i+1)`.
    pub fn ascents(&self) -> usize {
        self.0.windows(2).filter(|w| w[0] < w[1]).count()
    }

    /// At most one ascent.
    pub fn is_almost_decreasing(&self) -> bool {
        self.ascents() <= 1
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", v + 1)?;
        }
        write!(f, ")")
    }
}

/// A point of the unit simplex Δₙ: segment lengths of a shuffle.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexWeights(Vec<f64>);

fn rescale(u: Vec<f64>, sum: f64) -> Vec<f64> {
    if (sum - 1.0).abs() <= u.len() as f64 * f64::EPSILON {
        u
    } else {
        u.into_iter().map(|w| w / sum).collect()
    }
}

impl SimplexWeights {
    /// Validates non-negativity and `Σ uᵢ = 1` within [`WEIGHT_SUM_TOL`].
    pub fn new(u: Vec<f64>) -> Result<Self> {
        Self::validate(&u, WEIGHT_SUM_TOL)?;
        Ok(Self(u))
    }

    /// Accepts weights summing to 1 within `tol` and rescales them to sum to 1.
    /// Weights already summing to 1 up to rounding are kept bit for bit.
    pub fn normalized(u: Vec<f64>, tol: f64) -> Result<Self> {
        let sum = Self::validate(&u, tol)?;
        Ok(Self(rescale(u, sum)))
    }

    fn validate(u: &[f64], tol: f64) -> Result<f64> {
        if u.is_empty() {
            return Err(ShuffleError::Empty);
        }
        for (index, &value) in u.iter().enumerate() {
            if !value.is_finite() || value < 0.0 {
                return Err(ShuffleError::InvalidWeight { index, value });
            }
        }
        let sum: f64 = u.iter().sum();
        if (sum - 1.0).abs() > tol {
            return Err(ShuffleError::WeightSum { sum, tol });
        }
        Ok(sum)
    }

    pub fn uniform(n: usize) -> Self {
        assert!(n > 0, "simplex dimension must be positive");
        Self(vec![1.0 / n as f64; n])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl std::ops::Deref for SimplexWeights {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

/// Slope of a shuffle segment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn from_i64(v: i64) -> Result<Self> {
        match v {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            other => Err(ShuffleError::InvalidSign(other)),
        }
    }

    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn negate(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

/// A point `(τ, ρ)` of `[-1, 1]²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionPoint {
    pub tau: f64,
    pub rho: f64,
}

impl RegionPoint {
    /// Coordinates within [`REGION_TOL`] of `[-1, 1]` are clamped into it.
    pub fn new(tau: f64, rho: f64) -> Result<Self> {
        let ok = |v: f64| v.is_finite() && v.abs() <= 1.0 + REGION_TOL;
        if !ok(tau) || !ok(rho) {
            return Err(ShuffleError::OutsideSquare { tau, rho });
        }
        Ok(Self {
            tau: tau.clamp(-1.0, 1.0),
            rho: rho.clamp(-1.0, 1.0),
        })
    }

    pub fn distance(&self, other: &RegionPoint) -> f64 {
        (self.tau - other.tau).hypot(self.rho - other.rho)
    }

    /// Point reflection through the origin.
    pub fn reflect(&self) -> Self {
        Self {
            tau: -self.tau,
            rho: -self.rho,
        }
    }
}

/// A piecewise-linear, slope ±1, measure-preserving bijection of `[0, 1]`.
#[derive(Debug, Clone)]
pub struct Shuffle {
    perm: Permutation,
    weights: SimplexWeights,
    signs: Vec<Sign>,
    // s[k] = u_1 + … + u_k, t[k] = u_{π⁻¹(1)} + … + u_{π⁻¹(k)}; both of length n + 1.
    s: Vec<f64>,
    t: Vec<f64>,
}

impl Shuffle {
    /// Validates lengths and assembles a shuffle. No canonicalization is done:
    /// zero-weight and mergeable segments are kept as given.
    pub fn new(perm: Permutation, weights: SimplexWeights, signs: Vec<Sign>) -> Result<Self> {
        if perm.len() != weights.len() || perm.len() != signs.len() {
            return Err(ShuffleError::LengthMismatch {
                perm: perm.len(),
                weights: weights.len(),
                signs: signs.len(),
            });
        }
        let n = perm.len();
        let mut s = Vec::with_capacity(n + 1);
        s.push(0.0);
        let mut acc = 0.0;
        for &w in weights.iter() {
            acc += w;
            s.push(acc);
        }
        let inv = perm.inverse();
        let mut t = Vec::with_capacity(n + 1);
        t.push(0.0);
        let mut acc = 0.0;
        for i in 0..n {
            acc += weights[inv.get(i)];
            t.push(acc);
        }
        Ok(Self {
            perm,
            weights,
            signs,
            s,
            t,
        })
    }

    /// Convenience constructor from one-based images and integer signs.
    pub fn from_parts(images: &[usize], weights: Vec<f64>, signs: &[i64]) -> Result<Self> {
        let perm = Permutation::from_images(images)?;
        let weights = SimplexWeights::new(weights)?;
        let signs = signs
            .iter()
            .map(|&v| Sign::from_i64(v))
            .collect::<Result<Vec<_>>>()?;
        Self::new(perm, weights, signs)
    }

    /// A shuffle with all slopes `+1`.
    pub fn straight(perm: Permutation, weights: SimplexWeights) -> Result<Self> {
        let n = perm.len();
        Self::new(perm, weights, vec![Sign::Plus; n])
    }

    /// `h(x) = x`, the shuffle of the minimum copula M.
    pub fn identity() -> Self {
        Self::new(
            Permutation::identity(1),
            SimplexWeights::uniform(1),
            vec![Sign::Plus],
        )
        .expect("identity shuffle is valid")
    }

    /// `h(x) = 1 - x`, the shuffle of the lower Fréchet–Hoeffding bound W.
    pub fn reversal() -> Self {
        Self::new(
            Permutation::identity(1),
            SimplexWeights::uniform(1),
            vec![Sign::Minus],
        )
        .expect("reversal shuffle is valid")
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    pub fn perm(&self) -> &Permutation {
        &self.perm
    }

    pub fn weights(&self) -> &SimplexWeights {
        &self.weights
    }

    pub fn signs(&self) -> &[Sign] {
        &self.signs
    }

    pub fn is_straight(&self) -> bool {
        self.signs.iter().all(|&e| e == Sign::Plus)
    }

    /// Domain breakpoints `s_0 = 0 ≤ s_1 ≤ … ≤ s_n`.
    pub fn domain_breakpoints(&self) -> &[f64] {
        &self.s
    }

    /// Image breakpoints `t_0 = 0 ≤ t_1 ≤ … ≤ t_n`.
    pub fn image_breakpoints(&self) -> &[f64] {
        &self.t
    }

    /// Index of the segment containing `x` (right-continuous; `x = 1` goes to
    /// the last non-empty segment).
    fn segment_of(&self, x: f64) -> usize {
        let n = self.len();
        let k = self.s[1..].partition_point(|&b| b <= x);
        if k < n {
            return k;
        }
        (0..n)
            .rev()
            .find(|&k| self.weights[k] > 0.0)
            .expect("weights sum to one")
    }

    #[inline]
    fn map_on_segment(&self, k: usize, x: f64) -> f64 {
        let offset = x - self.s[k];
        let img = self.perm.get(k);
        match self.signs[k] {
            Sign::Plus => self.t[img] + offset,
            Sign::Minus => self.t[img + 1] - offset,
        }
    }

    /// `h(x)`; at interior breakpoints the right-hand segment is used.
    pub fn evaluate(&self, x: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&x) {
            return Err(ShuffleError::OutsideUnitInterval(x));
        }
        Ok(self.eval_unchecked(x))
    }

    #[inline]
    pub(crate) fn eval_unchecked(&self, x: f64) -> f64 {
        self.map_on_segment(self.segment_of(x), x).clamp(0.0, 1.0)
    }

    /// The shuffle of `h⁻¹`: segments listed in image order, signs carried along.
    pub fn inverse(&self) -> Shuffle {
        let inv = self.perm.inverse();
        let weights: Vec<f64> = (0..self.len()).map(|j| self.weights[inv.get(j)]).collect();
        let signs = (0..self.len()).map(|j| self.signs[inv.get(j)]).collect();
        Shuffle::new(inv, SimplexWeights(weights), signs).expect("inverse of a valid shuffle")
    }

    /// The shuffle of `1 - h`: image order reversed and every slope negated.
    pub fn flip(&self) -> Shuffle {
        let n = self.len();
        let perm = Permutation(self.perm.as_slice().iter().map(|&v| n - 1 - v).collect());
        let signs = self.signs.iter().map(|e| e.negate()).collect();
        Shuffle::new(perm, self.weights.clone(), signs).expect("flip of a valid shuffle")
    }

    /// Ordinal sum with M: identity on `[0, s]`, a `(1 - s)`-scaled copy of `h`
    /// on `[s, 1]`. For `0 < s < 1` the result has one extra leading segment.
    pub fn ordinal_sum_with_identity(&self, s: f64) -> Result<Shuffle> {
        if !(0.0..=1.0).contains(&s) {
            return Err(ShuffleError::OutsideUnitInterval(s));
        }
        if s == 0.0 {
            return Ok(self.clone());
        }
        if s == 1.0 {
            return Ok(Shuffle::identity());
        }
        let n = self.len();
        let mut perm = Vec::with_capacity(n + 1);
        perm.push(0);
        perm.extend(self.perm.as_slice().iter().map(|&v| v + 1));
        let mut weights = Vec::with_capacity(n + 1);
        weights.push(s);
        weights.extend(self.weights.iter().map(|&w| (1.0 - s) * w));
        let mut signs = Vec::with_capacity(n + 1);
        signs.push(Sign::Plus);
        signs.extend_from_slice(&self.signs);
        Shuffle::new(Permutation(perm), SimplexWeights(weights), signs)
    }

    /// Unique representative: renormalized, without empty segments and
    /// without adjacent segments that continue each other on the image axis.
    pub fn canonicalize(&self) -> Shuffle {
        let total: f64 = self.weights.iter().sum();
        let kept: Vec<usize> = (0..self.len())
            .filter(|&k| self.weights[k] / total > ZERO_SEGMENT_TOL)
            .collect();
        let ranks = Permutation::rank_compress(
            &kept.iter().map(|&k| self.perm.get(k)).collect::<Vec<_>>(),
        );

        // (first image, last image, weight, sign)
        let mut groups: Vec<(usize, usize, f64, Sign)> = Vec::with_capacity(kept.len());
        for (pos, &k) in kept.iter().enumerate() {
            let img = ranks.get(pos);
            let w = self.weights[k];
            let sign = self.signs[k];
            if let Some(last) = groups.last_mut() {
                let continues = last.3 == sign
                    && match sign {
                        Sign::Plus => img == last.1 + 1,
                        Sign::Minus => img + 1 == last.1,
                    };
                if continues {
                    last.1 = img;
                    last.2 += w;
                    continue;
                }
            }
            groups.push((img, img, w, sign));
        }

        let perm = Permutation::rank_compress(
            &groups.iter().map(|g| g.0.min(g.1)).collect::<Vec<_>>(),
        );
        let merged: Vec<f64> = groups.iter().map(|g| g.2).collect();
        let sum = merged.iter().sum();
        let weights = SimplexWeights(rescale(merged, sum));
        let signs = groups.iter().map(|g| g.3).collect();
        Shuffle::new(perm, weights, signs).expect("canonical form of a valid shuffle")
    }

    /// True when both canonical forms have the same permutation and signs and
    /// weights agreeing within `tol`.
    pub fn approx_eq(&self, other: &Shuffle, tol: f64) -> bool {
        let a = self.canonicalize();
        let b = other.canonicalize();
        a.perm == b.perm
            && a.signs == b.signs
            && a
                .weights
                .iter()
                .zip(b.weights.iter())
                .all(|(x, y)| (x - y).abs() <= tol)
    }

    /// `A_h(x, y) = λ([0, x] ∩ h⁻¹([0, y]))`, evaluated exactly segment by segment.
    pub fn copula_value(&self, x: f64, y: f64) -> Result<f64> {
        for v in [x, y] {
            if !(0.0..=1.0).contains(&v) {
                return Err(ShuffleError::OutsideUnitInterval(v));
            }
        }
        let mut total = 0.0;
        for k in 0..self.len() {
            let a = self.s[k];
            let b = self.s[k + 1].min(x);
            if b <= a {
                continue;
            }
            let img = self.perm.get(k);
            let len = match self.signs[k] {
                Sign::Plus => b.min(a + (y - self.t[img])) - a,
                Sign::Minus => b - a.max(a + (self.t[img + 1] - y)),
            };
            total += len.max(0.0);
        }
        Ok(total.clamp(0.0, x.min(y)))
    }

    pub fn to_json(&self) -> ShuffleJson {
        ShuffleJson {
            perm: self.perm.images(),
            weights: self.weights.to_vec(),
            signs: self.signs.iter().map(|e| e.as_i64()).collect(),
        }
    }

    pub fn from_json(json: &ShuffleJson) -> Result<Shuffle> {
        if json.perm.len() != json.weights.len() || json.perm.len() != json.signs.len() {
            return Err(ShuffleError::LengthMismatch {
                perm: json.perm.len(),
                weights: json.weights.len(),
                signs: json.signs.len(),
            });
        }
        let perm = Permutation::from_images(&json.perm)?;
        let weights = SimplexWeights::normalized(json.weights.clone(), INGEST_SUM_TOL)?;
        let signs = json
            .signs
            .iter()
            .map(|&v| Sign::from_i64(v))
            .collect::<Result<Vec<_>>>()?;
        Shuffle::new(perm, weights, signs)
    }

    /// Parses `{"perm":[…],"weights":[…],"signs":[…]}`.
    pub fn from_json_str(text: &str) -> Result<Shuffle> {
        let json: ShuffleJson =
            serde_json::from_str(text).map_err(|e| ShuffleError::Json(e.to_string()))?;
        Self::from_json(&json)
    }
}

/// Wire form of a shuffle; `perm` is one-based.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShuffleJson {
    pub perm: Vec<usize>,
    pub weights: Vec<f64>,
    pub signs: Vec<i64>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn figure2() -> Shuffle {
        Shuffle::from_parts(&[4, 2, 1, 3], vec![0.125, 0.375, 0.25, 0.25], &[1, -1, 1, 1]).unwrap()
    }

    #[test]
    fn construction_errors() {
        assert!(matches!(
            Shuffle::from_parts(&[1, 2], vec![1.0], &[1, 1]),
            Err(ShuffleError::LengthMismatch { .. })
        ));
        assert!(matches!(
            Shuffle::from_parts(&[1, 1], vec![0.5, 0.5], &[1, 1]),
            Err(ShuffleError::NotBijective { .. })
        ));
        assert!(matches!(
            Shuffle::from_parts(&[1, 3], vec![0.5, 0.5], &[1, 1]),
            Err(ShuffleError::NotBijective { .. })
        ));
        assert!(matches!(
            Shuffle::from_parts(&[1, 2], vec![0.5, 0.5 + 1e-9], &[1, 1]),
            Err(ShuffleError::WeightSum { .. })
        ));
        assert!(matches!(
            Shuffle::from_parts(&[1, 2], vec![1.5, -0.5], &[1, 1]),
            Err(ShuffleError::InvalidWeight { index: 1, .. })
        ));
        assert_eq!(
            Shuffle::from_parts(&[1, 2], vec![0.5, 0.5], &[1, 0]).unwrap_err(),
            ShuffleError::InvalidSign(0)
        );
        assert_eq!(Permutation::from_zero_based(vec![]), Err(ShuffleError::Empty));
    }

    #[test]
    fn zero_weight_segments_are_accepted() {
        let h = Shuffle::from_parts(&[2, 1, 3], vec![0.5, 0.0, 0.5], &[1, 1, -1]).unwrap();
        assert_eq!(h.len(), 3);
    }

    #[test]
    fn identity_and_reversal() {
        let id = Shuffle::identity();
        let w = Shuffle::reversal();
        assert_eq!(id.evaluate(0.37).unwrap(), 0.37);
        assert!((w.evaluate(0.37).unwrap() - 0.63).abs() < 1e-15);
        assert_eq!(w.evaluate(0.0).unwrap(), 1.0);
        assert_eq!(w.evaluate(1.0).unwrap(), 0.0);
    }

    #[test]
    fn figure2_breakpoints_and_values() {
        let h = figure2();
        assert_eq!(h.image_breakpoints(), &[0.0, 0.25, 0.625, 0.875, 1.0]);
        assert_eq!(h.evaluate(1.0 / 16.0).unwrap(), 15.0 / 16.0);
        assert_eq!(h.evaluate(0.25).unwrap(), 0.5);
        // right-continuous at s_1 = 1/8: segment 2 starts at t_2 = 5/8 and decreases
        assert_eq!(h.evaluate(0.125).unwrap(), 0.625);
        assert!(h.evaluate(1.5).is_err());
        assert!(h.evaluate(-0.1).is_err());
    }

    #[test]
    fn inverse_of_two_segment_straight_shuffle() {
        let h = Shuffle::from_parts(&[2, 1], vec![1.0 / 3.0, 2.0 / 3.0], &[1, 1]).unwrap();
        let inv = h.inverse();
        assert_eq!(inv.perm().images(), vec![2, 1]);
        assert!((inv.weights()[0] - 2.0 / 3.0).abs() < 1e-15);
        assert!((inv.weights()[1] - 1.0 / 3.0).abs() < 1e-15);
        assert!(Shuffle::identity().inverse().approx_eq(&Shuffle::identity(), 0.0));
        assert!(Shuffle::reversal().inverse().approx_eq(&Shuffle::reversal(), 0.0));
    }

    #[test]
    fn inverse_round_trip_on_figure2() {
        let h = figure2();
        let inv = h.inverse();
        for i in 0..1000 {
            let x = (i as f64 + 0.5) / 1000.0;
            let y = h.evaluate(x).unwrap();
            assert!((inv.evaluate(y).unwrap() - x).abs() < 1e-12, "x = {x}");
        }
    }

    #[test]
    fn flip_of_identity_is_reversal() {
        assert!(Shuffle::identity().flip().approx_eq(&Shuffle::reversal(), 0.0));
        let h = figure2();
        assert!(h.flip().flip().approx_eq(&h, 0.0));
        for i in 0..100 {
            let x = (i as f64 + 0.5) / 100.0;
            let lhs = h.flip().evaluate(x).unwrap();
            assert!((lhs - (1.0 - h.evaluate(x).unwrap())).abs() < 1e-15);
        }
    }

    #[test]
    fn ordinal_sum_edges() {
        let h = figure2();
        assert!(h.ordinal_sum_with_identity(0.0).unwrap().approx_eq(&h, 0.0));
        assert!(h
            .ordinal_sum_with_identity(1.0)
            .unwrap()
            .approx_eq(&Shuffle::identity(), 0.0));
        assert!(h.ordinal_sum_with_identity(1.5).is_err());

        let g = h.ordinal_sum_with_identity(0.5).unwrap();
        assert_eq!(g.len(), 5);
        assert_eq!(g.evaluate(0.25).unwrap(), 0.25);
        // x = 1/2 + 1/32 lies in the scaled first segment: 1/2 + (15/16)/2
        assert_eq!(g.evaluate(0.5 + 1.0 / 32.0).unwrap(), 0.5 + 15.0 / 32.0);
    }

    #[test]
    fn canonicalize_merges_split_segment() {
        let split = Shuffle::from_parts(
            &[5, 3, 1, 2, 4],
            vec![0.125, 0.375, 0.125, 0.125, 0.25],
            &[1, -1, 1, 1, 1],
        )
        .unwrap();
        let c = split.canonicalize();
        assert_eq!(c.perm().images(), vec![4, 2, 1, 3]);
        assert_eq!(c.weights().as_slice(), &[0.125, 0.375, 0.25, 0.25]);
        assert_eq!(c.signs(), figure2().signs());

        let id2 = Shuffle::from_parts(&[1, 2], vec![0.5, 0.5], &[1, 1]).unwrap();
        let c = id2.canonicalize();
        assert_eq!(c.len(), 1);
        assert_eq!(c.weights().as_slice(), &[1.0]);
    }

    #[test]
    fn canonicalize_merges_decreasing_runs_and_drops_zeros() {
        // two decreasing pieces stacked downwards form one reversal
        let w2 = Shuffle::from_parts(&[2, 1], vec![0.3, 0.7], &[-1, -1]).unwrap();
        assert!(w2.approx_eq(&Shuffle::reversal(), 1e-15));
        let z = Shuffle::from_parts(&[3, 1, 2], vec![0.4, 0.0, 0.6], &[1, -1, 1]).unwrap();
        let c = z.canonicalize();
        assert_eq!(c.perm().images(), vec![2, 1]);
        assert_eq!(c.signs(), &[Sign::Plus, Sign::Plus]);
        let c2 = c.canonicalize();
        assert_eq!(c.perm(), c2.perm());
        assert_eq!(c.weights(), c2.weights());
    }

    #[test]
    fn copula_values_of_extremes() {
        let m = Shuffle::identity();
        let w = Shuffle::reversal();
        for &(x, y) in &[(0.2, 0.7), (0.9, 0.3), (0.5, 0.5), (0.0, 1.0)] {
            assert!((m.copula_value(x, y).unwrap() - f64::min(x, y)).abs() < 1e-15);
            assert!((w.copula_value(x, y).unwrap() - f64::max(x + y - 1.0, 0.0)).abs() < 1e-15);
        }
        let h = figure2();
        for i in 0..=20 {
            let v = i as f64 / 20.0;
            assert!((h.copula_value(v, 1.0).unwrap() - v).abs() < 1e-12);
            assert!((h.copula_value(1.0, v).unwrap() - v).abs() < 1e-12);
        }
        assert!(h.copula_value(1.1, 0.5).is_err());
    }

    #[test]
    fn json_ingest_renormalizes() {
        let h = Shuffle::from_json_str(
            r#"{"perm":[4,2,1,3],"weights":[0.125,0.375,0.25,0.2500000001],"signs":[1,-1,1,1]}"#,
        )
        .unwrap();
        let sum: f64 = h.weights().iter().sum();
        assert!((sum - 1.0).abs() < 1e-15);
        assert!(Shuffle::from_json_str(r#"{"perm":[1],"weights":[1.0]}"#).is_err());
        assert!(matches!(
            Shuffle::from_json_str(r#"{"perm":[1,2],"weights":[0.5,0.6],"signs":[1,1]}"#),
            Err(ShuffleError::WeightSum { .. })
        ));
        let back = Shuffle::from_json(&figure2().to_json()).unwrap();
        assert!(back.approx_eq(&figure2(), 0.0));
    }

    #[test]
    fn region_point_bounds() {
        assert!(RegionPoint::new(1.0 + 1e-13, -1.0).is_ok());
        assert!(RegionPoint::new(1.0 + 1e-9, 0.0).is_err());
        assert!(RegionPoint::new(f64::NAN, 0.0).is_err());
    }
}
