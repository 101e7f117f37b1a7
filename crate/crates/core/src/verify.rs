//! Numerical and combinatorial checks of the lemmas behind the region.
//!
//! Each check returns a [`VerificationReport`] holding the worst margin seen
//! (negative means violated) and a JSON witness that reproduces it. Random
//! instances are drawn from a ChaCha8 stream keyed by `(seed, index)`, and
//! reductions pick the smallest `(margin, index)`, so reports do not depend
//! on thread scheduling.

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::concordance::{linear_coefficients, perturbation_coeffs_with, InversionData};
use crate::region::theta;
use crate::shuffle::{Permutation, Shuffle, Sign, SimplexWeights};

/// Upper bound on `Σₙ n! · #lattice(n)` for the main-inequality sweep.
pub const MAIN_INEQUALITY_BUDGET: u64 = 500_000_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VerifyError {
    #[error("{work} margin evaluations exceed the budget of {MAIN_INEQUALITY_BUDGET}")]
    Budget { work: u64 },
    #[error("invalid parameter: {0}")]
    Parameter(String),
}

pub type Result<T, E = VerifyError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub check_name: String,
    pub instances_tested: u64,
    pub worst_margin: f64,
    pub worst_witness: Value,
    pub passed: bool,
    pub tolerance: f64,
    /// Instances drawn but not applicable to the check.
    pub skipped: u64,
    /// Instances worth a look that do not fail the check.
    pub flagged: u64,
}

impl VerificationReport {
    fn new(name: &str, tolerance: f64) -> Self {
        Self {
            check_name: name.to_string(),
            instances_tested: 0,
            worst_margin: f64::INFINITY,
            worst_witness: Value::Null,
            passed: true,
            tolerance,
            skipped: 0,
            flagged: 0,
        }
    }

    fn settle(mut self) -> Self {
        self.passed &= self.worst_margin >= -self.tolerance;
        self
    }

    /// One JSON object on one line; floats keep full precision.
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

// Smallest (margin, index) wins; associative and commutative.
#[derive(Debug, Clone, Copy)]
struct Worst {
    margin: f64,
    index: usize,
}

impl Worst {
    const NONE: Worst = Worst {
        margin: f64::INFINITY,
        index: usize::MAX,
    };

    fn min(self, other: Worst) -> Worst {
        match self.margin.total_cmp(&other.margin) {
            std::cmp::Ordering::Less => self,
            std::cmp::Ordering::Greater => other,
            std::cmp::Ordering::Equal => {
                if self.index <= other.index {
                    self
                } else {
                    other
                }
            }
        }
    }
}

/// Uniform point of the open simplex via normalized exponentials.
pub fn random_simplex<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    let e: Vec<f64> = (0..n)
        .map(|_| (-(1.0 - rng.gen::<f64>()).ln()).max(f64::MIN_POSITIVE))
        .collect();
    let total: f64 = e.iter().sum();
    e.into_iter().map(|x| x / total).collect()
}

/// Uniform permutation of `0..n` by Fisher–Yates.
pub fn random_permutation<R: Rng>(rng: &mut R, n: usize) -> Permutation {
    let mut v: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        v.swap(i, rng.gen_range(0..=i));
    }
    Permutation::from_zero_based(v).expect("shuffled range is a permutation")
}

/// Random shuffle with `1..=n_max` segments and independent fair signs.
pub fn random_shuffle<R: Rng>(rng: &mut R, n_max: usize) -> Shuffle {
    let n = rng.gen_range(1..=n_max.max(1));
    let perm = random_permutation(rng, n);
    let weights = SimplexWeights::normalized(random_simplex(rng, n), 1e-9).expect("simplex point");
    let signs = (0..n)
        .map(|_| if rng.gen_bool(0.5) { Sign::Plus } else { Sign::Minus })
        .collect();
    Shuffle::new(perm, weights, signs).expect("random shuffle is valid")
}

/// Generator for instance `index` of a seeded run.
pub fn instance_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

/// All compositions of `steps` into `n` non-negative parts, in lexicographic order.
pub fn simplex_lattice(n: usize, steps: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() + 1 == n {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for k in 0..=left {
            cur.push(k);
            rec(n, left - k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        rec(n, steps, &mut Vec::with_capacity(n), &mut out);
    }
    out
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// `b_π(u) - ϑ(a_π(u))`.
pub fn main_margin(data: &InversionData, u: &[f64]) -> (f64, f64, f64) {
    let (a, b) = data.ab(u);
    let th = theta(a.clamp(0.0, 0.5)).expect("a in [0, 1/2]");
    (b - th, a, b)
}

/// Whether a lattice point is a prototype once empty segments are dropped and
/// segments continuing each other are merged: a decreasing permutation whose
/// weights, as a multiset, are `(r, …, r, w)` with `w ≤ r`. The order of the
/// weights is irrelevant because `a` and `b` are symmetric for decreasing `π`.
pub fn is_prototype_point(perm: &Permutation, parts: &[usize]) -> bool {
    let kept: Vec<usize> = (0..parts.len()).filter(|&i| parts[i] > 0).collect();
    let ranks = Permutation::rank_compress(&kept.iter().map(|&i| perm.get(i)).collect::<Vec<_>>());
    let mut blocks: Vec<(usize, usize)> = Vec::new();
    for (pos, &i) in kept.iter().enumerate() {
        let img = ranks.get(pos);
        match blocks.last_mut() {
            Some(last) if img == last.0 + 1 => *last = (img, last.1 + parts[i]),
            _ => blocks.push((img, parts[i])),
        }
    }
    if blocks.is_empty() || blocks.windows(2).any(|w| w[0].0 < w[1].0) {
        return false;
    }
    let mut w: Vec<usize> = blocks.iter().map(|b| b.1).collect();
    w.sort_unstable_by(|a, b| b.cmp(a));
    w[..w.len() - 1].iter().all(|&x| x == w[0])
}

/// Main inequality `b_π(u) ≥ ϑ(a_π(u))` over every permutation of length
/// at most `n_max` and every point of the simplex lattice with step `1/grid_steps`.
pub fn check_main_inequality(n_max: usize, grid_steps: usize) -> Result<VerificationReport> {
    if !(2..=7).contains(&n_max) || grid_steps < 2 {
        return Err(VerifyError::Parameter(format!(
            "need 2 ≤ n_max ≤ 7 and grid_steps ≥ 2, got {n_max} and {grid_steps}"
        )));
    }
    let work: u64 = (1..=n_max as u64)
        .map(|n| (1..=n).product::<u64>() * binomial(grid_steps as u64 + n - 1, n - 1))
        .sum();
    if work > MAIN_INEQUALITY_BUDGET {
        return Err(VerifyError::Budget { work });
    }

    const EQUALITY_TOL: f64 = 1e-12;
    let mut report = VerificationReport::new("main_inequality", 1e-10);
    let mut prototype_worst = 0.0f64;
    let mut worst_overall: Option<(f64, Value)> = None;

    for n in 1..=n_max {
        let lattice = simplex_lattice(n, grid_steps);
        let points: Vec<Vec<f64>> = lattice
            .iter()
            .map(|p| p.iter().map(|&k| k as f64 / grid_steps as f64).collect())
            .collect();
        let perms: Vec<Vec<usize>> = (0..n).permutations(n).collect();

        // (worst, prototype max |margin|, flagged)
        let (worst, proto, flagged) = perms
            .par_iter()
            .enumerate()
            .map(|(pi, images)| {
                let perm = Permutation::from_zero_based(images.clone()).expect("permutation");
                let data = InversionData::new(&perm);
                let mut worst = Worst::NONE;
                let mut proto = 0.0f64;
                let mut flagged = 0u64;
                for (li, u) in points.iter().enumerate() {
                    let (m, a, b) = main_margin(&data, u);
                    worst = worst.min(Worst {
                        margin: m,
                        index: pi * points.len() + li,
                    });
                    if is_prototype_point(&perm, &lattice[li]) {
                        proto = proto.max(m.abs());
                    } else if m.abs() <= EQUALITY_TOL && !(a == 0.0 && b == 0.0) {
                        flagged += 1;
                    }
                }
                (worst, proto, flagged)
            })
            .reduce(
                || (Worst::NONE, 0.0, 0),
                |x, y| (x.0.min(y.0), x.1.max(y.1), x.2 + y.2),
            );

        report.instances_tested += (perms.len() * points.len()) as u64;
        report.flagged += flagged;
        prototype_worst = prototype_worst.max(proto);

        let pi = worst.index / points.len();
        let li = worst.index % points.len();
        let perm = Permutation::from_zero_based(perms[pi].clone()).expect("permutation");
        let (m, a, b) = main_margin(&InversionData::new(&perm), &points[li]);
        if worst_overall.as_ref().map_or(true, |(w, _)| m < *w) {
            worst_overall = Some((
                m,
                json!({
                    "perm": perm.images(),
                    "weights": points[li],
                    "a": a,
                    "b": b,
                    "theta": theta(a.clamp(0.0, 0.5)).expect("a in range"),
                }),
            ));
        }
    }

    let (m, witness) = worst_overall.expect("n_max ≥ 2");
    report.worst_margin = m;
    report.worst_witness = witness;
    report.worst_witness["prototype_max_abs_margin"] = json!(prototype_worst);
    report.passed = prototype_worst <= EQUALITY_TOL;
    Ok(report.settle())
}

fn e2(u: &[f64]) -> f64 {
    let s: f64 = u.iter().sum();
    let q: f64 = u.iter().map(|x| x * x).sum();
    0.5 * (s * s - q)
}

fn e3(u: &[f64]) -> f64 {
    let mut acc = 0.0;
    for i in 0..u.len() {
        for j in i + 1..u.len() {
            for k in j + 1..u.len() {
                acc += u[i] * u[j] * u[k];
            }
        }
    }
    acc
}

// Orthonormal basis of {x : Σx = 0} in ℝᵏ.
fn helmert(k: usize) -> Vec<Vec<f64>> {
    (1..k)
        .map(|j| {
            let norm = ((j * (j + 1)) as f64).sqrt();
            (0..k)
                .map(|i| match i.cmp(&j) {
                    std::cmp::Ordering::Less => 1.0 / norm,
                    std::cmp::Ordering::Equal => -(j as f64) / norm,
                    std::cmp::Ordering::Greater => 0.0,
                })
                .collect()
        })
        .collect()
}

// Point on the sphere {Σu = 1, Σu² = 1 - 2c₂} inside the k-dimensional
// support, parametrized by hyperspherical angles.
fn sphere_point(k: usize, radius: f64, basis: &[Vec<f64>], angles: &[f64]) -> Vec<f64> {
    let mut dir = vec![0.0; k.saturating_sub(1)];
    match k {
        2 => dir[0] = if angles[0] < 0.0 { -1.0 } else { 1.0 },
        3 => {
            dir[0] = angles[0].cos();
            dir[1] = angles[0].sin();
        }
        4 => {
            dir[0] = angles[0].sin() * angles[1].cos();
            dir[1] = angles[0].sin() * angles[1].sin();
            dir[2] = angles[0].cos();
        }
        _ => {}
    }
    let mut u = vec![1.0 / k as f64; k];
    for (d, e) in dir.iter().zip(basis) {
        for i in 0..k {
            u[i] += radius * d * e[i];
        }
    }
    u
}

fn penalized_e3(u: &[f64]) -> f64 {
    if u.iter().any(|&x| x < 0.0) {
        f64::INFINITY
    } else {
        e3(u)
    }
}

// Minimum of e₃ on {u ∈ Δₖ : e₂(u) = c₂} with all k coordinates in play.
fn minimize_on_support(k: usize, c2: f64) -> Option<(f64, Vec<f64>)> {
    let r2 = 1.0 - 2.0 * c2 - 1.0 / k as f64;
    if r2 < -1e-15 {
        return None;
    }
    let radius = r2.max(0.0).sqrt();
    let basis = helmert(k);
    let eval = |angles: &[f64]| {
        let u = sphere_point(k, radius, &basis, angles);
        (penalized_e3(&u), u)
    };
    match k {
        1 => (c2.abs() <= 1e-15).then(|| (0.0, vec![1.0])),
        2 => [-1.0, 1.0]
            .iter()
            .map(|&s| eval(&[s]))
            .filter(|(v, _)| v.is_finite())
            .min_by(|x, y| x.0.total_cmp(&y.0)),
        3 | 4 => {
            let dims = k - 2;
            let grid: Vec<Vec<f64>> = if dims == 1 {
                (0..3600)
                    .map(|i| vec![std::f64::consts::TAU * i as f64 / 3600.0])
                    .collect()
            } else {
                (0..=180)
                    .flat_map(|i| {
                        (0..360).map(move |j| {
                            vec![
                                std::f64::consts::PI * i as f64 / 180.0,
                                std::f64::consts::TAU * j as f64 / 360.0,
                            ]
                        })
                    })
                    .collect()
            };
            let mut seeds: Vec<(f64, Vec<f64>)> = grid
                .into_iter()
                .map(|a| (eval(&a).0, a))
                .filter(|(v, _)| v.is_finite())
                .collect();
            seeds.sort_by(|x, y| x.0.total_cmp(&y.0));
            seeds.truncate(10);
            seeds
                .into_iter()
                .map(|(_, start)| compass_search(&eval, start))
                .min_by(|x, y| x.0.total_cmp(&y.0))
        }
        _ => None,
    }
}

fn compass_search<F>(eval: &F, mut x: Vec<f64>) -> (f64, Vec<f64>)
where
    F: Fn(&[f64]) -> (f64, Vec<f64>),
{
    let (mut best, mut u) = eval(&x);
    let mut step = 0.02;
    while step > 1e-13 {
        let mut improved = false;
        for d in 0..x.len() {
            for sgn in [1.0, -1.0] {
                let mut y = x.clone();
                y[d] += sgn * step;
                let (v, w) = eval(&y);
                if v < best {
                    best = v;
                    u = w;
                    x = y;
                    improved = true;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    (best, u)
}

/// Shape deviation from `u₁ = ⋯ = u_{m-1} ≥ u_m > 0 = u_{m+1} = ⋯` after
/// sorting in decreasing order.
pub fn minimizer_shape_deviation(u: &[f64], tol: f64) -> f64 {
    let mut v = u.to_vec();
    v.sort_by(|a, b| b.total_cmp(a));
    let m = v.iter().filter(|&&x| x > tol).count();
    if m < 2 {
        return 0.0;
    }
    v[..m - 1]
        .iter()
        .map(|&x| (x - v[0]).abs())
        .fold(0.0, f64::max)
}

/// Minimizers of `b_π` on level sets of `a_π` for the decreasing permutation
/// of length `n ∈ {3, 4}`: shape and value `ϑ(c₂)`.
pub fn check_minimizer_structure(n: usize, levels: usize) -> Result<VerificationReport> {
    if !(3..=4).contains(&n) || levels < 1 {
        return Err(VerifyError::Parameter(format!(
            "need n ∈ {{3, 4}} and levels ≥ 1, got {n} and {levels}"
        )));
    }
    const SHAPE_TOL: f64 = 1e-6;
    let c_max = (1.0 - 1.0 / n as f64) / 2.0;
    let mut targets: Vec<f64> = (0..=levels).map(|j| c_max * j as f64 / levels as f64).collect();
    targets.extend([0.25, 1.0 / 3.0, 0.375].into_iter().filter(|&c| c <= c_max));

    let results: Vec<(f64, Value)> = targets
        .par_iter()
        .map(|&c2| {
            let mut best: Option<(f64, Vec<f64>)> = None;
            for k in 1..=n {
                if let Some((v, u)) = minimize_on_support(k, c2) {
                    if best.as_ref().map_or(true, |(b, _)| v < *b - 1e-12) {
                        let mut full = u;
                        full.resize(n, 0.0);
                        best = Some((v, full));
                    }
                }
            }
            let th = theta(c2).expect("c₂ in range");
            match best {
                None => (
                    -1.0,
                    json!({"n": n, "c2": c2, "error": "no feasible point found"}),
                ),
                Some((b, u)) => {
                    let shape = minimizer_shape_deviation(&u, SHAPE_TOL);
                    let level_gap = (e2(&u) - c2).abs();
                    let value_gap = (b - th).abs();
                    let margin = -shape.max(level_gap).max(value_gap);
                    (
                        margin,
                        json!({"n": n, "c2": c2, "u": u, "b": b, "theta": th, "shape_deviation": shape}),
                    )
                }
            }
        })
        .collect();

    let mut report = VerificationReport::new(&format!("minimizer_structure_n{n}"), SHAPE_TOL);
    report.instances_tested = results.len() as u64;
    for (m, w) in results {
        if m < report.worst_margin {
            report.worst_margin = m;
            report.worst_witness = w;
        }
    }
    Ok(report.settle())
}

fn sampled<F>(name: &str, tolerance: f64, samples: usize, seed: u64, f: F) -> VerificationReport
where
    F: Fn(&mut ChaCha8Rng) -> Option<(f64, u64, Value)> + Sync,
{
    let results: Vec<Option<(f64, u64)>> = (0..samples)
        .into_par_iter()
        .map(|i| f(&mut instance_rng(seed, i)).map(|(m, c, _)| (m, c)))
        .collect();
    let mut report = VerificationReport::new(name, tolerance);
    let mut worst = Worst::NONE;
    for (i, r) in results.iter().enumerate() {
        match r {
            None => report.skipped += 1,
            Some((m, count)) => {
                report.instances_tested += count;
                worst = worst.min(Worst {
                    margin: *m,
                    index: i,
                });
            }
        }
    }
    if worst.index != usize::MAX {
        let (m, _, w) = f(&mut instance_rng(seed, worst.index)).expect("replayed instance");
        report.worst_margin = m;
        report.worst_witness = w;
        report.worst_witness["instance"] = json!(worst.index);
        report.worst_witness["seed"] = json!(seed);
    } else {
        report.worst_margin = 0.0;
    }
    report.settle()
}

fn relative_gap(lhs: f64, rhs: f64) -> f64 {
    (lhs - rhs).abs() / 1f64.max(lhs.abs()).max(rhs.abs())
}

/// Perturbation expansions of `a_π` and `b_π` along zero-sum directions.
pub fn check_perturbation_identities(samples: usize, seed: u64) -> VerificationReport {
    sampled("perturbation_identities", 1e-12, samples, seed, |rng| {
        let n = rng.gen_range(2..=10);
        let perm = random_permutation(rng, n);
        let u = random_simplex(rng, n);
        let mut delta: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let mean = delta.iter().sum::<f64>() / n as f64;
        delta.iter_mut().for_each(|d| *d -= mean);
        let t: f64 = rng.gen_range(-1.0..=1.0);

        let data = InversionData::new(&perm);
        let coeffs = perturbation_coeffs_with(&data, &u, &delta);
        let moved: Vec<f64> = u.iter().zip(&delta).map(|(x, d)| x + t * d).collect();
        let (a0, b0) = data.ab(&u);
        let (a1, b1) = data.ab(&moved);
        let gap_a = relative_gap(a1 - a0, coeffs.a_difference(t));
        let gap_b = relative_gap(b1 - b0, coeffs.b_difference(t));
        Some((
            -gap_a.max(gap_b),
            1,
            json!({"perm": perm.images(), "u": u, "delta": delta, "t": t,
                   "gap_a": gap_a, "gap_b": gap_b}),
        ))
    })
}

/// `c_{p,r} + c_{q,r} ≥ c_{p,q} ≥ 0` for distinct `p, q, r` outside `Q_π`.
pub fn check_triangle_inequality(samples: usize, seed: u64) -> VerificationReport {
    sampled("triangle_inequality", 1e-14, samples, seed, |rng| {
        let n = rng.gen_range(3..=10);
        let perm = random_permutation(rng, n);
        let u = random_simplex(rng, n);
        Some(triangle_margin(&perm, &u))
    })
}

/// Worst triangle margin over all qualifying ordered triples, their count, and a witness.
pub fn triangle_margin(perm: &Permutation, u: &[f64]) -> (f64, u64, Value) {
    let n = perm.len();
    let data = InversionData::new(perm);
    let (_, _, c) = linear_coefficients(&data, u);
    let mut worst = (f64::INFINITY, [0usize; 3]);
    let mut count = 0u64;
    for p in 0..n {
        for q in 0..n {
            for r in 0..n {
                if p == q || q == r || p == r || data.contains_triple(p, q, r) {
                    continue;
                }
                count += 1;
                let m = (c[p][r] + c[q][r] - c[p][q]).min(c[p][q]);
                if m < worst.0 {
                    worst = (m, [p, q, r]);
                }
            }
        }
    }
    let margin = if count == 0 { 0.0 } else { worst.0 };
    let [p, q, r] = worst.1;
    (
        margin,
        count,
        json!({"perm": perm.images(), "u": u, "triple": [p + 1, q + 1, r + 1]}),
    )
}

/// Patterns used by the δ construction, zero-based positions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeltaPattern {
    /// `p < q < r` with `π(p) < π(q) < π(r)`.
    Increasing(usize, usize, usize),
    /// `p < q < r < s` with `π(q) > π(p) > π(s) > π(r)`.
    Crossing(usize, usize, usize, usize),
}

/// First pattern found by prefix minima and a single sweep per pair.
pub fn find_delta_pattern(perm: &Permutation) -> Option<DeltaPattern> {
    let p = perm.as_slice();
    let n = p.len();
    // increasing triple: q with a smaller image before and a larger after
    let mut min_before = vec![usize::MAX; n];
    for q in 1..n {
        let prev = min_before[q - 1];
        min_before[q] = if prev == usize::MAX || p[q - 1] < p[prev] {
            q - 1
        } else {
            prev
        };
    }
    for q in 1..n {
        let lo = min_before[q];
        if p[lo] >= p[q] {
            continue;
        }
        if let Some(r) = (q + 1..n).find(|&r| p[r] > p[q]) {
            return Some(DeltaPattern::Increasing(lo, q, r));
        }
    }
    for a in 0..n {
        for b in a + 1..n {
            if p[b] <= p[a] {
                continue;
            }
            let mut low: Option<usize> = None;
            for c in b + 1..n {
                if let Some(r) = low {
                    if p[r] < p[c] && p[c] < p[a] {
                        return Some(DeltaPattern::Crossing(a, b, r, c));
                    }
                }
                if p[c] < p[a] && low.map_or(true, |r| p[c] < p[r]) {
                    low = Some(c);
                }
            }
        }
    }
    None
}

/// Existence of either pattern by brute force over all triples and quadruples.
pub fn has_delta_pattern_naive(perm: &Permutation) -> bool {
    let p = perm.as_slice();
    let n = p.len();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                if p[a] < p[b] && p[b] < p[c] {
                    return true;
                }
                for d in c + 1..n {
                    if p[b] > p[a] && p[a] > p[d] && p[d] > p[c] {
                        return true;
                    }
                }
            }
        }
    }
    false
}

/// The direction of the proof: zero-sum, orthogonal to `a_vec`, and
/// supported on the pattern.
pub fn construct_delta(pattern: DeltaPattern, a_vec: &[f64]) -> Vec<f64> {
    let mut delta = vec![0.0; a_vec.len()];
    match pattern {
        DeltaPattern::Increasing(p, q, r) => {
            let mut d = [a_vec[r] - a_vec[q], a_vec[p] - a_vec[r], a_vec[q] - a_vec[p]];
            if d.iter().all(|&x| x == 0.0) {
                d = [1.0, -1.0, 0.0];
            }
            for (&i, x) in [p, q, r].iter().zip(d) {
                delta[i] = x;
            }
        }
        DeltaPattern::Crossing(p, q, r, s) => {
            // δ_p + δ_q = 0, δ_r + δ_s = 0, α₁ = 0
            let mut dp = a_vec[r] - a_vec[s];
            let mut dr = -(a_vec[p] - a_vec[q]);
            if dp == 0.0 && dr == 0.0 {
                dp = 1.0;
                dr = 0.0;
            }
            delta[p] = dp;
            delta[q] = -dp;
            delta[r] = dr;
            delta[s] = -dr;
        }
    }
    let scale = delta.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    delta.iter_mut().for_each(|x| *x /= scale);
    delta
}

/// `α₁ = α₂ = β₃ = 0` and `β₂ ≤ 0` for the constructed δ.
pub fn check_delta_construction(samples: usize, seed: u64) -> VerificationReport {
    sampled("delta_construction", 1e-12, samples, seed, |rng| {
        let n = rng.gen_range(3..=10);
        let perm = random_permutation(rng, n);
        let u = random_simplex(rng, n);
        let found = find_delta_pattern(&perm);
        if found.is_some() != has_delta_pattern_naive(&perm) {
            return Some((
                -1.0,
                1,
                json!({"perm": perm.images(), "error": "pattern scanners disagree"}),
            ));
        }
        let pattern = found?;
        let data = InversionData::new(&perm);
        let (a_vec, _, _) = linear_coefficients(&data, &u);
        let delta = construct_delta(pattern, &a_vec);
        let c = perturbation_coeffs_with(&data, &u, &delta);
        let sum: f64 = delta.iter().sum();
        let margin = -[c.alpha1.abs(), c.alpha2.abs(), c.beta3.abs(), c.beta2.max(0.0), sum.abs()]
            .into_iter()
            .fold(0.0, f64::max);
        Some((
            margin,
            1,
            json!({"perm": perm.images(), "u": u, "delta": delta, "pattern": format!("{pattern:?}"),
                   "alpha1": c.alpha1, "alpha2": c.alpha2, "beta2": c.beta2, "beta3": c.beta3}),
        ))
    })
}

/// No increasing triple and no `p<q<r<s` with `π(r) < π(s) < π(p) < π(q)`.
pub fn avoids_classification_patterns(perm: &Permutation) -> bool {
    let p = perm.as_slice();
    let n = p.len();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                if p[a] < p[b] && p[b] < p[c] {
                    return false;
                }
                for d in c + 1..n {
                    if p[c] < p[d] && p[d] < p[a] && p[a] < p[b] {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Pattern avoidance holds exactly when `π` or `π⁻¹` has at most one ascent.
pub fn check_almost_decreasing_classification(l_max: usize) -> Result<VerificationReport> {
    if !(1..=8).contains(&l_max) {
        return Err(VerifyError::Parameter(format!(
            "need 1 ≤ l_max ≤ 8, got {l_max}"
        )));
    }
    let mut report = VerificationReport::new("almost_decreasing_classification", 0.0);
    report.worst_margin = 0.0;
    for l in 1..=l_max {
        let perms: Vec<Vec<usize>> = (0..l).permutations(l).collect();
        let bad: Option<(usize, bool, bool)> = perms
            .par_iter()
            .enumerate()
            .filter_map(|(i, images)| {
                let perm = Permutation::from_zero_based(images.clone()).expect("permutation");
                let a = avoids_classification_patterns(&perm);
                let b = perm.is_almost_decreasing() || perm.inverse().is_almost_decreasing();
                (a != b).then_some((i, a, b))
            })
            .min_by_key(|x| x.0);
        report.instances_tested += perms.len() as u64;
        if let (Some((i, a, b)), true) = (bad, report.worst_margin == 0.0) {
            let perm = Permutation::from_zero_based(perms[i].clone()).expect("permutation");
            report.worst_margin = -1.0;
            report.worst_witness =
                json!({"perm": perm.images(), "avoids_patterns": a, "almost_decreasing": b});
        }
    }
    Ok(report.settle())
}

/// Random almost-decreasing permutation of length `n ≥ 3` with `π(1) ≠ n`
/// and `π(n) ≠ 1`: a decreasing run ending in 1 followed by one starting at n.
pub fn random_swap_permutation<R: Rng>(rng: &mut R, n: usize) -> Permutation {
    let mut first: Vec<usize> = Vec::new();
    let mut second: Vec<usize> = vec![n - 1];
    for v in (1..n - 1).rev() {
        if rng.gen_bool(0.5) {
            first.push(v);
        } else {
            second.push(v);
        }
    }
    first.push(0);
    first.extend(second);
    Permutation::from_zero_based(first).expect("two runs cover 0..n")
}

/// Swapping the ascent `1, n` raises `a` by `u_k u_{k+1}` and lowers `b` by
/// `u_k u_{k+1} Σ_{i ∉ {k, k+1}} uᵢ`.
pub fn check_swap_descent(samples: usize, seed: u64) -> VerificationReport {
    sampled("swap_descent", 1e-14, samples, seed, |rng| {
        let n = rng.gen_range(3..=10);
        let perm = random_swap_permutation(rng, n);
        let u = random_simplex(rng, n);
        Some(swap_margin(&perm, &u))
    })
}

pub fn swap_margin(perm: &Permutation, u: &[f64]) -> (f64, u64, Value) {
    let n = perm.len();
    let k = perm.inverse().get(0);
    let structural = k + 1 < n && perm.get(k + 1) == n - 1;
    if !structural {
        return (
            -1.0,
            1,
            json!({"perm": perm.images(), "error": "image after 1 is not n"}),
        );
    }
    let mut images = perm.as_slice().to_vec();
    images.swap(k, k + 1);
    let swapped = Permutation::from_zero_based(images).expect("swap keeps a permutation");
    let mut v = u.to_vec();
    v.swap(k, k + 1);

    let data = InversionData::new(perm);
    let data2 = InversionData::new(&swapped);
    let (m0, a0, b0) = main_margin(&data, u);
    let (m1, a1, b1) = main_margin(&data2, &v);
    let prod = u[k] * u[k + 1];
    let rest: f64 = (0..n).filter(|&i| i != k && i != k + 1).map(|i| u[i]).sum();
    let gap_a = (a1 - a0 - prod).abs();
    let gap_b = (b1 - b0 + prod * rest).abs();
    let mut margin = -gap_a.max(gap_b);
    if m1 >= m0 {
        margin = margin.min(-1.0);
    }
    (
        margin,
        1,
        json!({"perm": perm.images(), "u": u, "k": k + 1, "gap_a": gap_a, "gap_b": gap_b,
               "margin_before": m0, "margin_after": m1}),
    )
}

/// Which checks to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    All,
    MainInequality,
    Minimizer,
    Perturbation,
    Triangle,
    Delta,
    Classification,
    Swap,
}

impl std::str::FromStr for Suite {
    type Err = VerifyError;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "all" => Suite::All,
            "main" | "main-inequality" => Suite::MainInequality,
            "minimizer" => Suite::Minimizer,
            "perturbation" => Suite::Perturbation,
            "triangle" => Suite::Triangle,
            "delta" => Suite::Delta,
            "classification" => Suite::Classification,
            "swap" => Suite::Swap,
            other => return Err(VerifyError::Parameter(format!("unknown suite `{other}`"))),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteConfig {
    pub n_max: usize,
    pub grid_steps: usize,
    pub samples: usize,
    pub seed: u64,
    pub levels: usize,
    pub l_max: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            n_max: 6,
            grid_steps: 10,
            samples: 1000,
            seed: 0,
            levels: 24,
            l_max: 7,
        }
    }
}

pub fn run_suite(suite: Suite, cfg: &SuiteConfig) -> Result<Vec<VerificationReport>> {
    let wants = |s: Suite| suite == Suite::All || suite == s;
    let mut out = Vec::new();
    if wants(Suite::MainInequality) {
        out.push(check_main_inequality(cfg.n_max, cfg.grid_steps)?);
    }
    if wants(Suite::Minimizer) {
        out.push(check_minimizer_structure(3, cfg.levels)?);
        out.push(check_minimizer_structure(4, cfg.levels)?);
    }
    if wants(Suite::Perturbation) {
        out.push(check_perturbation_identities(cfg.samples, cfg.seed));
    }
    if wants(Suite::Triangle) {
        out.push(check_triangle_inequality(cfg.samples, cfg.seed));
    }
    if wants(Suite::Delta) {
        out.push(check_delta_construction(cfg.samples, cfg.seed));
    }
    if wants(Suite::Classification) {
        out.push(check_almost_decreasing_classification(cfg.l_max)?);
    }
    if wants(Suite::Swap) {
        out.push(check_swap_descent(cfg.samples, cfg.seed));
    }
    Ok(out)
}
