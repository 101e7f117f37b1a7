#![allow(dead_code)]

use taurho::Shuffle;

/// Histogram of `h` on the midpoint grid of `points` cells, in `bins` equal bins.
pub fn image_histogram(h: &Shuffle, points: usize, bins: usize) -> Vec<usize> {
    let mut counts = vec![0usize; bins];
    for i in 0..points {
        let y = h.evaluate((i as f64 + 0.5) / points as f64).unwrap();
        counts[((y * bins as f64) as usize).min(bins - 1)] += 1;
    }
    counts
}

pub fn is_uniform(h: &Shuffle, points: usize, bins: usize, slack: usize) -> bool {
    let expected = points / bins;
    image_histogram(h, points, bins)
        .iter()
        .all(|&c| c.abs_diff(expected) <= slack)
}
