use std::ops::AddAssign;

/// Binary indexed tree over `len` slots supporting point updates and prefix sums.
pub(crate) struct Fenwick<T> {
    tree: Vec<T>,
}

impl<T: Copy + Default + AddAssign> Fenwick<T> {
    pub fn new(len: usize) -> Self {
        Self {
            tree: vec![T::default(); len + 1],
        }
    }

    pub fn add(&mut self, slot: usize, value: T) {
        let mut i = slot + 1;
        while i < self.tree.len() {
            self.tree[i] += value;
            i += i & i.wrapping_neg();
        }
    }

    /// Sum over slots `0..end`.
    pub fn prefix(&self, end: usize) -> T {
        let mut acc = T::default();
        let mut i = end;
        while i > 0 {
            acc += self.tree[i];
            i -= i & i.wrapping_neg();
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prefix_sums_match_naive() {
        let values = [3u64, 1, 4, 1, 5, 9, 2, 6];
        let mut f = Fenwick::new(values.len());
        for (i, &v) in values.iter().enumerate() {
            f.add(i, v);
        }
        for end in 0..=values.len() {
            assert_eq!(f.prefix(end), values[..end].iter().sum::<u64>());
        }
    }
}
