//! Condensed (upper-triangular) storage shared by distance and time matrices.

/// Position of pair `(i, j)` with `i < j` in row-major upper-triangular order.
#[inline]
pub fn condensed_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

/// Number of unordered pairs among `n` items.
#[inline]
pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Iterate `(i, j)` with `i < j` in condensed order.
pub fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
}

/// A labelled symmetric matrix with a zero diagonal.
pub trait Pairwise {
    fn labels(&self) -> &[String];

    /// Upper-triangular entries in condensed order.
    fn entries(&self) -> &[f64];

    fn len(&self) -> usize {
        self.labels().len()
    }

    fn is_empty(&self) -> bool {
        self.labels().is_empty()
    }

    fn get(&self, i: usize, j: usize) -> f64 {
        use std::cmp::Ordering::*;
        match i.cmp(&j) {
            Equal => 0.0,
            Less => self.entries()[condensed_index(self.len(), i, j)],
            Greater => self.entries()[condensed_index(self.len(), j, i)],
        }
    }

    fn label_index(&self, label: &str) -> Option<usize> {
        self.labels().iter().position(|l| l == label)
    }
}
