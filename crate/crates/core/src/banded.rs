use nalgebra::{DMatrix, Scalar};
use num_traits::Zero;

/// Truncated symmetric band matrix of order `M`. Diagonal `d` stores the
/// entries `A(n, n+d)` for `n = 0..M-d`.
#[derive(Debug, Clone, PartialEq)]
pub struct BandedSymmetric<T> {
    order: usize,
    diagonals: Vec<Vec<T>>,
}

impl<T: Copy + Zero> BandedSymmetric<T> {
    pub fn zeros(order: usize, half_bandwidth: usize) -> Self {
        let diagonals = (0..=half_bandwidth)
            .map(|d| vec![T::zero(); order.saturating_sub(d)])
            .collect();
        Self { order, diagonals }
    }

    /// Builds from `diagonals[d][n] = A(n, n+d)`.
    ///
    /// Panics if a diagonal has the wrong length.
    pub fn from_diagonals(order: usize, diagonals: Vec<Vec<T>>) -> Self {
        assert!(!diagonals.is_empty(), "at least the main diagonal is required");
        for (d, diag) in diagonals.iter().enumerate() {
            assert_eq!(diag.len(), order.saturating_sub(d), "diagonal {d} has wrong length");
        }
        Self { order, diagonals }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Stored half-bandwidth `w`; entries with `|i-j| > w` are zero.
    pub fn half_bandwidth(&self) -> usize {
        self.diagonals.len() - 1
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
        assert!(hi < self.order, "index ({i}, {j}) out of range for order {}", self.order);
        self.diagonals
            .get(hi - lo)
            .map_or_else(T::zero, |diag| diag[lo])
    }

    /// Panics when `(i, j)` lies outside the stored band.
    pub fn set(&mut self, i: usize, j: usize, value: T) {
        let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
        assert!(hi < self.order);
        self.diagonals[hi - lo][lo] = value;
    }

    pub fn diagonal(&self, d: usize) -> &[T] {
        &self.diagonals[d]
    }

    pub fn map<U: Copy + Zero>(&self, f: impl Fn(T) -> U) -> BandedSymmetric<U> {
        BandedSymmetric {
            order: self.order,
            diagonals: self
                .diagonals
                .iter()
                .map(|diag| diag.iter().map(|&v| f(v)).collect())
                .collect(),
        }
    }

    /// Upper-triangle entries `(row, col, value)` within the band, row-major.
    pub fn upper_entries(&self) -> impl Iterator<Item = (usize, usize, T)> + '_ {
        let w = self.half_bandwidth();
        (0..self.order).flat_map(move |i| {
            (i..self.order.min(i + w + 1)).map(move |j| (i, j, self.diagonals[j - i][i]))
        })
    }
}

impl<T: Copy + Zero + PartialEq> BandedSymmetric<T> {
    /// Largest offset that holds a nonzero entry.
    pub fn effective_bandwidth(&self) -> usize {
        self.diagonals
            .iter()
            .rposition(|diag| diag.iter().any(|v| *v != T::zero()))
            .unwrap_or(0)
    }
}

impl<T: Copy + Zero + Scalar> BandedSymmetric<T> {
    pub fn to_dense(&self) -> DMatrix<T> {
        DMatrix::from_fn(self.order, self.order, |i, j| self.get(i, j))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_access_and_band_zeros() {
        let mut a = BandedSymmetric::<f64>::zeros(5, 2);
        a.set(1, 3, 7.0);
        a.set(2, 2, 1.5);
        assert_eq!(a.get(3, 1), 7.0);
        assert_eq!(a.get(1, 3), 7.0);
        assert_eq!(a.get(0, 4), 0.0);
        assert_eq!(a.half_bandwidth(), 2);
        assert_eq!(a.effective_bandwidth(), 2);
        let dense = a.to_dense();
        assert_eq!(dense, dense.transpose());
        assert_eq!(a.upper_entries().count(), 5 + 4 + 3);
    }

    #[test]
    fn effective_bandwidth_ignores_zero_diagonals() {
        let a = BandedSymmetric::from_diagonals(3, vec![vec![1.0; 3], vec![0.0; 2], vec![0.0]]);
        assert_eq!(a.half_bandwidth(), 2);
        assert_eq!(a.effective_bandwidth(), 0);
    }
}
