//! Pivoted LU factorization of small dense complex matrices.

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;

/// Pivots below this magnitude are treated as exact zeros.
pub const PIVOT_FLOOR: f64 = 1e-300;

/// Determinant in factored form `phase * exp(log_abs)`, `|phase| = 1`.
/// A singular matrix has `phase = 0` and `log_abs = -inf`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogDet {
    pub phase: Complex64,
    pub log_abs: f64,
}

impl LogDet {
    pub fn one() -> Self {
        Self {
            phase: Complex64::new(1.0, 0.0),
            log_abs: 0.0,
        }
    }

    pub fn zero() -> Self {
        Self {
            phase: Complex64::new(0.0, 0.0),
            log_abs: f64::NEG_INFINITY,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.phase == Complex64::new(0.0, 0.0)
    }

    /// Sign of the real part of the phase, for determinants known to be real.
    pub fn sign(&self) -> i8 {
        if self.phase.re > 0.0 {
            1
        } else if self.phase.re < 0.0 {
            -1
        } else {
            0
        }
    }

    pub fn value(&self) -> Complex64 {
        self.phase * self.log_abs.exp()
    }

    fn push_factor(&mut self, factor: Complex64) {
        let norm = factor.norm();
        if norm == 0.0 {
            *self = LogDet::zero();
        } else if !self.is_zero() {
            let phase = self.phase * (factor / norm);
            self.phase = phase / phase.norm();
            self.log_abs += norm.ln();
        }
    }
}

/// `P A = L U` with unit lower `L`, row pivoting by largest magnitude.
#[derive(Debug, Clone)]
pub struct Lu {
    lu: CMatrix,
    perm: Vec<usize>,
    odd: bool,
    singular_at: Option<usize>,
}

impl Lu {
    pub fn new(mut a: CMatrix) -> Self {
        let n = a.nrows();
        assert_eq!(n, a.ncols(), "LU needs a square matrix");
        let mut perm: Vec<usize> = (0..n).collect();
        let mut odd = false;
        let mut singular_at = None;
        for k in 0..n {
            let (pivot_row, pivot_norm) = (k..n)
                .map(|i| (i, a[(i, k)].norm()))
                .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if pivot_norm < PIVOT_FLOOR {
                singular_at.get_or_insert(k);
                continue;
            }
            if pivot_row != k {
                a.swap_rows(pivot_row, k);
                perm.swap(pivot_row, k);
                odd = !odd;
            }
            let pivot = a[(k, k)];
            for i in k + 1..n {
                let factor = a[(i, k)] / pivot;
                a[(i, k)] = factor;
                if factor != Complex64::new(0.0, 0.0) {
                    for j in k + 1..n {
                        let u = a[(k, j)];
                        a[(i, j)] -= factor * u;
                    }
                }
            }
        }
        Self {
            lu: a,
            perm,
            odd,
            singular_at,
        }
    }

    pub fn dim(&self) -> usize {
        self.lu.nrows()
    }

    /// First column whose pivot fell below [`PIVOT_FLOOR`].
    pub fn singular_at(&self) -> Option<usize> {
        self.singular_at
    }

    pub fn log_det(&self) -> LogDet {
        if self.singular_at.is_some() {
            return LogDet::zero();
        }
        let mut det = LogDet::one();
        if self.odd {
            det.phase = -det.phase;
        }
        for k in 0..self.dim() {
            det.push_factor(self.lu[(k, k)]);
        }
        det
    }

    /// Solves `A X = B` in place. Returns `None` for a singular factorization.
    pub fn solve(&self, b: &CMatrix) -> Option<CMatrix> {
        if self.singular_at.is_some() {
            return None;
        }
        let n = self.dim();
        let mut x = CMatrix::from_fn(n, b.ncols(), |i, j| b[(self.perm[i], j)]);
        for col in 0..x.ncols() {
            for i in 0..n {
                let mut acc = x[(i, col)];
                for k in 0..i {
                    acc -= self.lu[(i, k)] * x[(k, col)];
                }
                x[(i, col)] = acc;
            }
            for i in (0..n).rev() {
                let mut acc = x[(i, col)];
                for k in i + 1..n {
                    acc -= self.lu[(i, k)] * x[(k, col)];
                }
                x[(i, col)] = acc / self.lu[(i, i)];
            }
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<CMatrix> {
        self.solve(&CMatrix::identity(self.dim(), self.dim()))
    }
}

impl std::ops::Mul for LogDet {
    type Output = LogDet;

    fn mul(self, other: LogDet) -> LogDet {
        if self.is_zero() || other.is_zero() {
            return LogDet::zero();
        }
        let phase = self.phase * other.phase;
        LogDet {
            phase: phase / phase.norm(),
            log_abs: self.log_abs + other.log_abs,
        }
    }
}

/// `(A + Aᵀ)/2`; restores exact complex symmetry lost to pivoting.
pub fn symmetric_part(a: &CMatrix) -> CMatrix {
    (a + a.transpose()) * Complex64::new(0.5, 0.0)
}

/// Largest entry magnitude.
pub fn max_norm(a: &CMatrix) -> f64 {
    a.iter().fold(0.0, |m, v| m.max(v.norm()))
}

/// Induced 1-norm (largest absolute column sum).
pub fn one_norm(a: &CMatrix) -> f64 {
    a.column_iter()
        .map(|c| c.iter().map(|v| v.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn inverse_and_determinant_of_small_matrix() {
        let a = CMatrix::from_row_slice(
            3,
            3,
            &[c(0.0, 1.0), c(2.0, 0.0), c(1.0, 0.0), c(3.0, 0.0), c(1.0, -1.0), c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(4.0, 2.0)],
        );
        let lu = Lu::new(a.clone());
        let inv = lu.inverse().unwrap();
        let id = &a * &inv;
        assert!(max_norm(&(id - CMatrix::identity(3, 3))) < 1e-14);
        let det = a.clone().determinant();
        assert!((lu.log_det().value() - det).norm() < 1e-12 * det.norm());
    }

    #[test]
    fn singular_matrix_is_reported() {
        let a = CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(2.0, 0.0), c(2.0, 0.0), c(4.0, 0.0)]);
        let lu = Lu::new(a);
        assert_eq!(lu.singular_at(), Some(1));
        assert!(lu.inverse().is_none());
        assert_eq!(lu.log_det().sign(), 0);
    }

    #[test]
    fn real_determinant_sign() {
        let a = CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(Lu::new(a).log_det().sign(), -1);
        let b = CMatrix::from_row_slice(2, 2, &[c(-2.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-3.0, 0.0)]);
        let det = Lu::new(b).log_det();
        assert_eq!(det.sign(), 1);
        assert!((det.log_abs - 6f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn huge_determinants_do_not_overflow() {
        let a = CMatrix::from_diagonal_element(400, 400, c(1e300, 0.0));
        let det = Lu::new(a).log_det();
        assert_eq!(det.sign(), 1);
        assert!((det.log_abs / (400.0 * 1e300f64.ln()) - 1.0).abs() < 1e-12);
    }
}
