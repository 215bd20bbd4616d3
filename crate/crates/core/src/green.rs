//! Green's matrix of a block-Jacobi operator from a backward-evaluated
//! matrix continued fraction.
//!
//! The infinite remainder of `J(z) G(z) = 1` below block row `N` is folded
//! into the tail
//!
//! ```text
//! C_j = (D_j - E_j C_{j+1} E_jᵀ)^{-1},   C_{K+1} = 0,
//! ```
//!
//! and the leading `(N+1)m` corner of `G` is the inverse of `J^(N)` with its
//! last diagonal block replaced by `D_N - E_N C_{N+1} E_Nᵀ`.

use num_complex::Complex64;

use crate::blocks::{BandSource, BlockTridiagonal};
use crate::dense::{max_norm, one_norm, symmetric_part, CMatrix, LogDet, Lu};
use crate::error::{Error, Result};

/// Default relative tolerance on the K-doubling change of `G^(N)`.
pub const DEFAULT_TOL: f64 = 1e-12;
/// Default cap on the tail depth.
pub const DEFAULT_K_MAX: usize = 1 << 20;
/// Reciprocal 1-norm condition number below which `z` counts as a pole.
pub const AT_POLE_RCOND: f64 = 1e-12;

/// First tail depth tried by [`green_matrix`].
pub fn initial_depth(n: usize) -> usize {
    (2 * n).max(64).max(n + 1)
}

/// The continued-fraction tail `C_{N+1}` together with `Π_{j=N+1}^{K} det(C_j^{-1})`.
#[derive(Debug, Clone)]
pub struct TailFraction {
    pub matrix: CMatrix,
    pub inverse_log_det: LogDet,
    pub depth: usize,
}

/// Backward evaluation of `C_{N+1}` starting from `C_{K+1} = 0`.
pub fn tail_cf<S: BandSource + ?Sized>(
    blocks: &BlockTridiagonal<'_, S>,
    z: Complex64,
    n: usize,
    k: usize,
) -> Result<TailFraction> {
    if k <= n {
        return Err(Error::InvalidArgument(format!(
            "tail depth K = {k} must exceed N = {n}"
        )));
    }
    let m = blocks.block_size();
    blocks.reserve_blocks(k + 1);
    let mut tail: Option<CMatrix> = None;
    let mut log_det = LogDet::one();
    for j in (n + 1..=k).rev() {
        let (d, e) = blocks.rows(j, z);
        let inner = match &tail {
            Some(c) => d - &e * c * e.transpose(),
            None => d,
        };
        let lu = Lu::new(inner);
        let inverse = lu.inverse().ok_or(Error::TailSingular { depth: j })?;
        log_det = log_det * lu.log_det();
        tail = Some(symmetric_part(&inverse));
    }
    Ok(TailFraction {
        matrix: tail.unwrap_or_else(|| CMatrix::zeros(m, m)),
        inverse_log_det: log_det,
        depth: k,
    })
}

/// `J^(N)` with the tail correction applied to its last diagonal block.
pub fn corrected_matrix<S: BandSource + ?Sized>(
    blocks: &BlockTridiagonal<'_, S>,
    z: Complex64,
    n: usize,
    tail: &CMatrix,
) -> CMatrix {
    let m = blocks.block_size();
    let mut a = blocks.dense(n + 1, z);
    let e = blocks.upper_block(n, z);
    let correction = &e * tail * e.transpose();
    let mut corner = a.view_mut((n * m, n * m), (m, m));
    corner -= correction;
    a
}

/// `G^(N)(z)`, the leading `(N+1) x (N+1)` block corner of `J(z)^{-1}`.
#[derive(Debug, Clone)]
pub struct GreenBlockMatrix {
    pub z: Complex64,
    pub blocks: usize,
    pub block_size: usize,
    pub values: CMatrix,
    /// Tail depth `K` of the accepted evaluation.
    pub depth: usize,
    /// Relative max-norm change over the last doubling of `K`.
    pub estimate: f64,
    /// Change recorded at every doubling, in order.
    pub history: Vec<f64>,
    /// `C_{N+1}` at the accepted depth.
    pub tail: CMatrix,
}

impl GreenBlockMatrix {
    /// Index of the last retained block row, `N`.
    pub fn last_block(&self) -> usize {
        self.blocks - 1
    }

    pub fn block(&self, p: usize, q: usize) -> CMatrix {
        let m = self.block_size;
        self.values.view((p * m, q * m), (m, m)).into_owned()
    }

    /// `max |G - Gᵀ| / max |G|`.
    pub fn asymmetry(&self) -> f64 {
        max_norm(&(&self.values - self.values.transpose())) / max_norm(&self.values)
    }

    /// Largest entry of `J_{n,n-1} G_{n-1,n'} + J_{n,n} G_{n,n'} + J_{n,n+1} G_{n+1,n'} - δ_{n,n'}`
    /// over the retained block rows, with the exterior block
    /// `G_{N+1,n'} = -C_{N+1} J_{N+1,N} G_{N,n'}` reconstructed from the tail.
    pub fn defect<S: BandSource + ?Sized>(&self, blocks: &BlockTridiagonal<'_, S>) -> f64 {
        let m = self.block_size;
        let n = self.last_block();
        let size = self.blocks * m;
        let e_last = blocks.upper_block(n, self.z);
        let last_rows = self.values.view((n * m, 0), (m, size)).into_owned();
        let exterior = -(&self.tail * e_last.transpose() * last_rows);
        let mut residual = blocks.dense(self.blocks, self.z) * &self.values;
        let mut bottom = residual.view_mut((n * m, 0), (m, size));
        bottom += &e_last * exterior;
        residual -= CMatrix::identity(size, size);
        max_norm(&residual)
    }
}

/// `G^(N)(z)` with the tail depth doubled from [`initial_depth`] until the
/// relative change drops below `tol`.
pub fn green_matrix<S: BandSource + ?Sized>(
    blocks: &BlockTridiagonal<'_, S>,
    z: Complex64,
    n: usize,
    tol: f64,
    k_max: usize,
) -> Result<GreenBlockMatrix> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    if k_max <= n {
        return Err(Error::InvalidArgument(format!(
            "tail cap K_max = {k_max} must exceed N = {n}"
        )));
    }
    let mut k = initial_depth(n).min(k_max);
    let mut previous: Option<CMatrix> = None;
    let mut history = Vec::new();
    let mut estimate = f64::INFINITY;
    loop {
        let tail = tail_cf(blocks, z, n, k)?;
        let values = invert_corrected(blocks, z, n, &tail.matrix)?;
        if let Some(prev) = previous.take() {
            estimate = max_norm(&(&values - prev)) / max_norm(&values);
            history.push(estimate);
            if estimate < tol {
                return Ok(GreenBlockMatrix {
                    z,
                    blocks: n + 1,
                    block_size: blocks.block_size(),
                    values,
                    depth: k,
                    estimate,
                    history,
                    tail: tail.matrix,
                });
            }
        }
        if 2 * k > k_max {
            return Err(Error::NonConvergence { depth: k, estimate });
        }
        previous = Some(values);
        k *= 2;
    }
}

fn invert_corrected<S: BandSource + ?Sized>(
    blocks: &BlockTridiagonal<'_, S>,
    z: Complex64,
    n: usize,
    tail: &CMatrix,
) -> Result<CMatrix> {
    let a = corrected_matrix(blocks, z, n, tail);
    let norm = one_norm(&a);
    let inverse = Lu::new(a).inverse().ok_or(Error::AtPole { z })?;
    if 1.0 / (norm * one_norm(&inverse)) < AT_POLE_RCOND {
        return Err(Error::AtPole { z });
    }
    Ok(symmetric_part(&inverse))
}

/// Determinant of the tail-corrected `J^(N)` and of the eliminated tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrectedDeterminant {
    /// `det((G^(N))^{-1})`; vanishes at the poles of `G^(N)`.
    pub corrected: LogDet,
    /// `Π_{j=N+1}^{K} det(C_j^{-1})`.
    pub tail: LogDet,
}

impl CorrectedDeterminant {
    /// `det J^(K)` of the whole truncated system. Unlike the corrected
    /// determinant it has no poles on the real axis, so its sign only
    /// changes at eigenvalues.
    pub fn full(&self) -> LogDet {
        self.corrected * self.tail
    }
}

/// `det` of the tail-corrected `J^(N)` at fixed depth `K`, in `(phase, log|det|)` form.
pub fn logdet_corrected<S: BandSource + ?Sized>(
    blocks: &BlockTridiagonal<'_, S>,
    z: Complex64,
    n: usize,
    k: usize,
) -> Result<CorrectedDeterminant> {
    let tail = tail_cf(blocks, z, n, k)?;
    let a = corrected_matrix(blocks, z, n, &tail.matrix);
    Ok(CorrectedDeterminant {
        corrected: Lu::new(a).log_det(),
        tail: tail.inverse_log_det,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blocks::{blockify, FnBand};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn decoupled_tail_is_first_inverse() {
        let src = FnBand::new(1, |z: Complex64, i, j| {
            if i == j {
                z - c(i as f64 + 1.0, 0.0)
            } else {
                c(0.0, 0.0)
            }
        });
        let blocks = blockify(&src, 1).unwrap();
        let z = c(0.25, 0.5);
        let tail = tail_cf(&blocks, z, 2, 40).unwrap();
        let want = (z - c(4.0, 0.0)).inv();
        assert!((tail.matrix[(0, 0)] - want).norm() < 1e-15);

        let g = green_matrix(&blocks, z, 3, 1e-12, 1 << 10).unwrap();
        for p in 0..4 {
            for q in 0..4 {
                let want = if p == q {
                    (z - c(p as f64 + 1.0, 0.0)).inv()
                } else {
                    c(0.0, 0.0)
                };
                assert!((g.values[(p, q)] - want).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn constant_scalar_fraction_converges_to_small_root() {
        // C = 1/(a - c² C); the backward iteration picks the root with |c² C| < a/2
        let (a, cc) = (3.0, 1.0);
        let src = FnBand::new(1, move |_z, i, j| if i == j { c(a, 0.0) } else { c(cc, 0.0) });
        let blocks = blockify(&src, 1).unwrap();
        let tail = tail_cf(&blocks, c(0.0, 0.0), 0, 200).unwrap();
        let small_root = (a - (a * a - 4.0 * cc * cc).sqrt()) / (2.0 * cc * cc);
        assert!((tail.matrix[(0, 0)].re - small_root).abs() < 1e-15);
        assert!((small_root - 0.3819660112501051).abs() < 1e-15);
    }

    #[test]
    fn rejects_shallow_tail() {
        let src = FnBand::new(1, |_z, _i, _j| c(1.0, 0.0));
        let blocks = blockify(&src, 1).unwrap();
        assert!(tail_cf(&blocks, c(0.0, 0.0), 5, 5).is_err());
    }

    #[test]
    fn singular_tail_reports_depth() {
        let src = FnBand::new(1, |_z, i, j| {
            if i == j && i == 7 {
                c(0.0, 0.0)
            } else if i == j {
                c(2.0, 0.0)
            } else {
                c(0.0, 0.0)
            }
        });
        let blocks = blockify(&src, 1).unwrap();
        assert_eq!(
            tail_cf(&blocks, c(0.0, 0.0), 0, 20).err(),
            Some(Error::TailSingular { depth: 7 })
        );
    }

    #[test]
    fn one_by_one_determinant_changes_sign_at_level() {
        let src = FnBand::new(1, |z: Complex64, i, j| {
            if i == j {
                z - c(2.0 * (i as f64 + 1.0), 0.0)
            } else {
                c(0.0, 0.0)
            }
        });
        let blocks = blockify(&src, 1).unwrap();
        let below = logdet_corrected(&blocks, c(1.9, 0.0), 0, 8).unwrap();
        let above = logdet_corrected(&blocks, c(2.1, 0.0), 0, 8).unwrap();
        assert_eq!(below.corrected.sign(), -1);
        assert_eq!(above.corrected.sign(), 1);
    }
}
