//! Laguerre moment integrals
//!
//! ```text
//! I^(p)(n, n') = ∫_0^∞ e^{-x} x^{α+p} L_n^α(x) L_{n'}^α(x) dx,   α = 2L+1
//! ```
//!
//! `I^(0)` is diagonal by orthogonality. Higher moments follow from the
//! three-term recurrence `x L_n = (2n+α+1) L_n - (n+1) L_{n+1} - (n+α) L_{n-1}`:
//! in the orthonormalized polynomials `c_n L_n` multiplication by `x` is the
//! symmetric tridiagonal matrix `X`, so the normalized tables are `X^p`.
//! `X` has positive diagonal and negative off-diagonal, so after the sign
//! change `(-1)^n` every power is entrywise non-negative and the products
//! never cancel.

use std::ops::Range;

use crate::banded::BandedSymmetric;
use crate::basis::BasisSpec;
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct MomentTable {
    alpha: f64,
    ln_norm: Vec<f64>,
    normalized: Vec<BandedSymmetric<f64>>,
}

impl MomentTable {
    pub fn order(&self) -> usize {
        self.ln_norm.len()
    }

    pub fn p_max(&self) -> usize {
        self.normalized.len() - 1
    }

    pub fn laguerre_order(&self) -> f64 {
        self.alpha
    }

    /// `c_n c_{n'} I^(p)(n, n')`, i.e. `(X^p)(n, n')`.
    pub fn normalized(&self, p: usize) -> &BandedSymmetric<f64> {
        &self.normalized[p]
    }

    /// The unnormalized integral `I^(p)(n, n')`.
    pub fn raw(&self, p: usize, n: usize, n_prime: usize) -> f64 {
        self.normalized[p].get(n, n_prime) * (-self.ln_norm[n] - self.ln_norm[n_prime]).exp()
    }
}

/// Moment tables `I^(0) ..= I^(p_max)` restricted to `n, n' < order`.
pub fn moment_matrices(basis: &BasisSpec, order: usize, p_max: usize) -> Result<MomentTable> {
    if order == 0 {
        return Err(Error::InvalidArgument("moment table order must be at least 1".into()));
    }
    let alpha = basis.laguerre_order();
    let powers = laguerre_x_powers(alpha, 0..order, p_max);
    let normalized = powers
        .into_iter()
        .enumerate()
        .map(|(p, rows)| {
            let diagonals = (0..=p)
                .map(|d| (0..order.saturating_sub(d)).map(|n| rows[n][d]).collect())
                .collect();
            BandedSymmetric::from_diagonals(order, diagonals)
        })
        .collect();
    Ok(MomentTable {
        alpha,
        ln_norm: (0..order).map(|n| basis.ln_normalization(n)).collect(),
        normalized,
    })
}

/// Rows of `X^p` for `p = 0..=p_max`: `out[p][n - rows.start][d] = (X^p)(n, n+d)`
/// for `d = 0..=p`.
///
/// Only a window around `rows` is multiplied out. A length-`p` path from `n`
/// to `n+d` never leaves `[n - p, n + d + p]`, so padding by `p_max` below and
/// `2 p_max` above keeps every returned entry exact.
pub(crate) fn laguerre_x_powers(
    alpha: f64,
    rows: Range<usize>,
    p_max: usize,
) -> Vec<Vec<Vec<f64>>> {
    let start = rows.start.saturating_sub(p_max);
    let end = rows.end + 2 * p_max + 1;
    let width = end - start;

    let x_diag: Vec<f64> = (start..end)
        .map(|n| 2.0 * n as f64 + alpha + 1.0)
        .collect();
    // x_off[i] couples window rows i and i+1
    let x_off: Vec<f64> = (start..end - 1)
        .map(|n| -(((n + 1) as f64) * (n as f64 + alpha + 1.0)).sqrt())
        .collect();

    let mut out = Vec::with_capacity(p_max + 1);
    out.push(rows.clone().map(|_| vec![1.0]).collect::<Vec<_>>());

    // full band rows of the current power, offsets -q..=q
    let mut current: Vec<Vec<f64>> = vec![vec![1.0]; width];
    for q in 0..p_max {
        let next_width = 2 * (q + 1) + 1;
        let mut next = vec![vec![0.0; next_width]; width];
        for (i, row) in next.iter_mut().enumerate() {
            // (X Y)(i, j) = X(i,i-1) Y(i-1,j) + X(i,i) Y(i,j) + X(i,i+1) Y(i+1,j)
            let mut accumulate = |k: usize, coef: f64| {
                for (idx, &v) in current[k].iter().enumerate() {
                    // column j = k + idx - q, stored at j - i + q + 1
                    let slot = k + idx + 1;
                    if slot >= i && slot - i < next_width {
                        row[slot - i] += coef * v;
                    }
                }
            };
            accumulate(i, x_diag[i]);
            if i > 0 {
                accumulate(i - 1, x_off[i - 1]);
            }
            if i + 1 < width {
                accumulate(i + 1, x_off[i]);
            }
        }
        current = next;
        let p = q + 1;
        out.push(
            rows.clone()
                .map(|n| {
                    let i = n - start;
                    (0..=p).map(|d| current[i][p + d]).collect()
                })
                .collect(),
        );
    }
    out
}
