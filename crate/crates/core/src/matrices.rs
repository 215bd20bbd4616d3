//! Band-matrix representation of `J(z) = zS - H` on the Coulomb-Sturmian basis.
//!
//! With `<n|1/r|n'> = δ`, the operator `r^i` becomes `(2b)^{-(i+1)} X^{i+1}`
//! where `X` is the normalized Laguerre multiplication matrix (see
//! [`crate::moments`]). In particular the overlap is `X / 2b`, `r` is
//! `X² / 4b²` and `r²` is `X³ / 8b³`.
//!
//! Expanding these powers gives the closed forms with their parentheses
//! nested left to right:
//!
//! ```text
//! <n|r|n>   = (6n² + 2(L+1)(6n+2L+3)) / 4b²
//! <n|r²|n>  = (((10n+2L+4)(n+2L+3) + 9n(n-1))(n+2L+2) + n(n-1)(n-2)) / 8b³
//! ```
//!
//! Off the diagonal `r` has signs `-, +` at distance 1, 2 and `r²` has
//! `-, +, -` at distance 1, 2, 3.

use std::sync::RwLock;

use num_complex::Complex64;

use crate::banded::BandedSymmetric;
use crate::basis::{BasisSpec, PotentialSpec};
use crate::error::{Error, Result};
use crate::moments::laguerre_x_powers;

fn check_order(order: usize) -> Result<()> {
    if order == 0 {
        Err(Error::InvalidArgument("matrix order must be at least 1".into()))
    } else {
        Ok(())
    }
}

/// `<n|n'>`: diagonal `(n+L+1)/b`, first off-diagonal `-sqrt(n'(n'+2L+1))/2b`.
pub fn overlap_matrix(basis: &BasisSpec, order: usize) -> Result<BandedSymmetric<f64>> {
    check_order(order)?;
    let ell = basis.effective_l();
    let b = basis.b();
    let diag = (0..order).map(|n| (n as f64 + ell + 1.0) / b).collect();
    let off = (1..order)
        .map(|np| {
            let np = np as f64;
            -(np * (np + 2.0 * ell + 1.0)).sqrt() / (2.0 * b)
        })
        .collect();
    Ok(BandedSymmetric::from_diagonals(order, vec![diag, off]))
}

/// `<n|H_0|n'>`: diagonal `b(n+L+1)/2`, first off-diagonal `b sqrt(n'(n'+2L+1))/4`.
pub fn kinetic_matrix(basis: &BasisSpec, order: usize) -> Result<BandedSymmetric<f64>> {
    check_order(order)?;
    let ell = basis.effective_l();
    let b = basis.b();
    let diag = (0..order).map(|n| b * (n as f64 + ell + 1.0) / 2.0).collect();
    let off = (1..order)
        .map(|np| {
            let np = np as f64;
            b * (np * (np + 2.0 * ell + 1.0)).sqrt() / 4.0
        })
        .collect();
    Ok(BandedSymmetric::from_diagonals(order, vec![diag, off]))
}

/// `<n|r^i|n'>` for `i >= -1`. Half-bandwidth `i+1`, or 0 for `1/r`.
pub fn power_matrix(basis: &BasisSpec, order: usize, power: i32) -> Result<BandedSymmetric<f64>> {
    check_order(order)?;
    match power {
        i32::MIN..=-2 => Err(Error::UnsupportedPower(power)),
        -1 => Ok(BandedSymmetric::from_diagonals(order, vec![vec![1.0; order]])),
        0 => overlap_matrix(basis, order),
        _ => {
            let p = power as usize + 1;
            let rows = laguerre_x_powers(basis.laguerre_order(), 0..order, p);
            let scale = (2.0 * basis.b()).powi(-(p as i32));
            let diagonals = (0..=p)
                .map(|d| {
                    (0..order.saturating_sub(d))
                        .map(|n| scale * rows[p][n][d])
                        .collect()
                })
                .collect();
            Ok(BandedSymmetric::from_diagonals(order, diagonals))
        }
    }
}

/// `<n|H|n'>` with `H = H_0 + Σ a_i r^i`, half-bandwidth `max(1, k+1)`.
pub fn hamiltonian_matrix(
    basis: &BasisSpec,
    potential: &PotentialSpec,
    order: usize,
) -> Result<BandedSymmetric<f64>> {
    check_order(order)?;
    let bands = BandRows::compute(basis, potential, 0..order);
    let w = potential.half_bandwidth();
    let diagonals = (0..=w)
        .map(|d| (0..order.saturating_sub(d)).map(|n| bands.h(n, d)).collect())
        .collect();
    Ok(BandedSymmetric::from_diagonals(order, diagonals))
}

/// `J(z) = zS - H_0 - Σ a_i R^i` on the first `order` basis states.
pub fn assemble_j(
    basis: &BasisSpec,
    potential: &PotentialSpec,
    z: Complex64,
    order: usize,
) -> Result<BandedSymmetric<Complex64>> {
    check_order(order)?;
    let bands = BandRows::compute(basis, potential, 0..order);
    let w = potential.half_bandwidth();
    let diagonals = (0..=w)
        .map(|d| {
            (0..order.saturating_sub(d))
                .map(|n| bands.j(z, n, d))
                .collect()
        })
        .collect();
    Ok(BandedSymmetric::from_diagonals(order, diagonals))
}

/// Overlap and Hamiltonian band rows, each row storing offsets `0..=w`.
/// Indexing assumes the rows start at 0; chunks computed for later rows are
/// only ever appended.
#[derive(Debug, Clone, Default)]
struct BandRows {
    stride: usize,
    s: Vec<f64>,
    h: Vec<f64>,
}

impl BandRows {
    fn compute(basis: &BasisSpec, potential: &PotentialSpec, rows: std::ops::Range<usize>) -> Self {
        let w = potential.half_bandwidth();
        let stride = w + 1;
        let ell = basis.effective_l();
        let b = basis.b();
        let max_power = potential.degree().unwrap_or(-1).max(0) as usize + 1;
        let x = laguerre_x_powers(basis.laguerre_order(), rows.clone(), max_power);

        let len = rows.len();
        let mut s = vec![0.0; len * stride];
        let mut h = vec![0.0; len * stride];
        for (idx, n) in rows.enumerate() {
            let base = idx * stride;
            let nf = n as f64;
            let coupling = ((nf + 1.0) * (nf + 2.0 * ell + 2.0)).sqrt();
            s[base] = (nf + ell + 1.0) / b;
            s[base + 1] = -coupling / (2.0 * b);
            h[base] = b * (nf + ell + 1.0) / 2.0;
            h[base + 1] = b * coupling / 4.0;
            for (power, a) in potential.terms() {
                if power == -1 {
                    h[base] += a;
                    continue;
                }
                let p = power as usize + 1;
                let scale = a * (2.0 * b).powi(-(p as i32));
                for d in 0..=p {
                    h[base + d] += scale * x[p][idx][d];
                }
            }
        }
        Self { stride, s, h }
    }

    fn len(&self) -> usize {
        self.s.len() / self.stride
    }

    fn s(&self, n: usize, d: usize) -> f64 {
        if d > 1 {
            0.0
        } else {
            self.s[n * self.stride + d]
        }
    }

    fn h(&self, n: usize, d: usize) -> f64 {
        self.h[n * self.stride + d]
    }

    fn j(&self, z: Complex64, n: usize, d: usize) -> Complex64 {
        z * self.s(n, d) - self.h(n, d)
    }

    fn extend(&mut self, more: BandRows) {
        self.s.extend(more.s);
        self.h.extend(more.h);
    }
}

/// The infinite band matrix `J(z)` of a Coulomb plus polynomial Hamiltonian.
///
/// Rows are generated on demand and cached; the cache only grows, so the
/// matrix behaves as a pure function of `(z, i, j)` and may be shared across
/// threads.
#[derive(Debug)]
pub struct BandedHamiltonian {
    basis: BasisSpec,
    potential: PotentialSpec,
    cache: RwLock<BandRows>,
}

impl Clone for BandedHamiltonian {
    fn clone(&self) -> Self {
        Self::new(self.basis, self.potential.clone())
    }
}

impl BandedHamiltonian {
    pub fn new(basis: BasisSpec, potential: PotentialSpec) -> Self {
        let stride = potential.half_bandwidth() + 1;
        Self {
            basis,
            potential,
            cache: RwLock::new(BandRows {
                stride,
                s: Vec::new(),
                h: Vec::new(),
            }),
        }
    }

    pub fn basis(&self) -> &BasisSpec {
        &self.basis
    }

    pub fn potential(&self) -> &PotentialSpec {
        &self.potential
    }

    pub fn half_bandwidth(&self) -> usize {
        self.potential.half_bandwidth()
    }

    /// Makes sure rows `0..rows` are cached.
    pub fn reserve_rows(&self, rows: usize) {
        let have = self.cache.read().expect("band cache poisoned").len();
        if have >= rows {
            return;
        }
        let mut cache = self.cache.write().expect("band cache poisoned");
        let have = cache.len();
        if have >= rows {
            return;
        }
        let target = rows.max(2 * have).max(64);
        let more = BandRows::compute(&self.basis, &self.potential, have..target);
        cache.extend(more);
    }

    /// Fills `out[d] = J(z)(row, row+d)` for `d = 0..=w`.
    pub fn j_band_row(&self, z: Complex64, row: usize, out: &mut [Complex64]) {
        let w = self.half_bandwidth();
        self.reserve_rows(row + 1);
        let cache = self.cache.read().expect("band cache poisoned");
        for (d, slot) in out.iter_mut().enumerate().take(w + 1) {
            *slot = cache.j(z, row, d);
        }
    }

    pub fn overlap(&self, order: usize) -> Result<BandedSymmetric<f64>> {
        overlap_matrix(&self.basis, order)
    }

    pub fn hamiltonian(&self, order: usize) -> Result<BandedSymmetric<f64>> {
        hamiltonian_matrix(&self.basis, &self.potential, order)
    }

    pub fn j_matrix(&self, z: Complex64, order: usize) -> Result<BandedSymmetric<Complex64>> {
        assemble_j(&self.basis, &self.potential, z, order)
    }
}
