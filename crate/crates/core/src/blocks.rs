//! Block-Jacobi view of an infinite symmetric band matrix.

use num_complex::Complex64;

use crate::dense::CMatrix;
use crate::error::{Error, Result};
use crate::matrices::BandedHamiltonian;

/// An infinite complex-symmetric band matrix `J(z)`, read one band row at a time.
pub trait BandSource: Sync {
    fn half_bandwidth(&self) -> usize;

    /// Fills `out[d] = J(z)(row, row + d)` for `d = 0..=half_bandwidth()`.
    fn band_row(&self, z: Complex64, row: usize, out: &mut [Complex64]);

    /// Hint that rows `0..rows` are about to be read.
    fn reserve_rows(&self, _rows: usize) {}
}

impl BandSource for BandedHamiltonian {
    fn half_bandwidth(&self) -> usize {
        BandedHamiltonian::half_bandwidth(self)
    }

    fn band_row(&self, z: Complex64, row: usize, out: &mut [Complex64]) {
        self.j_band_row(z, row, out)
    }

    fn reserve_rows(&self, rows: usize) {
        BandedHamiltonian::reserve_rows(self, rows)
    }
}

/// Band matrix given by a closure `f(z, i, j)` for `i <= j <= i + w`.
pub struct FnBand<F> {
    half_bandwidth: usize,
    entry: F,
}

impl<F> FnBand<F>
where
    F: Fn(Complex64, usize, usize) -> Complex64 + Sync,
{
    pub fn new(half_bandwidth: usize, entry: F) -> Self {
        Self {
            half_bandwidth,
            entry,
        }
    }
}

impl<F> BandSource for FnBand<F>
where
    F: Fn(Complex64, usize, usize) -> Complex64 + Sync,
{
    fn half_bandwidth(&self) -> usize {
        self.half_bandwidth
    }

    fn band_row(&self, z: Complex64, row: usize, out: &mut [Complex64]) {
        for (d, slot) in out.iter_mut().enumerate().take(self.half_bandwidth + 1) {
            *slot = (self.entry)(z, row, row + d);
        }
    }
}

/// `J` partitioned into `m x m` blocks: block row `j` holds the diagonal block
/// `D_j = J_{j,j}` and the super-diagonal block `E_j = J_{j,j+1}`; the
/// sub-diagonal block `J_{j+1,j}` is `E_jᵀ`.
pub struct BlockTridiagonal<'a, S: BandSource + ?Sized> {
    source: &'a S,
    block: usize,
}

impl<S: BandSource + ?Sized> Clone for BlockTridiagonal<'_, S> {
    fn clone(&self) -> Self {
        Self {
            source: self.source,
            block: self.block,
        }
    }
}

/// Partitions `source` into `m x m` blocks. `m` must cover the half-bandwidth.
pub fn blockify<S: BandSource + ?Sized>(source: &S, m: usize) -> Result<BlockTridiagonal<'_, S>> {
    let w = source.half_bandwidth();
    if m == 0 || m < w {
        return Err(Error::Partition {
            block: m,
            bandwidth: w,
        });
    }
    Ok(BlockTridiagonal { source, block: m })
}

/// Partition with the smallest admissible block size `max(1, w)`.
pub fn blockify_default<S: BandSource + ?Sized>(source: &S) -> BlockTridiagonal<'_, S> {
    let m = source.half_bandwidth().max(1);
    BlockTridiagonal { source, block: m }
}

impl<'a, S: BandSource + ?Sized> BlockTridiagonal<'a, S> {
    pub fn block_size(&self) -> usize {
        self.block
    }

    pub fn source(&self) -> &'a S {
        self.source
    }

    pub fn reserve_blocks(&self, blocks: usize) {
        self.source.reserve_rows(blocks * self.block);
    }

    /// `(D_j, E_j)` at energy `z`.
    pub fn rows(&self, j: usize, z: Complex64) -> (CMatrix, CMatrix) {
        let m = self.block;
        let w = self.source.half_bandwidth();
        let zero = Complex64::new(0.0, 0.0);
        let mut diag = CMatrix::from_element(m, m, zero);
        let mut upper = CMatrix::from_element(m, m, zero);
        let mut band = vec![zero; w + 1];
        for a in 0..m {
            self.source.band_row(z, j * m + a, &mut band);
            for (d, &v) in band.iter().enumerate() {
                // column offset relative to the start of block row j
                let col = a + d;
                if col < m {
                    diag[(a, col)] = v;
                    diag[(col, a)] = v;
                } else if col < 2 * m {
                    upper[(a, col - m)] = v;
                }
            }
        }
        (diag, upper)
    }

    pub fn diagonal_block(&self, j: usize, z: Complex64) -> CMatrix {
        self.rows(j, z).0
    }

    pub fn upper_block(&self, j: usize, z: Complex64) -> CMatrix {
        self.rows(j, z).1
    }

    /// `J_{j,j-1} = E_{j-1}ᵀ`; panics for `j = 0`.
    pub fn lower_block(&self, j: usize, z: Complex64) -> CMatrix {
        assert!(j > 0, "block row 0 has no sub-diagonal block");
        self.rows(j - 1, z).1.transpose()
    }

    /// Dense `(blocks m) x (blocks m)` leading corner of `J(z)`.
    pub fn dense(&self, blocks: usize, z: Complex64) -> CMatrix {
        let m = self.block;
        let size = blocks * m;
        let mut out = CMatrix::from_element(size, size, Complex64::new(0.0, 0.0));
        for j in 0..blocks {
            let (d, e) = self.rows(j, z);
            out.view_mut((j * m, j * m), (m, m)).copy_from(&d);
            if j + 1 < blocks {
                out.view_mut((j * m, (j + 1) * m), (m, m)).copy_from(&e);
                out.view_mut(((j + 1) * m, j * m), (m, m)).copy_from(&e.transpose());
            }
        }
        out
    }
}
