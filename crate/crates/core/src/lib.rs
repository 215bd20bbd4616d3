//! Green's operator of `H = H_0 + Σ_{i=-1}^{k} a_i r^i` on the Coulomb-Sturmian
//! basis, built as a matrix continued fraction, and the bound-state spectra and
//! eigenvectors that follow from its poles and residues.

// `!(x > 0.0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod banded;
pub mod basis;
pub mod blocks;
pub mod dense;
pub mod error;
pub mod green;
pub mod matrices;
pub mod moments;
pub mod reference;
pub mod residue;
pub mod spectrum;

pub use banded::BandedSymmetric;
pub use basis::{cs_radial_eval, cs_radial_values, BasisSpec, PotentialSpec};
pub use blocks::{blockify, blockify_default, BandSource, BlockTridiagonal, FnBand};
pub use dense::{CMatrix, LogDet};
pub use error::{Error, Result};
pub use green::{
    green_matrix, logdet_corrected, tail_cf, CorrectedDeterminant, GreenBlockMatrix, TailFraction,
};
pub use matrices::{
    assemble_j, hamiltonian_matrix, kinetic_matrix, overlap_matrix, power_matrix,
    BandedHamiltonian,
};
pub use moments::{moment_matrices, MomentTable};
pub use residue::{
    contour_projector, eigenstate_eval, residue_at, state_for_level, ContourOptions, Eigenstate,
};
pub use spectrum::{find_eigenvalues, sweep_b, Level, SearchOptions, SpectrumResult, SweepRecord};

pub use num_complex::Complex64;
