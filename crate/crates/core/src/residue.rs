//! Eigenvectors from the residue of the Green's matrix,
//! `|ψ><ψ| = (1/2πi) ∮ G(z) dz`, with the contour enclosing a single pole.
//!
//! On the basis `G` is represented by `<ñ|G|ñ'>`, so the residue is `c cᵀ`
//! with `c_n = <ñ|ψ>` and `ψ(r) = Σ c_n <r|n>`.

use std::f64::consts::PI;

use nalgebra::SymmetricEigen;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::basis::{cs_radial_values, BasisSpec};
use crate::blocks::blockify_default;
use crate::dense::{max_norm, CMatrix};
use crate::error::{Error, Result};
use crate::green::{green_matrix, DEFAULT_K_MAX, DEFAULT_TOL};
use crate::matrices::BandedHamiltonian;
use crate::spectrum::{SpectrumResult, RANK_DEFECT_LIMIT};

#[derive(Debug, Clone, PartialEq)]
pub struct ContourOptions {
    /// Circle radius; when unset, a quarter of the gap to the nearest
    /// located neighbour.
    pub radius: Option<f64>,
    /// Starting number of trapezoid nodes.
    pub points: usize,
    pub max_points: usize,
    /// Node doubling stops once the residue changes by less than `tol`
    /// relative to `radius * max|G|` on the contour.
    pub tol: f64,
    pub green_tol: f64,
    pub k_max: usize,
}

impl Default for ContourOptions {
    fn default() -> Self {
        Self {
            radius: None,
            points: 32,
            max_points: 4096,
            tol: 1e-10,
            green_tol: DEFAULT_TOL,
            k_max: DEFAULT_K_MAX,
        }
    }
}

/// Trapezoid-rule value of `(1/2πi) ∮ G^(N)(z) dz` on a circle.
#[derive(Debug, Clone)]
pub struct ResidueMatrix {
    pub values: CMatrix,
    pub points: usize,
    pub radius: f64,
    /// `max |R_Q - R_{Q/2}|` at the accepted node count.
    pub change: f64,
    /// `radius * max |G|` over the contour.
    pub scale: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Eigenstate {
    pub energy: f64,
    /// `c_n = <ñ|ψ>` for the `(N+1)m` retained states, scaled so `cᵀSc = 1`
    /// with the largest-magnitude entry positive.
    pub coefficients: Vec<f64>,
    /// `|cᵀSc - 1|` of the residue before rescaling; small when the retained
    /// states carry the whole norm.
    pub norm_defect: f64,
    /// Second over first singular value of the residue matrix.
    pub rank_defect: f64,
    pub blocks: usize,
    pub block_size: usize,
    pub radius: f64,
    pub points: usize,
}

fn trapezoid(
    ham: &BandedHamiltonian,
    center: f64,
    radius: f64,
    n: usize,
    points: usize,
    opts: &ContourOptions,
) -> Result<(CMatrix, f64)> {
    let blocks = blockify_default(ham);
    // nodes at half steps keep the real axis off the contour
    let terms: Vec<(CMatrix, f64)> = (0..points)
        .into_par_iter()
        .map(|k| {
            let theta = 2.0 * PI * (k as f64 + 0.5) / points as f64;
            let phase = Complex64::from_polar(1.0, theta);
            let z = Complex64::new(center, 0.0) + radius * phase;
            let g = green_matrix(&blocks, z, n, opts.green_tol, opts.k_max)?;
            let peak = max_norm(&g.values);
            Ok((g.values * phase, peak))
        })
        .collect::<Result<_>>()?;
    let size = terms[0].0.nrows();
    let mut sum = CMatrix::zeros(size, size);
    let mut peak = 0.0f64;
    for (term, p) in &terms {
        sum += term;
        peak = peak.max(*p);
    }
    Ok((sum * Complex64::new(radius / points as f64, 0.0), radius * peak))
}

/// Residue projector of `G^(N)` on the circle `|z - center| = radius`, with
/// the node count doubled until it settles.
pub fn contour_projector(
    ham: &BandedHamiltonian,
    center: f64,
    radius: f64,
    n: usize,
    opts: &ContourOptions,
) -> Result<ResidueMatrix> {
    if !(radius > 0.0) {
        return Err(Error::Contour(format!("radius must be positive, got {radius}")));
    }
    if opts.points < 2 {
        return Err(Error::Contour("at least two quadrature nodes are needed".into()));
    }
    let mut points = opts.points;
    let (mut current, _) = trapezoid(ham, center, radius, n, points, opts)?;
    loop {
        if 2 * points > opts.max_points {
            return Err(Error::Contour(format!(
                "quadrature did not settle with {points} nodes"
            )));
        }
        points *= 2;
        let (next, scale) = trapezoid(ham, center, radius, n, points, opts)?;
        let change = max_norm(&(&next - &current));
        if change <= opts.tol * scale {
            return Ok(ResidueMatrix {
                values: next,
                points,
                radius,
                change,
                scale,
            });
        }
        current = next;
    }
}

/// Eigenstate from the residue of `G^(N)` at `energy`.
pub fn residue_at(
    ham: &BandedHamiltonian,
    energy: f64,
    n: usize,
    opts: &ContourOptions,
) -> Result<Eigenstate> {
    let radius = opts
        .radius
        .ok_or_else(|| Error::Contour("contour radius must be given".into()))?;
    let residue = contour_projector(ham, energy, radius, n, opts)?;
    let size = residue.values.nrows();

    // The residue is real symmetric up to roundoff. A real symmetric
    // eigensolve is used because the complex SVD can return a wrong leading
    // vector for nearly rank-one input.
    let real = residue.values.map(|v| v.re);
    let eig = SymmetricEigen::new(real);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].abs().total_cmp(&eig.eigenvalues[a].abs()));
    let first = eig.eigenvalues[order[0]].abs();
    let second = order.get(1).map_or(0.0, |&i| eig.eigenvalues[i].abs());
    let imaginary = residue.values.iter().map(|v| v.im.abs()).fold(0.0, f64::max);
    let rank_defect = if first > 0.0 { second.max(imaginary) / first } else { f64::INFINITY };
    if !(rank_defect <= RANK_DEFECT_LIMIT) {
        return Err(Error::Degenerate { rank_defect });
    }

    let direction = eig.eigenvectors.column(order[0]);
    let pivot = direction
        .iter()
        .copied()
        .max_by(|a, b| a.abs().total_cmp(&b.abs()))
        .expect("nonempty residue");
    let raw: Vec<f64> = direction
        .iter()
        .map(|v| v * pivot.signum() * first.sqrt())
        .collect();

    let overlap = ham.overlap(size)?;
    let norm = quadratic_form(&overlap, &raw, &raw);
    let scale = 1.0 / norm.sqrt();
    let blocks = blockify_default(ham);
    Ok(Eigenstate {
        energy,
        coefficients: raw.iter().map(|v| v * scale).collect(),
        norm_defect: (norm - 1.0).abs(),
        rank_defect,
        blocks: n + 1,
        block_size: blocks.block_size(),
        radius,
        points: residue.points,
    })
}

/// Quarter of the distance from level `index` to its nearest neighbour in
/// `energies`, or `0.05 max(1, |E|)` for a lone level. The radius is capped
/// at half the distance to the edges of the scanned `window`, outside of
/// which levels are unknown.
pub fn default_radius(energies: &[f64], index: usize, window: (f64, f64)) -> f64 {
    let e = energies[index];
    let gap = energies
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != index)
        .map(|(_, other)| (other - e).abs())
        .fold(f64::INFINITY, f64::min);
    let radius = if gap.is_finite() { gap / 4.0 } else { 0.05 * e.abs().max(1.0) };
    let edge = (e - window.0).min(window.1 - e);
    if edge > 0.0 {
        radius.min(0.5 * edge)
    } else {
        radius
    }
}

/// Eigenstate of level `index` of a located spectrum. The contour must not
/// enclose or touch any other located level or flagged point.
pub fn state_for_level(
    ham: &BandedHamiltonian,
    spectrum: &SpectrumResult,
    index: usize,
    n: usize,
    opts: &ContourOptions,
) -> Result<Eigenstate> {
    let energies = spectrum.energies();
    let energy = *energies
        .get(index)
        .ok_or_else(|| Error::InvalidArgument(format!("no level with index {index}")))?;
    let radius = opts.radius.unwrap_or_else(|| default_radius(&energies, index, spectrum.window));
    if let Some(other) = energies
        .iter()
        .enumerate()
        .find(|(i, e)| *i != index && (*e - energy).abs() <= radius)
    {
        return Err(Error::Contour(format!(
            "contour of radius {radius} around {energy} encloses level {}",
            other.1
        )));
    }
    if let Some(flag) = spectrum
        .flagged
        .iter()
        .find(|f| (f.energy - energy).abs() <= radius)
    {
        return Err(Error::Contour(format!(
            "contour around {energy} reaches the flagged point {}",
            flag.energy
        )));
    }
    let opts = ContourOptions {
        radius: Some(radius),
        ..opts.clone()
    };
    residue_at(ham, energy, n, &opts)
}

/// `ψ(r) = Σ_n c_n <r|n>`.
pub fn eigenstate_eval(basis: &BasisSpec, state: &Eigenstate, r: f64) -> Result<f64> {
    let values = cs_radial_values(basis, state.coefficients.len(), r)?;
    Ok(values
        .iter()
        .zip(&state.coefficients)
        .map(|(phi, c)| phi * c)
        .sum())
}

/// `xᵀ A y` for a symmetric band matrix.
pub(crate) fn quadratic_form(a: &crate::banded::BandedSymmetric<f64>, x: &[f64], y: &[f64]) -> f64 {
    a.upper_entries()
        .map(|(i, j, v)| {
            if i == j {
                v * x[i] * y[i]
            } else {
                v * (x[i] * y[j] + x[j] * y[i])
            }
        })
        .sum()
}
