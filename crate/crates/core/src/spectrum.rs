//! Bound-state energies as the poles of `G^(N)(z)`.
//!
//! The real axis is scanned for sign changes of the determinant. The
//! tail-corrected `det J^(N)` is meromorphic: it vanishes at eigenvalues but
//! also changes sign through its own poles, which sit at the eigenvalues of the
//! eliminated tail. The product with the tail determinants, `det J^(K)`, has
//! no poles, so brackets are formed and bisected on its sign; every zero of it
//! is a zero of the corrected determinant as well.

use log::{debug, warn};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::basis::{BasisSpec, PotentialSpec};
use crate::blocks::{blockify_default, BlockTridiagonal};
use crate::error::{Error, Result};
use crate::green::{initial_depth, logdet_corrected, DEFAULT_K_MAX};
use crate::matrices::BandedHamiltonian;
use crate::residue::{default_radius, residue_at, ContourOptions};

/// `log|det|` threshold for a touching zero without sign change.
const EVEN_ZERO_LOG_THRESHOLD: f64 = -30.0;
/// Rank defect above which a residue is considered contaminated.
pub const RANK_DEFECT_LIMIT: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct SearchOptions {
    /// Uniform scan points across the window.
    pub grid_points: usize,
    /// Bisection stops at `|ΔE| <= tol * max(1, |E|)`.
    pub tol: f64,
    /// Relative shift allowed between the scans at `K` and `2K`. Never
    /// tighter than `4 * tol`, which bisection noise alone can reach.
    pub stability: f64,
    pub k_max: usize,
    /// Keep only the lowest `count` levels.
    pub count: Option<usize>,
    /// Run the residue rank test on each accepted level.
    pub validate: bool,
    pub contour: ContourOptions,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            grid_points: 2000,
            tol: 1e-12,
            stability: 1e-10,
            k_max: DEFAULT_K_MAX,
            count: None,
            validate: true,
            contour: ContourOptions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Level {
    pub index: usize,
    pub energy: f64,
    /// Final bisection bracket; `energy` lies inside it.
    pub bracket: (f64, f64),
    pub depth: usize,
    pub blocks: usize,
    pub validated: bool,
    pub rank_defect: Option<f64>,
}

impl Level {
    pub fn bracket_width(&self) -> f64 {
        self.bracket.1 - self.bracket.0
    }
}

/// A root that moved by more than the stability tolerance when `K` was doubled.
#[derive(Debug, Clone, PartialEq)]
pub struct RejectedRoot {
    pub energy: f64,
    pub shift: f64,
    pub depth: usize,
}

/// A grid point where `log|det|` dips below the threshold without a sign change.
#[derive(Debug, Clone, PartialEq)]
pub struct FlaggedPoint {
    pub energy: f64,
    pub log_abs_det: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SpectrumResult {
    /// Range in which `levels` lists every located level: the scanned
    /// window, cut at the first root dropped by `count`.
    pub window: (f64, f64),
    pub levels: Vec<Level>,
    pub rejected: Vec<RejectedRoot>,
    pub flagged: Vec<FlaggedPoint>,
    /// Grid energies where the tail could not be evaluated.
    pub skipped: Vec<f64>,
}

impl SpectrumResult {
    pub fn energies(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.energy).collect()
    }
}

#[derive(Debug, Clone, Copy)]
struct Root {
    energy: f64,
    bracket: (f64, f64),
}

#[derive(Debug, Default)]
struct Scan {
    roots: Vec<Root>,
    flagged: Vec<FlaggedPoint>,
    skipped: Vec<f64>,
}

#[derive(Debug, Clone, Copy)]
struct Sample {
    sign: i8,
    corrected_log_abs: f64,
}

fn sample(
    blocks: &BlockTridiagonal<'_, BandedHamiltonian>,
    energy: f64,
    n: usize,
    k: usize,
) -> Result<Sample> {
    let det = logdet_corrected(blocks, Complex64::new(energy, 0.0), n, k)?;
    Ok(Sample {
        sign: det.full().sign(),
        corrected_log_abs: det.corrected.log_abs,
    })
}

fn scan(
    blocks: &BlockTridiagonal<'_, BandedHamiltonian>,
    window: (f64, f64),
    n: usize,
    k: usize,
    grid_points: usize,
    tol: f64,
) -> Scan {
    let (lo, hi) = window;
    let step = (hi - lo) / (grid_points - 1) as f64;
    let grid: Vec<f64> = (0..grid_points)
        .map(|i| if i + 1 == grid_points { hi } else { lo + step * i as f64 })
        .collect();
    blocks.reserve_blocks(k + 1);
    let samples: Vec<Option<Sample>> = grid
        .par_iter()
        .map(|&e| sample(blocks, e, n, k).ok())
        .collect();

    let mut out = Scan::default();
    let mut last: Option<(f64, Sample)> = None;
    for (i, (&e, s)) in grid.iter().zip(&samples).enumerate() {
        let Some(s) = *s else {
            warn!("skipping grid point E = {e}: tail evaluation failed at depth {k}");
            out.skipped.push(e);
            continue;
        };
        if s.sign == 0 {
            out.roots.push(Root {
                energy: e,
                bracket: (e, e),
            });
        } else if let Some((prev_e, prev)) = last {
            if prev.sign != 0 && prev.sign != s.sign {
                out.roots.push(bisect(blocks, n, k, (prev_e, e), prev.sign, tol));
            }
        }
        if i > 0 && i + 1 < grid.len() {
            if let (Some(left), Some(right)) = (samples[i - 1], samples[i + 1]) {
                let dip = s.corrected_log_abs < EVEN_ZERO_LOG_THRESHOLD
                    && s.corrected_log_abs < left.corrected_log_abs
                    && s.corrected_log_abs < right.corrected_log_abs
                    && left.sign == s.sign
                    && right.sign == s.sign;
                if dip {
                    warn!("possible even-multiplicity pole near E = {e}");
                    out.flagged.push(FlaggedPoint {
                        energy: e,
                        log_abs_det: s.corrected_log_abs,
                    });
                }
            }
        }
        last = Some((e, s));
    }
    out
}

fn bisect(
    blocks: &BlockTridiagonal<'_, BandedHamiltonian>,
    n: usize,
    k: usize,
    bracket: (f64, f64),
    low_sign: i8,
    tol: f64,
) -> Root {
    let (mut a, mut b) = bracket;
    loop {
        let mid = 0.5 * (a + b);
        if b - a <= tol * mid.abs().max(1.0) || mid <= a || mid >= b {
            return Root {
                energy: mid,
                bracket: (a, b),
            };
        }
        match sample(blocks, mid, n, k) {
            Ok(s) if s.sign == 0 => {
                return Root {
                    energy: mid,
                    bracket: (mid, mid),
                }
            }
            Ok(s) if s.sign == low_sign => a = mid,
            Ok(_) => b = mid,
            Err(err) => {
                warn!("bisection stopped at E = {mid}: {err}");
                return Root {
                    energy: mid,
                    bracket: (a, b),
                };
            }
        }
    }
}

/// Eigenvalues of `basis`/`potential` inside `window`, using `N + 1` retained
/// block rows.
///
/// The window is scanned at tail depth `K` and again at `2K` with twice the
/// grid density. `K` is doubled from [`initial_depth`] until every root of the
/// finer scan (the lowest `count` of them, if set) is reproduced by the coarser
/// one, or until `K_max` is reached; roots that still move are rejected.
pub fn find_eigenvalues(
    ham: &BandedHamiltonian,
    window: (f64, f64),
    n: usize,
    opts: &SearchOptions,
) -> Result<SpectrumResult> {
    let (lo, hi) = window;
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::InvalidArgument(format!("empty energy window [{lo}, {hi}]")));
    }
    if opts.grid_points < 2 {
        return Err(Error::InvalidArgument("grid needs at least two points".into()));
    }
    if !ham.potential().is_confining() {
        return Err(Error::NotConfining);
    }
    let blocks = blockify_default(ham);
    let mut k = initial_depth(n);
    if 2 * k > opts.k_max {
        return Err(Error::InvalidArgument(format!(
            "K_max = {} leaves no room for a doubling check from K = {k}",
            opts.k_max
        )));
    }

    let (accepted, rejected, fine) = loop {
        let coarse = scan(&blocks, window, n, k, opts.grid_points, opts.tol);
        let fine = scan(&blocks, window, n, 2 * k, 2 * opts.grid_points, opts.tol);
        let considered = opts.count.unwrap_or(usize::MAX).min(fine.roots.len());

        let mut accepted = Vec::new();
        let mut rejected = Vec::new();
        for root in &fine.roots[..considered] {
            let shift = coarse
                .roots
                .iter()
                .map(|c| (c.energy - root.energy).abs())
                .fold(f64::INFINITY, f64::min);
            if shift <= opts.stability.max(4.0 * opts.tol) * root.energy.abs().max(1.0) {
                accepted.push(*root);
            } else {
                rejected.push(RejectedRoot {
                    energy: root.energy,
                    shift,
                    depth: 2 * k,
                });
            }
        }
        debug!(
            "K = {k}: {} stable, {} unstable roots in [{lo}, {hi}]",
            accepted.len(),
            rejected.len()
        );
        if rejected.is_empty() || 4 * k > opts.k_max {
            break (accepted, rejected, fine);
        }
        k *= 2;
    };

    let depth = 2 * k;
    let energies: Vec<f64> = accepted.iter().map(|r| r.energy).collect();
    let considered = opts.count.unwrap_or(usize::MAX).min(fine.roots.len());
    let window = match fine.roots.get(considered) {
        Some(dropped) => (lo, dropped.energy),
        None => window,
    };
    let levels = accepted
        .iter()
        .enumerate()
        .map(|(index, root)| {
            let (validated, rank_defect) = if opts.validate {
                let mut contour = opts.contour.clone();
                contour.radius = Some(contour.radius.unwrap_or_else(|| default_radius(&energies, index, window)));
                match residue_at(ham, root.energy, n, &contour) {
                    Ok(state) => (state.rank_defect < RANK_DEFECT_LIMIT, Some(state.rank_defect)),
                    Err(Error::Degenerate { rank_defect }) => (false, Some(rank_defect)),
                    Err(err) => {
                        warn!("residue check failed for E = {}: {err}", root.energy);
                        (false, None)
                    }
                }
            } else {
                (false, None)
            };
            Level {
                index,
                energy: root.energy,
                bracket: root.bracket,
                depth,
                blocks: n,
                validated,
                rank_defect,
            }
        })
        .collect();

    Ok(SpectrumResult {
        window,
        levels,
        rejected,
        flagged: fine.flagged,
        skipped: fine.skipped,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub b: f64,
    pub index: usize,
    pub energy: f64,
}

#[derive(Debug, Clone, Default)]
pub struct SweepResult {
    pub records: Vec<SweepRecord>,
    pub failures: Vec<(f64, Error)>,
}

/// Runs [`find_eigenvalues`] for each basis scale in `scales`; records come
/// out in `(b, index)` order regardless of scheduling.
pub fn sweep_b(
    template: &BasisSpec,
    potential: &PotentialSpec,
    scales: &[f64],
    n: usize,
    window: (f64, f64),
    opts: &SearchOptions,
) -> Result<SweepResult> {
    if let Some(bad) = scales.iter().find(|b| !(**b > 0.0)) {
        return Err(Error::InvalidBasis(format!("scale b must be positive, got {bad}")));
    }
    let runs: Vec<(f64, Result<SpectrumResult>)> = scales
        .par_iter()
        .map(|&b| {
            let result = template.with_scale(b).and_then(|basis| {
                let ham = BandedHamiltonian::new(basis, potential.clone());
                find_eigenvalues(&ham, window, n, opts)
            });
            (b, result)
        })
        .collect();

    let mut out = SweepResult::default();
    for (b, run) in runs {
        match run {
            Ok(spectrum) => out.records.extend(spectrum.levels.iter().map(|l| SweepRecord {
                b,
                index: l.index,
                energy: l.energy,
            })),
            Err(err) => {
                warn!("sweep point b = {b} failed: {err}");
                out.failures.push((b, err));
            }
        }
    }
    Ok(out)
}
