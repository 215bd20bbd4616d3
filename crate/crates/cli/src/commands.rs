//! Subcommands. Each one renders its whole CSV in memory so that nothing is
//! written when a computation fails.

use std::fmt::Write as _;

use cs_green::reference::{CORNELL_3D, COULOMB_OSCILLATOR_2D, REFERENCE_RTOL};
use cs_green::{
    blockify_default, eigenstate_eval, find_eigenvalues, green_matrix, kinetic_matrix, overlap_matrix,
    power_matrix, state_for_level, sweep_b, BandedHamiltonian, BandedSymmetric, BasisSpec, Complex64,
    ContourOptions, PotentialSpec, SearchOptions,
};

use crate::config::RunConfig;
use crate::error::CliError;

/// Rendered output and the number of reference mismatches it reports.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub text: String,
    pub mismatches: usize,
}

impl Report {
    fn ok(text: String) -> Self {
        Self { text, mismatches: 0 }
    }
}

/// Seventeen significant digits, enough to round-trip any `f64`.
pub fn fmt_real(v: f64) -> String {
    format!("{v:.16e}")
}

fn header(command: &str, cfg: &RunConfig) -> String {
    let mut out = format!("# csgreen {command}\n");
    for line in cfg.echo() {
        let _ = writeln!(out, "# config: {line}");
    }
    out
}

fn search_options(cfg: &RunConfig) -> SearchOptions {
    let defaults = SearchOptions::default();
    SearchOptions {
        tol: cfg.tol,
        k_max: cfg.k_max,
        contour: ContourOptions {
            k_max: cfg.k_max,
            ..defaults.contour.clone()
        },
        ..defaults
    }
}

fn hamiltonian(cfg: &RunConfig) -> Result<BandedHamiltonian, CliError> {
    Ok(BandedHamiltonian::new(cfg.basis()?, cfg.potential()?))
}

fn write_band(out: &mut String, name: &str, m: &BandedSymmetric<f64>) {
    let _ = writeln!(out, "# matrix: {name}");
    out.push_str("row,col,value\n");
    for (i, j, v) in m.upper_entries() {
        let _ = writeln!(out, "{i},{j},{}", fmt_real(v));
    }
}

/// `S`, `T`, and `r^i` for every power in the potential, upper band only.
pub fn matelem(cfg: &RunConfig, order: usize) -> Result<Report, CliError> {
    let basis = cfg.basis()?;
    let mut out = header("matelem", cfg);
    let _ = writeln!(out, "# order: {order}");
    write_band(&mut out, "S", &overlap_matrix(&basis, order)?);
    write_band(&mut out, "T", &kinetic_matrix(&basis, order)?);
    for (power, _) in &cfg.coefficients {
        write_band(&mut out, &format!("R^{power}"), &power_matrix(&basis, order, *power)?);
    }
    Ok(Report::ok(out))
}

/// `G^(N)(z)` with `N = blocks`.
pub fn green(cfg: &RunConfig, z: Complex64) -> Result<Report, CliError> {
    let ham = hamiltonian(cfg)?;
    let blocks = blockify_default(&ham);
    let g = green_matrix(&blocks, z, cfg.blocks, cfg.tol, cfg.k_max)?;
    let mut out = header("green", cfg);
    let _ = writeln!(out, "# z: {},{}", fmt_real(z.re), fmt_real(z.im));
    let _ = writeln!(out, "# blocks: N = {}, m = {}", cfg.blocks, blocks.block_size());
    let _ = writeln!(out, "# tail depth: {}", g.depth);
    let _ = writeln!(out, "# convergence estimate: {:e}", g.estimate);
    let _ = writeln!(out, "# defect: {:e}", g.defect(&blocks));
    let _ = writeln!(out, "# asymmetry: {:e}", g.asymmetry());
    out.push_str("row,col,re,im\n");
    for p in 0..g.values.nrows() {
        for q in 0..g.values.ncols() {
            let v = g.values[(p, q)];
            let _ = writeln!(out, "{p},{q},{},{}", fmt_real(v.re), fmt_real(v.im));
        }
    }
    Ok(Report::ok(out))
}

/// Located levels in the config window.
pub fn spectrum(cfg: &RunConfig) -> Result<Report, CliError> {
    let window = cfg.require_window()?;
    let ham = hamiltonian(cfg)?;
    let result = find_eigenvalues(&ham, window, cfg.blocks, &search_options(cfg))?;
    let mut out = header("spectrum", cfg);
    let _ = writeln!(out, "# levels: {}", result.levels.len());
    for r in &result.rejected {
        let _ = writeln!(out, "# rejected: E = {} shift = {:e} K = {}", fmt_real(r.energy), r.shift, r.depth);
    }
    for f in &result.flagged {
        let _ = writeln!(out, "# flagged: E = {} log|det| = {:.3}", fmt_real(f.energy), f.log_abs_det);
    }
    if !result.skipped.is_empty() {
        let _ = writeln!(out, "# skipped grid points: {}", result.skipped.len());
    }
    out.push_str("index,E,bracket_lo,bracket_hi,N,K,validated\n");
    for l in &result.levels {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            l.index,
            fmt_real(l.energy),
            fmt_real(l.bracket.0),
            fmt_real(l.bracket.1),
            l.blocks,
            l.depth,
            l.validated
        );
    }
    Ok(Report::ok(out))
}

/// Expansion coefficients and sampled radial functions of the located levels.
pub fn states(cfg: &RunConfig, r_max: f64, samples: usize) -> Result<Report, CliError> {
    if !(r_max > 0.0) || samples < 2 {
        return Err(CliError::Usage("--r-max must be positive and --samples at least 2".into()));
    }
    let window = cfg.require_window()?;
    let ham = hamiltonian(cfg)?;
    let opts = SearchOptions {
        validate: false,
        ..search_options(cfg)
    };
    let spectrum = find_eigenvalues(&ham, window, cfg.blocks, &opts)?;
    let states = (0..spectrum.levels.len())
        .map(|i| state_for_level(&ham, &spectrum, i, cfg.blocks, &opts.contour))
        .collect::<cs_green::Result<Vec<_>>>()?;

    let mut out = header("states", cfg);
    for (i, s) in states.iter().enumerate() {
        let _ = writeln!(
            out,
            "# state {i}: E = {} norm defect = {:e} rank defect = {:e} radius = {:e} nodes = {}",
            fmt_real(s.energy),
            s.norm_defect,
            s.rank_defect,
            s.radius,
            s.points
        );
    }
    out.push_str("# section: coefficients\nindex,n,c_n\n");
    for (i, s) in states.iter().enumerate() {
        for (n, c) in s.coefficients.iter().enumerate() {
            let _ = writeln!(out, "{i},{n},{}", fmt_real(*c));
        }
    }
    out.push_str("# section: wavefunctions\nindex,r,psi\n");
    let basis = ham.basis();
    for (i, s) in states.iter().enumerate() {
        for k in 0..samples {
            let r = r_max * k as f64 / (samples - 1) as f64;
            let psi = eigenstate_eval(basis, s, r)?;
            let _ = writeln!(out, "{i},{},{}", fmt_real(r), fmt_real(psi));
        }
    }
    Ok(Report::ok(out))
}

/// Levels in the window for each basis scale of the config sweep.
pub fn sweep(cfg: &RunConfig) -> Result<Report, CliError> {
    let window = cfg.require_window()?;
    let basis = cfg.basis()?;
    let opts = SearchOptions {
        validate: false,
        ..search_options(cfg)
    };
    let result = sweep_b(&basis, &cfg.potential()?, &cfg.sweep.scales(), cfg.blocks, window, &opts)?;
    let mut out = header("sweep", cfg);
    for (b, err) in &result.failures {
        let _ = writeln!(out, "# failed: b = {} ({err})", fmt_real(*b));
    }
    out.push_str("b,index,E\n");
    for r in &result.records {
        let _ = writeln!(out, "{},{},{}", fmt_real(r.b), r.index, fmt_real(r.energy));
    }
    Ok(Report::ok(out))
}

/// Recomputes both reference spectra and compares them row by row. The
/// config only supplies `blocks`, `k_max` and `tol`.
pub fn bench_table1(cfg: &RunConfig) -> Result<Report, CliError> {
    let columns: [(&str, u32, PotentialSpec, &[f64; 20]); 2] = [
        ("coulomb+linear D=3", 3, PotentialSpec::cornell(-1.0, 1.0), &CORNELL_3D),
        ("coulomb+oscillator D=2", 2, PotentialSpec::coulomb_oscillator(-1.0, 1.0), &COULOMB_OSCILLATOR_2D),
    ];
    let opts = SearchOptions {
        count: Some(20),
        validate: false,
        ..search_options(cfg)
    };
    let mut out = format!("# csgreen bench-table1\n# blocks: N = {}\n# tolerance: {REFERENCE_RTOL:e} relative\n", cfg.blocks);
    out.push_str("column,index,computed,reference,relative_error,status\n");
    let mut mismatches = 0;
    for (name, d, pot, reference) in columns {
        let ham = BandedHamiltonian::new(BasisSpec::new(d, 0, 1.0)?, pot);
        let window = (reference[0] - 0.5, reference[19] + 0.2);
        let found = find_eigenvalues(&ham, window, cfg.blocks, &opts)?.energies();
        for (i, want) in reference.iter().enumerate() {
            let (computed, err) = match found.get(i) {
                Some(e) => (fmt_real(*e), ((e - want) / want).abs()),
                None => ("missing".to_string(), f64::INFINITY),
            };
            let pass = err < REFERENCE_RTOL;
            if !pass {
                mismatches += 1;
            }
            let _ = writeln!(
                out,
                "{name},{i},{computed},{},{err:.3e},{}",
                fmt_real(*want),
                if pass { "pass" } else { "FAIL" }
            );
        }
    }
    let _ = writeln!(out, "# matched {}/40", 40 - mismatches);
    Ok(Report { text: out, mismatches })
}
