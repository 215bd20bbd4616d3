use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use cs_green_cli::{commands, parse_config, CliError, Report, RunConfig};
use num_complex::Complex64;

#[derive(Parser)]
#[command(name = "csgreen", version, about = "Bound states from Coulomb-Sturmian Green's matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Io {
    /// Run configuration (`key = value` lines).
    #[arg(long)]
    config: PathBuf,
    /// Output file; overrides `out` in the config. Defaults to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Overlap, kinetic and power matrices.
    Matelem {
        #[command(flatten)]
        io: Io,
        /// Matrix order.
        #[arg(long, default_value_t = 20)]
        order: usize,
    },
    /// Green's matrix at one complex energy.
    Green {
        #[command(flatten)]
        io: Io,
        /// Complex energy as `re,im`.
        #[arg(long, value_parser = parse_z, allow_hyphen_values = true)]
        z: Complex64,
    },
    /// Eigenvalues in the config window.
    Spectrum {
        #[command(flatten)]
        io: Io,
    },
    /// Eigenvector coefficients and sampled radial functions.
    States {
        #[command(flatten)]
        io: Io,
        #[arg(long, default_value_t = 10.0)]
        r_max: f64,
        #[arg(long, default_value_t = 201)]
        samples: usize,
    },
    /// Eigenvalues over the config sweep of basis scales.
    Sweep {
        #[command(flatten)]
        io: Io,
    },
    /// Reference spectra check; exits with 3 on any mismatch.
    #[command(name = "bench-table1")]
    BenchTable1 {
        /// Optional config supplying `blocks`, `k_max` and `tol`.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_z(text: &str) -> Result<Complex64, String> {
    let (re, im) = text.split_once(',').ok_or("expected `re,im`")?;
    let re: f64 = re.trim().parse().map_err(|_| format!("bad real part `{re}`"))?;
    let im: f64 = im.trim().parse().map_err(|_| format!("bad imaginary part `{im}`"))?;
    Ok(Complex64::new(re, im))
}

fn load(path: &Path) -> Result<RunConfig, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_config(&text)
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    let Some(path) = out else {
        print!("{text}");
        return Ok(());
    };
    fs::write(path, text).map_err(|source| {
        let _ = fs::remove_file(path);
        CliError::Io {
            path: path.display().to_string(),
            source,
        }
    })
}

fn run(command: Command) -> Result<Report, CliError> {
    let (report, out, cfg_out) = match command {
        Command::Matelem { io, order } => {
            let cfg = load(&io.config)?;
            (commands::matelem(&cfg, order)?, io.out, cfg.out)
        }
        Command::Green { io, z } => {
            let cfg = load(&io.config)?;
            (commands::green(&cfg, z)?, io.out, cfg.out)
        }
        Command::Spectrum { io } => {
            let cfg = load(&io.config)?;
            (commands::spectrum(&cfg)?, io.out, cfg.out)
        }
        Command::States { io, r_max, samples } => {
            let cfg = load(&io.config)?;
            (commands::states(&cfg, r_max, samples)?, io.out, cfg.out)
        }
        Command::Sweep { io } => {
            let cfg = load(&io.config)?;
            (commands::sweep(&cfg)?, io.out, cfg.out)
        }
        Command::BenchTable1 { config, out } => {
            let cfg = match config {
                Some(path) => load(&path)?,
                None => RunConfig::default(),
            };
            (commands::bench_table1(&cfg)?, out, cfg.out)
        }
    };
    emit(&report.text, out.or(cfg_out).as_deref())?;
    Ok(report)
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return ExitCode::from(if err.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(report) if report.mismatches > 0 => {
            eprintln!("error: {}", CliError::Mismatch(report.mismatches));
            ExitCode::from(3)
        }
        Ok(_) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
