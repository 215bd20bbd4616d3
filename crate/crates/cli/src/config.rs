//! `key = value` run configuration.

use std::collections::BTreeMap;
use std::path::PathBuf;

use cs_green::{BasisSpec, PotentialSpec};

use crate::error::CliError;

/// Basis scale sweep: `steps` evenly spaced values from `b_min` to `b_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub b_min: f64,
    pub b_max: f64,
    pub steps: usize,
}

impl SweepSpec {
    pub fn scales(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.b_min];
        }
        let h = (self.b_max - self.b_min) / (self.steps - 1) as f64;
        (0..self.steps).map(|i| self.b_min + h * i as f64).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub dimension: u32,
    pub l: u32,
    pub b: f64,
    /// `(power, coefficient)` in increasing power.
    pub coefficients: Vec<(i32, f64)>,
    /// Index `N` of the last retained block row.
    pub blocks: usize,
    pub k_max: usize,
    pub tol: f64,
    pub window: Option<(f64, f64)>,
    pub sweep: SweepSpec,
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            dimension: 3,
            l: 0,
            b: 1.0,
            coefficients: Vec::new(),
            blocks: 3,
            k_max: 1 << 20,
            tol: 1e-12,
            window: None,
            sweep: SweepSpec {
                b_min: 0.5,
                b_max: 3.0,
                steps: 26,
            },
            out: None,
        }
    }
}

impl RunConfig {
    pub fn basis(&self) -> Result<BasisSpec, CliError> {
        Ok(BasisSpec::new(self.dimension, self.l, self.b)?)
    }

    pub fn potential(&self) -> Result<PotentialSpec, CliError> {
        Ok(PotentialSpec::new(self.coefficients.iter().copied())?)
    }

    pub fn require_window(&self) -> Result<(f64, f64), CliError> {
        self.window
            .ok_or_else(|| CliError::Usage("this command needs `window = E_lo, E_hi` in the config".into()))
    }

    /// Canonical `key = value` lines; parsing them back gives the same config.
    pub fn echo(&self) -> Vec<String> {
        let mut lines = vec![
            format!("dimension = {}", self.dimension),
            format!("l = {}", self.l),
            format!("b = {:e}", self.b),
        ];
        lines.extend(self.coefficients.iter().map(|(i, a)| format!("coeff.{i} = {a:e}")));
        lines.push(format!("blocks = {}", self.blocks));
        lines.push(format!("k_max = {}", self.k_max));
        lines.push(format!("tol = {:e}", self.tol));
        if let Some((lo, hi)) = self.window {
            lines.push(format!("window = {lo:e}, {hi:e}"));
        }
        lines.push(format!(
            "sweep = {:e}, {:e}, {}",
            self.sweep.b_min, self.sweep.b_max, self.sweep.steps
        ));
        if let Some(out) = &self.out {
            lines.push(format!("out = {}", out.display()));
        }
        lines
    }
}

fn bad(line: usize, message: impl Into<String>) -> CliError {
    CliError::Parse {
        line,
        message: message.into(),
    }
}

fn real(line: usize, key: &str, value: &str) -> Result<f64, CliError> {
    let v: f64 = value
        .parse()
        .map_err(|_| bad(line, format!("`{key}` expects a number, got `{value}`")))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(bad(line, format!("`{key}` must be finite")))
    }
}

fn integer<T: std::str::FromStr>(line: usize, key: &str, value: &str) -> Result<T, CliError> {
    value
        .parse()
        .map_err(|_| bad(line, format!("`{key}` expects a non-negative integer, got `{value}`")))
}

fn list(line: usize, key: &str, value: &str, len: usize) -> Result<Vec<String>, CliError> {
    let parts: Vec<String> = value.split(',').map(|s| s.trim().to_string()).collect();
    if parts.len() != len {
        return Err(bad(line, format!("`{key}` expects {len} comma-separated values")));
    }
    Ok(parts)
}

/// Parses a configuration. Unset keys keep their defaults, but at least one
/// `coeff.<i>` is required.
pub fn parse_config(text: &str) -> Result<RunConfig, CliError> {
    let mut cfg = RunConfig::default();
    let mut coefficients: BTreeMap<i32, f64> = BTreeMap::new();
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| bad(line, format!("expected `key = value`, got `{content}`")))?;
        let (key, value) = (key.trim(), value.trim());
        match key {
            "dimension" => {
                let d: u32 = integer(line, key, value)?;
                if d < 2 {
                    return Err(bad(line, "`dimension` must be at least 2"));
                }
                cfg.dimension = d;
            }
            "l" => cfg.l = integer(line, key, value)?,
            "b" => {
                let b = real(line, key, value)?;
                if b <= 0.0 {
                    return Err(bad(line, "`b` must be positive"));
                }
                cfg.b = b;
            }
            "blocks" => cfg.blocks = integer(line, key, value)?,
            "k_max" => cfg.k_max = integer(line, key, value)?,
            "tol" => {
                let tol = real(line, key, value)?;
                if tol <= 0.0 {
                    return Err(bad(line, "`tol` must be positive"));
                }
                cfg.tol = tol;
            }
            "window" => {
                let parts = list(line, key, value, 2)?;
                let lo = real(line, key, &parts[0])?;
                let hi = real(line, key, &parts[1])?;
                if lo >= hi {
                    return Err(bad(line, "`window` needs E_lo < E_hi"));
                }
                cfg.window = Some((lo, hi));
            }
            "sweep" => {
                let parts = list(line, key, value, 3)?;
                let b_min = real(line, key, &parts[0])?;
                let b_max = real(line, key, &parts[1])?;
                let steps: usize = integer(line, key, &parts[2])?;
                if b_min <= 0.0 || b_max < b_min || steps == 0 {
                    return Err(bad(line, "`sweep` needs 0 < b_min <= b_max and at least one step"));
                }
                cfg.sweep = SweepSpec { b_min, b_max, steps };
            }
            "out" => {
                if value.is_empty() {
                    return Err(bad(line, "`out` needs a path"));
                }
                cfg.out = Some(PathBuf::from(value));
            }
            _ => {
                let power = key
                    .strip_prefix("coeff.")
                    .ok_or_else(|| bad(line, format!("unknown key `{key}`")))?;
                let power: i32 = power
                    .parse()
                    .map_err(|_| bad(line, format!("`{key}`: power must be an integer")))?;
                if power < -1 {
                    return Err(bad(line, format!("`{key}`: power must be at least -1")));
                }
                coefficients.insert(power, real(line, key, value)?);
            }
        }
    }
    if coefficients.is_empty() {
        return Err(bad(
            last_line.max(1),
            "required keys missing: at least one `coeff.<i>` must be given",
        ));
    }
    cfg.coefficients = coefficients.into_iter().collect();
    if cfg.k_max <= cfg.blocks {
        return Err(bad(last_line, "`k_max` must exceed `blocks`"));
    }
    Ok(cfg)
}
