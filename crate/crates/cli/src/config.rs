use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use spectral_instability_core::spectral::default_scale;
use spectral_instability_core::{DiscretizationConfig, GridSpec, OscillatorParams};

use crate::args::{Command, Format, RunArgs};
use crate::error::{CliError, CliResult};

pub const DEFAULT_BASIS_SIZE: usize = 200;
pub const DEFAULT_N_MAX: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CommandKind {
    Spectrum,
    Kappa,
    Asymptotics,
    Pseudospectrum,
    Semigroup,
    Verify,
}

impl CommandKind {
    pub fn name(self) -> &'static str {
        match self {
            CommandKind::Spectrum => "spectrum",
            CommandKind::Kappa => "kappa",
            CommandKind::Asymptotics => "asymptotics",
            CommandKind::Pseudospectrum => "pseudospectrum",
            CommandKind::Semigroup => "semigroup",
            CommandKind::Verify => "verify",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: CommandKind,
    pub params: OscillatorParams,
    pub discretization: DiscretizationConfig,
    pub grid: Option<GridSpec>,
    pub t_values: Option<Vec<f64>>,
    pub output_dir: PathBuf,
    pub format: Format,
    pub fit_window: Option<(usize, usize)>,
    pub acceptance: bool,
}

/// Entries of a `--config` file. Every key is optional and wins over the flag.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    k: Option<u32>,
    theta: Option<toml::Value>,
    basis_size: Option<usize>,
    n_max: Option<usize>,
    scale: Option<f64>,
    grid: Option<toml::Value>,
    t: Option<toml::Value>,
    out: Option<PathBuf>,
    format: Option<Format>,
    fit_window: Option<toml::Value>,
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Parses an angle in radians; anything carrying a degree unit is rejected.
pub fn parse_theta(s: &str) -> CliResult<f64> {
    let t = s.trim();
    let lower = t.to_ascii_lowercase();
    if lower.contains("deg") || t.contains('°') {
        return Err(usage(format!("theta '{s}': angles are given in radians, degrees are not accepted")));
    }
    let t = lower.strip_suffix("rad").unwrap_or(&lower).trim();
    t.parse::<f64>()
        .map_err(|_| usage(format!("theta '{s}' is not a number (radians)")))
}

fn parse_list(s: &str, what: &str) -> CliResult<Vec<f64>> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse::<f64>()
                .map_err(|_| usage(format!("{what}: '{x}' is not a number")))
        })
        .collect()
}

pub fn parse_grid(s: &str) -> CliResult<GridSpec> {
    let v = parse_list(s, "grid")?;
    grid_from(&v)
}

fn grid_from(v: &[f64]) -> CliResult<GridSpec> {
    if v.len() != 6 {
        return Err(usage("grid needs re0,re1,im0,im1,nx,ny"));
    }
    let count = |x: f64, name: &str| {
        if x >= 1.0 && x.fract() == 0.0 && x <= u32::MAX as f64 {
            Ok(x as usize)
        } else {
            Err(usage(format!("grid {name} must be a positive integer, got {x}")))
        }
    };
    Ok(GridSpec::new(v[0], v[1], v[2], v[3], count(v[4], "nx")?, count(v[5], "ny")?)?)
}

pub fn parse_times(s: &str) -> CliResult<Vec<f64>> {
    let v = parse_list(s, "t")?;
    check_times(v)
}

fn check_times(v: Vec<f64>) -> CliResult<Vec<f64>> {
    if v.is_empty() || v.iter().any(|t| !(*t > 0.0) || !t.is_finite()) {
        return Err(usage("t values must be positive and finite"));
    }
    Ok(v)
}

pub fn parse_window(s: &str) -> CliResult<(usize, usize)> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(usage("fit window needs lo,hi"));
    }
    let p = |x: &str| {
        x.trim()
            .parse::<usize>()
            .map_err(|_| usage(format!("fit window: '{x}' is not an index")))
    };
    window_from(p(parts[0])?, p(parts[1])?)
}

fn window_from(lo: usize, hi: usize) -> CliResult<(usize, usize)> {
    if lo == 0 || lo >= hi {
        return Err(usage(format!("fit window needs 1 <= lo < hi, got {lo},{hi}")));
    }
    Ok((lo, hi))
}

fn toml_numbers(v: &toml::Value, what: &str) -> CliResult<Vec<f64>> {
    match v {
        toml::Value::String(s) => parse_list(s, what),
        toml::Value::Array(a) => a
            .iter()
            .map(|x| match x {
                toml::Value::Float(f) => Ok(*f),
                toml::Value::Integer(i) => Ok(*i as f64),
                _ => Err(usage(format!("{what}: entries must be numbers"))),
            })
            .collect(),
        toml::Value::Float(f) => Ok(vec![*f]),
        toml::Value::Integer(i) => Ok(vec![*i as f64]),
        _ => Err(usage(format!("{what}: expected a number list"))),
    }
}

fn read_file_config(path: &Path) -> CliResult<FileConfig> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| usage(format!("config file {}: {e}", path.display())))
}

impl RunConfig {
    pub fn from_args(command: CommandKind, args: &RunArgs, acceptance: bool) -> CliResult<Self> {
        let file = match &args.config {
            Some(p) => read_file_config(p)?,
            None => FileConfig::default(),
        };
        let k = file.k.or(args.k).unwrap_or(1);
        let theta = match (&file.theta, &args.theta) {
            (Some(toml::Value::Float(f)), _) => *f,
            (Some(toml::Value::Integer(i)), _) => *i as f64,
            (Some(toml::Value::String(s)), _) => parse_theta(s)?,
            (Some(_), _) => return Err(usage("theta must be a number in radians")),
            (None, Some(s)) => parse_theta(s)?,
            (None, None) => 0.0,
        };
        let params = OscillatorParams::new(k, theta)?;
        let basis_size = file.basis_size.or(args.basis_size).unwrap_or(DEFAULT_BASIS_SIZE);
        let n_max = file.n_max.or(args.n_max).unwrap_or(DEFAULT_N_MAX);
        let scale = match file.scale.or(args.scale) {
            Some(s) => s,
            None => default_scale(k, n_max.max(1)),
        };
        let discretization = DiscretizationConfig::new(basis_size, scale, n_max)?;
        let grid = match (&file.grid, &args.grid) {
            (Some(v), _) => Some(grid_from(&toml_numbers(v, "grid")?)?),
            (None, Some(s)) => Some(parse_grid(s)?),
            (None, None) => None,
        };
        let t_values = match (&file.t, &args.t) {
            (Some(v), _) => Some(check_times(toml_numbers(v, "t")?)?),
            (None, Some(s)) => Some(parse_times(s)?),
            (None, None) => None,
        };
        let fit_window = match (&file.fit_window, &args.fit_window) {
            (Some(v), _) => {
                let w = toml_numbers(v, "fit_window")?;
                if w.len() != 2 || w.iter().any(|x| *x < 0.0 || x.fract() != 0.0) {
                    return Err(usage("fit_window needs two indices"));
                }
                Some(window_from(w[0] as usize, w[1] as usize)?)
            }
            (None, Some(s)) => Some(parse_window(s)?),
            (None, None) => None,
        };
        let output_dir = file.out.or_else(|| args.out.clone()).unwrap_or_else(|| PathBuf::from("."));
        let format = file.format.or(args.format).unwrap_or(Format::Json);
        let cfg = Self {
            command,
            params,
            discretization,
            grid,
            t_values,
            output_dir,
            format,
            fit_window,
            acceptance,
        };
        cfg.check_required()?;
        Ok(cfg)
    }

    fn check_required(&self) -> CliResult<()> {
        match self.command {
            CommandKind::Pseudospectrum if self.grid.is_none() => {
                Err(usage("pseudospectrum needs --grid re0,re1,im0,im1,nx,ny"))
            }
            CommandKind::Semigroup if self.t_values.is_none() => Err(usage("semigroup needs --t t1,t2,...")),
            _ => Ok(()),
        }
    }
}

pub fn resolve(command: &Command) -> CliResult<RunConfig> {
    match command {
        Command::Spectrum(a) => RunConfig::from_args(CommandKind::Spectrum, a, false),
        Command::Kappa(a) => RunConfig::from_args(CommandKind::Kappa, a, false),
        Command::Asymptotics(a) => RunConfig::from_args(CommandKind::Asymptotics, a, false),
        Command::Pseudospectrum(a) => RunConfig::from_args(CommandKind::Pseudospectrum, a, false),
        Command::Semigroup(a) => RunConfig::from_args(CommandKind::Semigroup, a, false),
        Command::Verify(v) => RunConfig::from_args(CommandKind::Verify, &v.run, v.acceptance),
    }
}
