use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "spectral-instability", version, about = "Spectra, instability indices, pseudospectra and semigroup series of A(2k,θ) = -d²/dx² + e^{iθ}x^{2k}")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Eigenvalues and residuals of the Galerkin matrix
    Spectrum(RunArgs),
    /// Instability indices and the exponential rate fit
    Kappa(RunArgs),
    /// Closed-form asymptotic constants
    Asymptotics(RunArgs),
    /// Resolvent norms on a complex grid
    Pseudospectrum(RunArgs),
    /// Projection-series reports per time value
    Semigroup(RunArgs),
    /// Consistency checks for one (k, θ), or the full acceptance suite
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Both,
}

impl Format {
    pub fn json(self) -> bool {
        matches!(self, Format::Json | Format::Both)
    }

    pub fn csv(self) -> bool {
        matches!(self, Format::Csv | Format::Both)
    }
}

#[derive(Clone, Debug, Default, Args)]
pub struct RunArgs {
    /// Potential half-degree (potential x^{2k})
    #[arg(long)]
    pub k: Option<u32>,
    /// Rotation angle in radians
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<String>,
    #[arg(long)]
    pub basis_size: Option<usize>,
    #[arg(long)]
    pub n_max: Option<usize>,
    /// Basis dilation α (default from the Weyl law)
    #[arg(long)]
    pub scale: Option<f64>,
    /// re0,re1,im0,im1,nx,ny
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<String>,
    /// Comma-separated times
    #[arg(long)]
    pub t: Option<String>,
    /// Output directory
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// TOML file whose entries override the flags
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// lo,hi index window of the rate fit
    #[arg(long)]
    pub fit_window: Option<String>,
}

#[derive(Clone, Debug, Default, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// Run the complete acceptance suite instead of the per-parameter checks
    #[arg(long)]
    pub acceptance: bool,
}
