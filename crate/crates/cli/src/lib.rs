//! `resokit` command-line front end. Each subcommand is a thin adapter over
//! the library: parse config, call, serialize.
//!
//! Exit codes: 0 success or pass, 1 domain failure (spec fail, infeasible,
//! instability), 2 usage or config error.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod output;

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug)]
pub enum CliError {
    /// Bad arguments or config; exit 2.
    Usage(String),
    /// The inputs are fine but the answer is "no"; exit 1.
    Domain(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Domain(_) => EXIT_DOMAIN,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Domain(m) => m,
        }
    }
}

impl From<resokit::Error> for CliError {
    fn from(e: resokit::Error) -> Self {
        use resokit::Error as E;
        let msg = e.to_string();
        match e {
            E::Infeasible(_)
            | E::FabConstraint { .. }
            | E::Unstable { .. }
            | E::ZeroBias
            | E::QExtraction(_)
            | E::NoRoot { .. }
            | E::NoConvergence { .. }
            | E::NotPositiveDefinite(_)
            | E::RigidBodyCount { .. }
            | E::AmbiguousOrder { .. }
            | E::SingularDrivePoint { .. } => CliError::Domain(msg),
            _ => CliError::Usage(msg),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

fn existing_file(s: &str) -> std::result::Result<PathBuf, String> {
    let p = PathBuf::from(s);
    if p.is_file() {
        Ok(p)
    } else {
        Err(format!("no such file: {s}"))
    }
}

fn quantity(
    unit: resokit::units::Unit,
) -> impl Fn(&str) -> std::result::Result<f64, String> + Clone {
    move |s: &str| resokit::units::parse_quantity(s, unit).map_err(|e| e.to_string())
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

#[derive(Debug, Parser)]
#[command(
    name = "resokit",
    version,
    about = "Modal analysis, equivalent circuits and design sizing for electrostatic MEMS resonators",
    long_about = "Config files are JSON with a `schema_version` field (currently 1). Quantities \
                  accept SI numbers or unit-suffixed strings such as \"90nm\" or \"1.19um\"."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Analytic and FEM frequencies side by side with their relative delta.
    Analyze(AnalyzeArgs),
    /// Raw FEM modes (CSV or JSON), optionally with mode-shape CSVs.
    Fem(FemArgs),
    /// Equivalent circuit, transmission spectrum CSV and extracted Q.
    Respond(RespondArgs),
    /// MOS vs capacitive output current over uniform down-scaling.
    CompareDetection(DetectionArgs),
    /// Check a design, candidate or optimizer result against a profile.
    Check(CheckArgs),
    /// Search a design space for the lowest motional resistance.
    Optimize(OptimizeArgs),
    /// Released gap and fabrication rule checks.
    Gap(GapArgs),
    /// List the built-in application profiles.
    Profiles(ProfilesArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CurveFormat {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Write the main output here instead of stdout.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

/// Numeric overrides on top of a design config.
#[derive(Debug, Args, Default)]
pub struct Overrides {
    /// DC bias voltage, e.g. 3V.
    #[arg(long, value_parser = quantity(resokit::units::Unit::Volt))]
    pub bias: Option<f64>,
    /// Drawn electrode gap, e.g. 80nm.
    #[arg(long, value_parser = quantity(resokit::units::Unit::Meter))]
    pub gap: Option<f64>,
    /// Assumed quality factor.
    #[arg(long)]
    pub q: Option<f64>,
    /// Sacrificial tunnel depth, e.g. 1.19um.
    #[arg(long, value_parser = quantity(resokit::units::Unit::Meter))]
    pub tunnel_depth: Option<f64>,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Design or geometry config (JSON).
    #[arg(value_parser = existing_file)]
    pub config: PathBuf,
    #[arg(long, value_enum, default_value_t = TableFormat::Text)]
    pub format: TableFormat,
    /// Modes to compare (beam: flexural orders 1..N; disk: angular orders 2..N+1).
    #[arg(long)]
    pub modes: Option<usize>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct FemArgs {
    #[arg(value_parser = existing_file)]
    pub config: PathBuf,
    #[arg(long, value_enum, default_value_t = CurveFormat::Csv)]
    pub format: CurveFormat,
    /// Beam modes to solve (disks always report the elastic modes found).
    #[arg(long, default_value_t = 6)]
    pub modes: usize,
    /// Directory for one `mode_<i>.csv` shape file per mode.
    #[arg(long)]
    pub shape_dir: Option<PathBuf>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct RespondArgs {
    #[arg(value_parser = existing_file)]
    pub config: PathBuf,
    /// Grid points (default: config `spectrum_points`, else 2001).
    #[arg(long)]
    pub points: Option<usize>,
    /// Relative half-span around f0 (default 6/Q).
    #[arg(long)]
    pub span: Option<f64>,
    /// Write the equivalent circuit JSON here.
    #[arg(long)]
    pub circuit: Option<PathBuf>,
    /// Write a SPICE-style netlist here.
    #[arg(long)]
    pub netlist: Option<PathBuf>,
    /// Summary format (printed to stderr when the CSV goes to stdout).
    #[arg(long, value_enum, default_value_t = TableFormat::Text)]
    pub format: TableFormat,
    #[command(flatten)]
    pub overrides: Overrides,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct DetectionArgs {
    /// Design config with MOS detection.
    #[arg(value_parser = existing_file)]
    pub config: PathBuf,
    /// Comma-separated scale factors starting at 1 and descending.
    #[arg(long, value_delimiter = ',')]
    pub scales: Option<Vec<f64>>,
    #[command(flatten)]
    pub overrides: Overrides,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("target").required(true).args(["profile", "profile_file"])))]
pub struct ProfileChoice {
    /// Built-in profile name (see `resokit profiles`).
    #[arg(long)]
    pub profile: Option<String>,
    /// Profile JSON file.
    #[arg(long, value_parser = existing_file)]
    pub profile_file: Option<PathBuf>,
    /// Tolerances JSON (`{}` means exact matching; default ±0.5%).
    #[arg(long, value_parser = existing_file)]
    pub tolerances: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    /// Design config, candidate JSON, or `optimize` output.
    #[arg(value_parser = existing_file)]
    pub input: PathBuf,
    #[command(flatten)]
    pub profile: ProfileChoice,
    #[arg(long, value_enum, default_value_t = TableFormat::Text)]
    pub format: TableFormat,
    #[command(flatten)]
    pub overrides: Overrides,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct OptimizeArgs {
    /// Design-space bounds config (JSON).
    #[arg(value_parser = existing_file)]
    pub bounds: PathBuf,
    #[command(flatten)]
    pub profile: ProfileChoice,
    /// Process model JSON (overrides the bounds config).
    #[arg(long, value_parser = existing_file)]
    pub process: Option<PathBuf>,
    #[arg(long)]
    pub grid_points: Option<usize>,
    #[arg(long)]
    pub max_results: Option<usize>,
    #[arg(long, value_enum, default_value_t = TableFormat::Json)]
    pub format: TableFormat,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct GapArgs {
    /// Design config; supplies drawn gap, tunnel depth and process.
    #[arg(value_parser = existing_file)]
    pub config: Option<PathBuf>,
    #[arg(long, value_parser = quantity(resokit::units::Unit::Meter))]
    pub drawn: Option<f64>,
    #[arg(long, value_parser = quantity(resokit::units::Unit::Meter))]
    pub tunnel_depth: Option<f64>,
    /// Process model JSON.
    #[arg(long, value_parser = existing_file)]
    pub process: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = TableFormat::Text)]
    pub format: TableFormat,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ProfilesArgs {
    #[arg(long, value_enum, default_value_t = TableFormat::Text)]
    pub format: TableFormat,
}

/// Runs the CLI and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match commands::dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.code()
        }
    }
}
