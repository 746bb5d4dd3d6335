//! Command-line front end: argument parsing, validation and artifact output.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::gaps::{delone_verdict, gap_profile, window_gaps, DeloneOptions};
use crate::geometry::{sector_count, SectorSpec};
use crate::parse::{parse_custom_values, parse_real_list, parse_sector};
use crate::phase::{Alpha, FamilyKind, PhaseFamily};
use crate::render::{render_spiral, RenderOptions};
use crate::report::{format_g12, to_json, write_csv, write_points_csv};
use crate::spiral::{generate, generate_range, window, AnnulusWindow, SpiralPoint};
use crate::stats::{gap_histogram, pair_correlation, uniform_edges};

#[derive(Debug, Parser)]
#[command(name = "spiral-delone", version, about = "Spiral point sets z_n = sqrt(n) exp(2 pi i xi_n)")]
struct Cli {
    #[command(subcommand)]
    command: CliCommand,
}

#[derive(Debug, Subcommand)]
enum CliCommand {
    /// Points z_1..z_N
    Generate {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        n_max: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Indices and points of the annulus R <= |z| < R + h
    Window {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        r: f64,
        /// defaults to 1/alpha
        #[arg(long)]
        h: Option<f64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Gaps mod 1 in one window (--r) or over integer radii (--r-max)
    Gaps {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, conflicts_with = "r_max")]
        r: Option<f64>,
        #[arg(long, default_value_t = 1.0)]
        r_min: f64,
        #[arg(long)]
        r_max: Option<f64>,
        #[arg(long)]
        h: Option<f64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Delone certificate for xi_n = alpha sqrt(n) up to R_max
    Delone {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        r_max: f64,
        #[arg(long, default_value_t = 0.05)]
        eps: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Sector count and density ratio
    Density {
        #[command(flatten)]
        family: FamilyArgs,
        /// a,b,c,d: turns [a, b), radii [c, d)
        #[arg(long)]
        sector: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Rescaled gap histogram or pair correlation of sqrt(n) mod 1
    Stats {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, value_enum)]
        kind: StatsKind,
        #[arg(long)]
        n_max: u64,
        /// histogram bin edges (comma list); defaults to 0, 0.1, ..., 4.9
        #[arg(long)]
        bins: Option<String>,
        /// pair-correlation half-widths (comma list)
        #[arg(long, default_value = "0.5,1,2")]
        s: String,
        #[arg(long)]
        include_squares: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// SVG scatter plot
    Render {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        n_max: u64,
        /// view radius; points beyond it are not drawn
        #[arg(long)]
        r_max: Option<f64>,
        #[arg(long)]
        annuli: bool,
        /// ring spacing, defaults to 1/alpha
        #[arg(long)]
        h: Option<f64>,
        #[arg(long, default_value_t = 0.3)]
        point_radius: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Debug, Args)]
struct FamilyArgs {
    #[arg(long, value_enum, default_value_t = FamilyFlag::Sqrt)]
    family: FamilyFlag,
    /// decimal literal, sqrt_pi or sqrt_golden
    #[arg(long, default_value = "1")]
    alpha: String,
    #[arg(long)]
    beta: Option<f64>,
    /// file of phase values for --family custom
    #[arg(long)]
    values: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyFlag {
    Sqrt,
    Linear,
    Power,
    Custom,
}

#[derive(Debug, Args)]
struct OutputArgs {
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// output file (default stdout)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StatsKind {
    GapHistogram,
    PairCorrelation,
}

/// A validated invocation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    pub family: PhaseFamily,
    pub format: Format,
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "subcommand", rename_all = "snake_case")]
pub enum Command {
    Generate { n_max: u64 },
    Window { r: f64, h: f64 },
    Gaps { r: Option<f64>, r_min: f64, r_max: Option<f64>, h: f64 },
    Delone { r_max: f64, eps: f64 },
    Density { sector: SectorSpec },
    Stats { kind: StatsKind, n_max: u64, bins: Vec<f64>, s: Vec<f64>, include_squares: bool },
    Render { n_max: u64, view_radius: Option<f64>, annulus_width: Option<f64>, point_radius: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointsOutput {
    pub family: PhaseFamily,
    pub points: Vec<SpiralPoint>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowOutput {
    pub family: PhaseFamily,
    pub window: AnnulusWindow,
    pub points: Vec<SpiralPoint>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityOutput {
    pub family: PhaseFamily,
    pub sector: SectorSpec,
    pub count: u64,
    /// `(b − a)(d² − c²)`, the count at density 1/π
    pub expected: f64,
    pub ratio: f64,
}

/// Failure of one invocation, carrying its exit status.
#[derive(Debug)]
pub enum CliError {
    /// bad flags or values (exit 2)
    Usage(String),
    /// I/O or encoding failure (exit 1)
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Internal(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Internal(m) => f.write_str(m),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn build_family(args: &FamilyArgs) -> Result<PhaseFamily, CliError> {
    let alpha = || Alpha::parse(&args.alpha);
    let family = match args.family {
        FamilyFlag::Sqrt => PhaseFamily::sqrt_linear(alpha()?)?,
        FamilyFlag::Linear => PhaseFamily::linear(alpha()?)?,
        FamilyFlag::Power => {
            let beta = args.beta.ok_or_else(|| usage("--family power needs --beta"))?;
            PhaseFamily::power(alpha()?, beta)?
        }
        FamilyFlag::Custom => {
            let path = args.values.as_ref().ok_or_else(|| usage("--family custom needs --values <path>"))?;
            let text = std::fs::read_to_string(path)
                .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
            PhaseFamily::custom(parse_custom_values(&text)?)?
        }
    };
    if args.beta.is_some() && args.family != FamilyFlag::Power {
        return Err(usage("--beta applies to --family power only"));
    }
    if args.values.is_some() && args.family != FamilyFlag::Custom {
        return Err(usage("--values applies to --family custom only"));
    }
    Ok(family)
}

/// Default annulus width `1/α`.
fn default_h(family: &PhaseFamily, h: Option<f64>) -> Result<f64, CliError> {
    match (h, family.alpha()) {
        (Some(h), _) => Ok(h),
        (None, Some(a)) => Ok(1.0 / a.value()),
        (None, None) => Err(usage("--h is required for this family")),
    }
}

fn pick_format(requested: Option<Format>, default: Format, allowed: &[Format]) -> Result<Format, CliError> {
    let f = requested.unwrap_or(default);
    if allowed.contains(&f) {
        Ok(f)
    } else {
        Err(usage(format!("format {f:?} is not available for this subcommand").to_lowercase()))
    }
}

const TABLES: [Format; 2] = [Format::Csv, Format::Json];

impl RunConfig {
    fn from_cli(cli: Cli) -> Result<Self, CliError> {
        let fam = match &cli.command {
            CliCommand::Generate { family, .. }
            | CliCommand::Window { family, .. }
            | CliCommand::Gaps { family, .. }
            | CliCommand::Delone { family, .. }
            | CliCommand::Density { family, .. }
            | CliCommand::Stats { family, .. }
            | CliCommand::Render { family, .. } => build_family(family)?,
        };
        let (output, command, format) = match cli.command {
            CliCommand::Generate { n_max, output, .. } => {
                let f = pick_format(output.format, Format::Csv, &TABLES)?;
                (output, Command::Generate { n_max }, f)
            }
            CliCommand::Window { r, h, output, .. } => {
                let f = pick_format(output.format, Format::Json, &TABLES)?;
                let h = default_h(&fam, h)?;
                (output, Command::Window { r, h }, f)
            }
            CliCommand::Gaps { r, r_min, r_max, h, output, .. } => {
                let f = pick_format(output.format, Format::Json, &TABLES)?;
                if r.is_none() && r_max.is_none() {
                    return Err(usage("gaps needs --r or --r-max"));
                }
                let h = default_h(&fam, h)?;
                (output, Command::Gaps { r, r_min, r_max, h }, f)
            }
            CliCommand::Delone { r_max, eps, output, .. } => {
                let f = pick_format(output.format, Format::Json, &[Format::Json])?;
                (output, Command::Delone { r_max, eps }, f)
            }
            CliCommand::Density { sector, output, .. } => {
                let f = pick_format(output.format, Format::Json, &TABLES)?;
                (output, Command::Density { sector: parse_sector(&sector)? }, f)
            }
            CliCommand::Stats { kind, n_max, bins, s, include_squares, output, .. } => {
                let f = pick_format(output.format, Format::Json, &TABLES)?;
                let bins = match bins {
                    Some(text) => parse_real_list(&text)?,
                    None => uniform_edges(0.1, 50),
                };
                let s = parse_real_list(&s)?;
                (output, Command::Stats { kind, n_max, bins, s, include_squares }, f)
            }
            CliCommand::Render { n_max, r_max, annuli, h, point_radius, output, .. } => {
                let f = pick_format(output.format, Format::Svg, &[Format::Svg])?;
                let annulus_width = if annuli { Some(default_h(&fam, h)?) } else { None };
                let cmd = Command::Render { n_max, view_radius: r_max, annulus_width, point_radius };
                (output, cmd, f)
            }
        };
        Ok(RunConfig {
            family: fam,
            command,
            format,
            out: output.out,
        })
    }

    /// Parses command-line arguments (program name first).
    pub fn parse<I, T>(args: I) -> Result<Self, clap::Error>
    where
        I: IntoIterator<Item = T>,
        T: Into<OsString> + Clone,
    {
        Cli::try_parse_from(args).and_then(|cli| {
            RunConfig::from_cli(cli).map_err(|e| clap::Error::raw(clap::error::ErrorKind::ValueValidation, e))
        })
    }

    /// Runs the subcommand and returns the artifact bytes.
    pub fn execute(&self) -> Result<Vec<u8>, CliError> {
        let family = &self.family;
        match &self.command {
            Command::Generate { n_max } => {
                let points = generate(family, *n_max)?;
                match self.format {
                    Format::Csv => csv_bytes(|w| write_points_csv(w, &points)),
                    _ => json("points", &PointsOutput { family: family.clone(), points }),
                }
            }
            Command::Window { r, h } => {
                let w = window(*r, *h)?;
                let points = generate_range(family, w.indices())?;
                match self.format {
                    Format::Csv => csv_bytes(|out| write_points_csv(out, &points)),
                    _ => json("window", &WindowOutput { family: family.clone(), window: w, points }),
                }
            }
            Command::Gaps { r: Some(r), h, .. } => {
                let rep = window_gaps(family, *r, *h)?;
                match self.format {
                    Format::Csv => csv_bytes(|out| {
                        let rows = rep.gaps.iter().enumerate().map(|(j, g)| vec![(j + 1).to_string(), format_g12(*g)]);
                        write_csv(out, &["j", "gap"], rows)
                    }),
                    _ => json("gap_report", &rep),
                }
            }
            Command::Gaps { r: None, r_min, r_max, h } => {
                let r_max = r_max.expect("validated");
                if !(r_min.is_finite() && r_max.is_finite() && *r_min >= 1.0 && *r_min <= r_max) {
                    return Err(usage("gaps needs 1 <= --r-min <= --r-max"));
                }
                let grid: Vec<f64> = (0..)
                    .map(|k| r_min + k as f64)
                    .take_while(|&r| r <= r_max)
                    .collect();
                let profile = gap_profile(family, *h, &grid)?;
                match self.format {
                    Format::Csv => csv_bytes(|out| {
                        let rows = profile.entries.iter().map(|e| {
                            vec![
                                format_g12(e.r),
                                e.report.window.count.to_string(),
                                format_g12(e.report.min_gap),
                                format_g12(e.report.scaled_min_gap),
                                u8::from(e.excluded).to_string(),
                            ]
                        });
                        write_csv(out, &["r", "count", "min_gap", "scaled_min_gap", "excluded"], rows)
                    }),
                    _ => json("gap_profile", &profile),
                }
            }
            Command::Delone { r_max, eps } => {
                let options = DeloneOptions { eps: *eps, ..DeloneOptions::default() };
                json("delone_report", &delone_verdict(family, *r_max, &options)?)
            }
            Command::Density { sector } => {
                let count = sector_count(family, sector)?;
                let expected = sector.normalized_area();
                if !(expected > 0.0) {
                    return Err(Error::ZeroMeasure.into());
                }
                let out = DensityOutput {
                    family: family.clone(),
                    sector: *sector,
                    count,
                    expected,
                    ratio: count as f64 / expected,
                };
                match self.format {
                    Format::Csv => csv_bytes(|w| {
                        let row = vec![out.count.to_string(), format_g12(out.expected), format_g12(out.ratio)];
                        write_csv(w, &["count", "expected", "ratio"], [row])
                    }),
                    _ => json("density", &out),
                }
            }
            Command::Stats { kind: StatsKind::GapHistogram, n_max, bins, .. } => {
                let h = gap_histogram(family, *n_max, bins)?;
                match self.format {
                    Format::Csv => csv_bytes(|w| {
                        let rows = h.bin_edges.iter().zip(&h.counts).map(|(e, c)| vec![format_g12(*e), c.to_string()]);
                        write_csv(w, &["bin_start", "count"], rows)
                    }),
                    _ => json("gap_histogram", &h),
                }
            }
            Command::Stats { kind: StatsKind::PairCorrelation, n_max, s, include_squares, .. } => {
                if family.kind() != FamilyKind::SqrtLinear || family.alpha().map(Alpha::value) != Some(1.0) {
                    return Err(usage("pair correlation is defined for sqrt(n) mod 1 (--family sqrt --alpha 1)"));
                }
                let rep = pair_correlation(*n_max, s, *include_squares)?;
                match self.format {
                    Format::Csv => csv_bytes(|w| {
                        let rows = (0..rep.s_values.len()).map(|i| {
                            vec![
                                format_g12(rep.s_values[i]),
                                format_g12(rep.statistics[i]),
                                format_g12(rep.expected[i]),
                            ]
                        });
                        write_csv(w, &["s", "r2", "expected"], rows)
                    }),
                    _ => json("pair_correlation", &rep),
                }
            }
            Command::Render { n_max, view_radius, annulus_width, point_radius } => {
                let points = generate(family, *n_max)?;
                let options = RenderOptions {
                    view_radius: *view_radius,
                    annulus_width: *annulus_width,
                    point_radius: *point_radius,
                    ..RenderOptions::default()
                };
                Ok(render_spiral(&points, &options)?.into_bytes())
            }
        }
    }
}

fn json<T: Serialize>(kind: &str, value: &T) -> Result<Vec<u8>, CliError> {
    to_json(kind, value)
        .map(String::into_bytes)
        .map_err(|e| CliError::Internal(e.to_string()))
}

fn csv_bytes(f: impl FnOnce(&mut Vec<u8>) -> crate::Result<()>) -> Result<Vec<u8>, CliError> {
    let mut buf = Vec::new();
    f(&mut buf).map_err(|e| CliError::Internal(e.to_string()))?;
    Ok(buf)
}

/// Runs one invocation, writing artifacts to `--out` or `stdout` and
/// diagnostics to `stderr`. Returns the exit status.
pub fn run_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match Cli::try_parse_from(args) {
        Ok(cli) => RunConfig::from_cli(cli),
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = stdout.write_all(text.as_bytes());
                    0
                }
                _ => {
                    let _ = stderr.write_all(text.as_bytes());
                    2
                }
            };
        }
    };
    let result = config.and_then(|config| {
        let bytes = config.execute()?;
        match &config.out {
            Some(path) => std::fs::write(path, &bytes)
                .map_err(|e| CliError::Internal(format!("cannot write {}: {e}", path.display()))),
            None => stdout
                .write_all(&bytes)
                .map_err(|e| CliError::Internal(format!("cannot write output: {e}"))),
        }
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

/// [`run_with`] on the process's standard streams.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}
