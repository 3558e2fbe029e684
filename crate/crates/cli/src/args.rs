use std::f64::consts::PI;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qshear_core::{DEFAULT_MARGIN, DEFAULT_TOL};

#[derive(Debug, Parser)]
#[command(name = "qshear", version, about = "Construct, combine and verify q-sheared harmonic maps of the unit disk")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a map from a preset or from a source series and a dilatation.
    Construct(ConstructArgs),
    /// Form convex combinations of maps over a t-sweep and check hypotheses.
    Combine(CombineArgs),
    /// Run geometric checks on a single map.
    Verify(VerifyArgs),
    /// Draw the images of circles and radial segments as SVG, CSV or JSON.
    Render(RenderArgs),
    /// Run the whole verification suite and emit one aggregate document.
    Report(ReportArgs),
}

/// Options shared by every command.
#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Deformation parameter in [1e-6, 1 - 1e-6], or `classical`.
    #[arg(long, default_value = "0.5")]
    pub q: String,
    /// Direction angle of the convexity kernel, in radians.
    #[arg(long, default_value_t = PI, allow_negative_numbers = true)]
    pub theta: f64,
    /// Truncation order N of every series (at least 8).
    #[arg(long)]
    pub order: Option<usize>,
    /// Outermost sampled radius, in (0, 1).
    #[arg(long, default_value_t = 0.95)]
    pub radius: f64,
    /// Angles per sampled circle.
    #[arg(long, default_value_t = 360)]
    pub samples: usize,
    /// Absolute comparison tolerance.
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    /// Margin for strict inequalities.
    #[arg(long, default_value_t = DEFAULT_MARGIN)]
    pub margin: f64,
    /// Output file. Relative paths resolve against `QSHEAR_OUT_DIR` when set;
    /// without this flag output goes to `QSHEAR_OUT_DIR/<command>.<ext>`, or
    /// to stdout when the variable is unset.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

/// Where a single map comes from.
#[derive(Debug, Clone, Args)]
#[group(required = true, multiple = false)]
pub struct MapSource {
    /// Named preset: half_plane, q_half_plane, example1, s3_f1, s3_f2.
    #[arg(long)]
    pub preset: Option<String>,
    /// Map JSON file as written by `construct`.
    #[arg(long)]
    pub map: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ConstructArgs {
    #[command(flatten)]
    pub common: Common,
    /// Named preset.
    #[arg(long, conflicts_with_all = ["source", "dilatation"], required_unless_present = "source")]
    pub preset: Option<String>,
    /// Series JSON for the analytic source F.
    #[arg(long, requires = "dilatation")]
    pub source: Option<PathBuf>,
    /// Series JSON for the dilatation omega.
    #[arg(long, requires = "source")]
    pub dilatation: Option<PathBuf>,
    /// Which combination of h and g equals F: `minus` (h - g) or `plus` (h + g).
    #[arg(long, default_value = "minus")]
    pub convention: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CombineCheck {
    Th1,
    Qth,
    None,
}

#[derive(Debug, Args)]
pub struct CombineArgs {
    #[command(flatten)]
    pub common: Common,
    /// Comma-separated map JSON files.
    #[arg(long, value_delimiter = ',', conflicts_with = "presets", required_unless_present = "presets")]
    pub maps: Vec<PathBuf>,
    /// Comma-separated preset names.
    #[arg(long, value_delimiter = ',')]
    pub presets: Vec<String>,
    /// Weight of the first map in a pair; comma-separate several values.
    #[arg(long, value_delimiter = ',', conflicts_with_all = ["t_sweep", "weights"])]
    pub t: Vec<f64>,
    /// Number of evenly spaced t values covering [0, 1].
    #[arg(long, conflicts_with = "weights")]
    pub t_sweep: Option<usize>,
    /// Explicit weights, one per map, summing to 1.
    #[arg(long, value_delimiter = ',')]
    pub weights: Vec<f64>,
    /// Hypothesis check to run on every combination.
    #[arg(long, value_enum, default_value_t = CombineCheck::None)]
    pub check: CombineCheck,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VerifyCheck {
    /// |omega| < 1 and positive Jacobian on the grid.
    Sense,
    /// Image of the outer circle is a simple curve.
    Univalence,
    /// Horizontal lines meet the image of the outer circle at most twice.
    Convexity,
    /// Re f > -1/2 on the grid.
    Range,
    /// Directional-convexity criterion on F = h - g.
    Cdr,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub source: MapSource,
    /// Checks to run.
    #[arg(long, value_enum, value_delimiter = ',', default_value = "sense,univalence,convexity")]
    pub checks: Vec<VerifyCheck>,
    /// Horizontal levels for the convexity check.
    #[arg(long, default_value_t = qshear_core::verify::DEFAULT_LEVELS)]
    pub levels: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RenderFormat {
    Svg,
    Csv,
    Json,
}

impl RenderFormat {
    pub fn extension(self) -> &'static str {
        match self {
            RenderFormat::Svg => "svg",
            RenderFormat::Csv => "csv",
            RenderFormat::Json => "json",
        }
    }
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub source: MapSource,
    #[arg(long, value_enum, default_value_t = RenderFormat::Svg)]
    pub format: RenderFormat,
    /// Number of circles, at radii radius * i / circles.
    #[arg(long, default_value_t = 10)]
    pub circles: usize,
    /// Number of radial segments.
    #[arg(long, default_value_t = 24)]
    pub radials: usize,
    /// Points per radial segment, origin included.
    #[arg(long, default_value_t = 64)]
    pub radial_samples: usize,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    #[command(flatten)]
    pub common: Common,
    /// Explicit t values; comma-separated.
    #[arg(long, value_delimiter = ',', conflicts_with = "t_sweep")]
    pub t: Vec<f64>,
    /// Number of evenly spaced t values covering [0, 1].
    #[arg(long, default_value_t = 11)]
    pub t_sweep: usize,
}
