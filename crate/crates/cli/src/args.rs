use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "rankmon",
    version,
    about = "Temporal-logic checks over daily ranking signals"
)]
pub struct Cli {
    /// Worker threads for per-record evaluation (default: all cores).
    #[arg(long, global = true, value_name = "N")]
    pub jobs: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check every record of a dataset against one formula or property.
    Check(CheckArgs),
    /// Satisfaction rate of each property per category.
    Rates(TableArgs),
    /// Mean impressions, clicks and purchases of satisfying records.
    Metrics(TableArgs),
    /// Write a synthetic dataset with planted patterns.
    Generate(GenerateArgs),
    /// Ground a formula over a fixed number of days.
    Expand(ExpandArgs),
    /// Cluster position vectors with k-means.
    Kmeans(KmeansArgs),
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Dataset file (.csv, or .jsonl for JSON lines).
    #[arg(short = 'i', long = "input", value_name = "FILE")]
    pub input: Option<PathBuf>,

    /// Dataset file, as a positional argument.
    #[arg(value_name = "DATASET", conflicts_with = "input")]
    pub positional: Option<PathBuf>,

    /// Positions per record.
    #[arg(long, default_value_t = rankmon::ingest::DEFAULT_DAYS, value_name = "N")]
    pub days: usize,
}

/// Property parameters, either as `--param name=value` or the shorthands.
#[derive(Debug, Args, Default)]
pub struct ParamArgs {
    /// Parameter override, `name=value`. Repeatable.
    #[arg(long = "param", value_name = "NAME=VALUE")]
    pub params: Vec<String>,
    /// Window length
    #[arg(long, value_name = "DAYS")]
    pub w: Option<f64>,
    /// Noise tolerance on the daily change
    #[arg(long, alias = "eps")]
    pub epsilon: Option<f64>,
    /// Jump size in positions (ditch, spike)
    #[arg(long)]
    pub d: Option<f64>,
    /// Entry position (reach)
    #[arg(long)]
    pub s: Option<f64>,
    /// Target position (reach)
    #[arg(long)]
    pub r: Option<f64>,
    /// Equality tolerance of `reach`.
    #[arg(long)]
    pub tolerance: Option<f64>,
}

#[derive(Debug, Args)]
pub struct FormulaArgs {
    /// Formula text.
    #[arg(long, conflicts_with_all = ["formula_file", "prop"])]
    pub formula: Option<String>,
    /// File holding the formula text.
    #[arg(long, value_name = "FILE", conflicts_with = "prop")]
    pub formula_file: Option<PathBuf>,
    /// Library property name.
    #[arg(long, value_name = "NAME")]
    pub prop: Option<String>,
    #[command(flatten)]
    pub params: ParamArgs,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub formula: FormulaArgs,
    /// Verdict CSV (`product_id,satisfied`); stdout if omitted.
    #[arg(short = 'o', long = "output", alias = "out", value_name = "FILE")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Restrict the library to these properties. Repeatable.
    #[arg(long = "prop", value_name = "NAME")]
    pub props: Vec<String>,
    /// Parameter override: `prop.name=value` for one property, or
    /// `name=value` for every selected property reading that parameter.
    #[arg(long = "param", value_name = "[PROP.]NAME=VALUE")]
    pub params: Vec<String>,
    /// Additional formula, `NAME=FORMULA`. Repeatable.
    #[arg(long = "extra", value_name = "NAME=FORMULA")]
    pub extra: Vec<String>,
    /// Evaluate only the `--extra` formulas.
    #[arg(long)]
    pub no_library: bool,
    /// CSV output file. When given, stdout gets an aligned text table;
    /// otherwise the CSV goes to stdout.
    #[arg(short = 'o', long = "output", alias = "out", value_name = "FILE")]
    pub output: Option<PathBuf>,
    /// Also write a gnuplot data file.
    #[arg(long, value_name = "FILE")]
    pub emit_plot_data: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// Number of records.
    #[arg(long = "n", value_name = "N")]
    pub n: usize,
    /// Pattern proportions, e.g. `cold=0.3,flat=0.7`.
    #[arg(long)]
    pub mix: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Standard deviation of position noise.
    #[arg(long, default_value_t = 0.0)]
    pub sigma: f64,
    #[arg(long, default_value_t = 10)]
    pub categories: usize,
    #[arg(long, default_value_t = rankmon::ingest::DEFAULT_DAYS)]
    pub days: usize,
    /// Metric means of a pattern, `pattern=impressions/clicks/purchases`.
    #[arg(long = "means", value_name = "PATTERN=I/C/P")]
    pub means: Vec<String>,
    /// Dataset file; labels go to `<name>.labels.csv` next to it.
    #[arg(short = 'o', long = "output", alias = "out", value_name = "FILE")]
    pub output: PathBuf,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Target {
    Prop,
    Query,
}

#[derive(Debug, Args)]
pub struct ExpandArgs {
    #[command(flatten)]
    pub formula: FormulaArgs,
    #[arg(long, value_enum, default_value_t = Target::Prop)]
    pub target: Target,
    /// Horizon in days (default: the formula's domain on a 14-day record).
    #[arg(long, value_name = "T")]
    pub days: Option<usize>,
}

#[derive(Debug, Args)]
pub struct KmeansArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, default_value_t = 10)]
    pub k: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 100)]
    pub max_iters: usize,
    /// Centroid CSV; stdout if omitted.
    #[arg(short = 'o', long = "output", alias = "out", value_name = "FILE")]
    pub output: Option<PathBuf>,
    /// Assignment CSV (`product_id,cluster`).
    #[arg(long, value_name = "FILE")]
    pub assignments: Option<PathBuf>,
    /// Gnuplot data file with one column per centroid.
    #[arg(long, value_name = "FILE")]
    pub emit_plot_data: Option<PathBuf>,
}
