//! fairlens: annotate facial datasets with objective labels, train small
//! models, evaluate group fairness, and search weighted ensembles on the
//! accuracy-vs-gap Pareto frontier.

mod commands;
mod config;
mod manifest;
mod render;

use std::path::PathBuf;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};

use crate::config::Defaults;

#[derive(Parser)]
#[command(name = "fairlens", version, about)]
struct Cli {
    /// Worker threads for batch operations (default: available parallelism).
    /// Results do not depend on this setting.
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Seed for operations that consume randomness.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Only report errors.
    #[arg(long, global = true)]
    quiet: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Score landmark faces (golden ratio, symmetry, canons) and binarize.
    AnnotateAttractiveness(AnnotateAttractivenessArgs),
    /// Assign expressions to AU frames and binarize to happy/unhappy.
    AnnotateExpression(AnnotateExpressionArgs),
    /// Train a logistic model on a feature table and a label channel.
    Train(TrainArgs),
    /// Emit class probabilities of a trained model as a prediction file.
    Predict(PredictArgs),
    /// Compute a fairness report for hard predictions against a truth channel.
    Evaluate(EvaluateArgs),
    /// Evaluate every weight vector of a grid over the base models.
    Sweep(SweepArgs),
    /// Extract the Pareto frontier (and top-k intersection) of sweep outputs.
    Pareto(ParetoArgs),
    /// Summarize a sweep output.
    Report(ReportArgs),
}

#[derive(Args)]
struct AnnotateAttractivenessArgs {
    /// Landmark table (CSV or JSON): id, sensitive, x_0..x_67, y_0..y_67.
    #[arg(long)]
    landmarks: PathBuf,
    /// Frontality threshold in pixels.
    #[arg(long)]
    beta: Option<f64>,
    /// Golden-ratio tolerance around 1.618.
    #[arg(long)]
    delta: Option<f64>,
    /// Symmetry threshold.
    #[arg(long)]
    t_sym: Option<f64>,
    /// Neoclassical-canon threshold.
    #[arg(long)]
    t_neo: Option<f64>,
    /// Keep faces the filter would discard and vice versa.
    #[arg(long)]
    invert_frontality: bool,
    /// Output CSV: id, frontal, scores and labels.
    #[arg(long)]
    out: PathBuf,
    /// Also write standardized (gr, sym, neo) features for training.
    #[arg(long)]
    features_out: Option<PathBuf>,
}

#[derive(Args)]
struct AnnotateExpressionArgs {
    /// AU table (CSV or JSON): id, sensitive, AUxx_presence, AUxx_intensity.
    #[arg(long)]
    aus: PathBuf,
    /// objbase or objlcs.
    #[arg(long)]
    algorithm: Option<String>,
    /// Neutral threshold for objlcs.
    #[arg(long)]
    neutral_t: Option<f64>,
    /// Custom taxonomy JSON (expressions with AU codes and reference intensities).
    #[arg(long)]
    taxonomy: Option<PathBuf>,
    /// Output CSV: id, expression, happy_label.
    #[arg(long)]
    out: PathBuf,
    /// Per-group expression histogram JSON (default: <out>.hist.json).
    #[arg(long)]
    histogram: Option<PathBuf>,
    /// Also write normalized AU-intensity features for training.
    #[arg(long)]
    features_out: Option<PathBuf>,
}

#[derive(Args)]
struct TrainArgs {
    /// Feature table CSV: id plus numeric feature columns.
    #[arg(long)]
    features: PathBuf,
    /// Label table (CSV or JSON) holding the training channel.
    #[arg(long)]
    labels: PathBuf,
    /// Column of --labels holding the 0/1 label.
    #[arg(long)]
    labels_col: Option<String>,
    #[arg(long)]
    lr: Option<f64>,
    #[arg(long)]
    epochs: Option<usize>,
    #[arg(long)]
    l2: Option<f64>,
    /// Output model JSON.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct PredictArgs {
    /// Model JSON from `train`.
    #[arg(long)]
    model: PathBuf,
    /// Feature table CSV matching the model's dimension.
    #[arg(long)]
    features: PathBuf,
    /// Output prediction CSV: id, m0_c0, m0_c1.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct EvaluateArgs {
    /// Hard predictions: a table with an id column and --pred-col, or a
    /// single-model prediction file (argmax is taken).
    #[arg(long)]
    pred: PathBuf,
    /// Truth labels table.
    #[arg(long)]
    truth: PathBuf,
    /// Group table (e.g. the landmarks file with its sensitive column).
    #[arg(long)]
    groups: PathBuf,
    #[arg(long)]
    pred_col: Option<String>,
    #[arg(long)]
    truth_col: Option<String>,
    #[arg(long)]
    group_col: Option<String>,
    /// Output fairness report JSON.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SweepArgs {
    /// Prediction file(s); repeat the flag to stack models from several files.
    #[arg(long, required = true)]
    preds: Vec<PathBuf>,
    #[arg(long)]
    truth: PathBuf,
    #[arg(long)]
    groups: PathBuf,
    #[arg(long)]
    truth_col: Option<String>,
    #[arg(long)]
    group_col: Option<String>,
    /// Fairness gap to trade against accuracy: eoo or disc.
    #[arg(long)]
    metric: Option<String>,
    /// Grid step; must divide 1.
    #[arg(long)]
    step: Option<f64>,
    /// Output candidates CSV: alpha_1..alpha_M, accuracy, gap, gap_defined.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ParetoArgs {
    /// Candidates CSV from `sweep`; repeat to intersect several frontiers.
    #[arg(long, required = true)]
    candidates: Vec<PathBuf>,
    /// Keep the k best-gap candidates shared by every frontier.
    #[arg(long)]
    k: Option<usize>,
    /// Output frontier CSV (first candidates file).
    #[arg(long)]
    out: PathBuf,
    /// Output top-k intersection CSV.
    #[arg(long)]
    topk: Option<PathBuf>,
    /// Accuracy-vs-gap scatter SVG of the first candidates file.
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Horizontal reference line at this gap value.
    #[arg(long)]
    hline: Option<f64>,
    /// Vertical reference line at this accuracy value.
    #[arg(long)]
    vline: Option<f64>,
}

#[derive(Args)]
struct ReportArgs {
    /// Candidates CSV from `sweep`.
    #[arg(long)]
    candidates: PathBuf,
    /// Frontier CSV from `pareto` to include frontier statistics.
    #[arg(long)]
    frontier: Option<PathBuf>,
    /// Output summary JSON.
    #[arg(long)]
    out: PathBuf,
}

fn main() -> Result<()> {
    let cli = Cli::parse();

    env_logger::Builder::new()
        .filter_level(if cli.quiet {
            log::LevelFilter::Error
        } else {
            log::LevelFilter::Info
        })
        .format_timestamp(None)
        .init();

    if let Some(threads) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()?;
    }

    let defaults = Defaults::from_env()?;

    match cli.command {
        Command::AnnotateAttractiveness(args) => {
            commands::annotate_attractiveness(&args, &defaults)
        }
        Command::AnnotateExpression(args) => commands::annotate_expression(&args, &defaults),
        Command::Train(args) => commands::train(&args, &defaults, cli.seed),
        Command::Predict(args) => commands::predict(&args),
        Command::Evaluate(args) => commands::evaluate(&args, &defaults),
        Command::Sweep(args) => commands::sweep(&args, &defaults),
        Command::Pareto(args) => commands::pareto(&args, &defaults),
        Command::Report(args) => commands::report(&args),
    }
}
