//! Subcommand implementations. Each command reads its inputs, writes its
//! outputs plus a run manifest, and never mutates an input file.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use log::{info, warn};

use fairlens_core::au_expression::{self, Algorithm, ExpressionConfig, ExpressionTaxonomy};
use fairlens_core::data_model::{
    self, load_label_channel, AuSchema, LandmarkSchema, PredictionMatrix,
};
use fairlens_core::ensemble::{self, EnsembleCandidate, GapMetric, WeightVector};
use fairlens_core::error::Error as CoreError;
use fairlens_core::fairness;
use fairlens_core::geometry::{self, GeometryConfig};
use fairlens_core::trainer::{self, LinearModel, TrainConfig};

use crate::config::Defaults;
use crate::manifest::RunManifest;
use crate::render::{render_scatter, ModelMarker, ScatterOptions};
use crate::{
    AnnotateAttractivenessArgs, AnnotateExpressionArgs, EvaluateArgs, ParetoArgs, PredictArgs,
    ReportArgs, SweepArgs, TrainArgs,
};

fn write_csv_records(
    path: &Path,
    header: &[&str],
    records: impl Iterator<Item = Vec<String>>,
) -> Result<()> {
    let mut writer = csv_writer(path)?;
    writer.write_record(header)?;
    for record in records {
        writer.write_record(&record)?;
    }
    writer.flush()?;
    Ok(())
}

fn csv_writer(path: &Path) -> Result<csv::Writer<std::fs::File>> {
    csv::Writer::from_path(path).with_context(|| format!("creating {}", path.display()))
}

fn opt_to_string(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn annotate_attractiveness(
    args: &AnnotateAttractivenessArgs,
    defaults: &Defaults,
) -> Result<()> {
    let mut cfg = GeometryConfig {
        beta_frontal: defaults.f64(args.beta, "beta", 10.0),
        delta_gr: defaults.f64(args.delta, "delta", 0.19),
        t_sym: defaults.f64(args.t_sym, "t-sym", 4.2),
        t_neo: defaults.f64(args.t_neo, "t-neo", 0.29),
        ..GeometryConfig::default()
    };
    cfg.invert_frontality = args.invert_frontality;

    let faces = data_model::load_landmarks(&args.landmarks, &LandmarkSchema::default())?;
    let ann = geometry::annotate_attractiveness(&faces, &cfg)?;
    info!(
        "frontality filter kept {}/{} faces ({:.2}%)",
        ann.kept,
        ann.total,
        if ann.total > 0 {
            100.0 * ann.kept as f64 / ann.total as f64
        } else {
            0.0
        }
    );
    // label balance per channel and group, for threshold selection
    let groups: BTreeMap<String, u8> = faces.iter().map(|f| (f.id.clone(), f.sensitive)).collect();
    for channel in [&ann.gr_channel, &ann.s_channel, &ann.nc_channel] {
        let dist = geometry::channel_distribution(channel, &groups);
        let count = |g: u8, l: u8| dist.get(&(g, l)).copied().unwrap_or(0);
        info!(
            "channel {}: positives {}/{} (group 0: {}/{}, group 1: {}/{})",
            channel.name,
            count(0, 1) + count(1, 1),
            channel.labels.len(),
            count(0, 1),
            count(0, 0) + count(0, 1),
            count(1, 1),
            count(1, 0) + count(1, 1),
        );
    }

    let header = [
        "id",
        "frontal",
        "gr_score",
        "sym_score",
        "neo_score",
        "gr_label",
        "s_label",
        "nc_label",
    ];
    write_csv_records(
        &args.out,
        &header,
        ann.scores.iter().map(|s| {
            let label = |ch: &fairlens_core::LabelChannel| {
                ch.labels
                    .get(&s.id)
                    .map(|l| l.to_string())
                    .unwrap_or_default()
            };
            vec![
                s.id.clone(),
                u8::from(s.frontal).to_string(),
                opt_to_string(s.golden_ratio),
                opt_to_string(s.symmetry),
                opt_to_string(s.neocanons),
                label(&ann.gr_channel),
                label(&ann.s_channel),
                label(&ann.nc_channel),
            ]
        }),
    )?;

    let mut manifest = RunManifest::new("annotate-attractiveness");
    manifest
        .config("beta", cfg.beta_frontal)
        .config("delta", cfg.delta_gr)
        .config("t-sym", cfg.t_sym)
        .config("t-neo", cfg.t_neo)
        .config("invert-frontality", cfg.invert_frontality);
    manifest.input(&args.landmarks)?;
    manifest.output(&args.out);

    if let Some(features_out) = &args.features_out {
        let (features, degenerate) = trainer::feature_extract_attractiveness(&ann.scores)?;
        if degenerate > 0 {
            warn!("{degenerate} feature column(s) had zero variance; centered only");
        }
        trainer::write_features(
            features_out,
            &features,
            &["gr".into(), "sym".into(), "neo".into()],
        )?;
        manifest.output(features_out);
    }
    manifest.write_for(&args.out)?;
    Ok(())
}

fn parse_algorithm(name: &str) -> Result<Algorithm> {
    match name.to_ascii_lowercase().as_str() {
        "objbase" => Ok(Algorithm::ObjBase),
        "objlcs" => Ok(Algorithm::ObjLcs),
        other => bail!("unknown algorithm `{other}` (expected objbase or objlcs)"),
    }
}

pub fn annotate_expression(args: &AnnotateExpressionArgs, defaults: &Defaults) -> Result<()> {
    let tax: ExpressionTaxonomy = match &args.taxonomy {
        Some(path) => serde_json::from_str(
            &std::fs::read_to_string(path)
                .with_context(|| format!("reading taxonomy {}", path.display()))?,
        )?,
        None => ExpressionTaxonomy::default(),
    };
    tax.validate()?;

    let algorithm =
        parse_algorithm(&defaults.string(args.algorithm.as_deref(), "algorithm", "objlcs"))?;
    let cfg = ExpressionConfig {
        algorithm,
        neutral_t: defaults.f64(args.neutral_t, "neutral-t", 0.4),
        ..Default::default()
    };

    let schema = AuSchema::for_aus(tax.au_universe());
    let (frames, clamped) = data_model::load_au_frames(&args.aus, &schema)?;
    if clamped > 0 {
        warn!("clamped {clamped} intensity value(s) to [0, 5]");
    }

    let ann = au_expression::annotate_expressions(&frames, &tax, &cfg)?;
    if ann.collisions > 0 {
        info!(
            "ObjBase matched two or more expressions on {}/{} frames ({:.2}%)",
            ann.collisions,
            frames.len(),
            100.0 * ann.collisions as f64 / frames.len() as f64
        );
    }

    write_csv_records(
        &args.out,
        &["id", "expression", "happy_label"],
        ann.labels.iter().map(|(id, label)| {
            vec![
                id.clone(),
                label.name(&tax).to_string(),
                ann.channel.labels[id].to_string(),
            ]
        }),
    )?;

    let histogram_path = args.histogram.clone().unwrap_or_else(|| {
        let mut name = args
            .out
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_else(|| "expressions".into());
        name.push_str(".hist.json");
        args.out.with_file_name(name)
    });
    let histogram = serde_json::json!({
        "channel": ann.channel.name,
        "collisions": ann.collisions,
        "frames": frames.len(),
        "counts": ann.histogram
            .iter()
            .map(|(g, m)| (g.to_string(), m.clone()))
            .collect::<BTreeMap<String, _>>(),
    });
    std::fs::write(&histogram_path, serde_json::to_string_pretty(&histogram)?)?;

    let mut manifest = RunManifest::new("annotate-expression");
    manifest
        .config("algorithm", format!("{algorithm:?}"))
        .config("neutral-t", cfg.neutral_t);
    manifest.input(&args.aus)?;
    if let Some(path) = &args.taxonomy {
        manifest.input(path)?;
    }
    manifest.output(&args.out).output(&histogram_path);

    if let Some(features_out) = &args.features_out {
        let features = trainer::feature_extract_au(&frames, &tax, cfg.intensity_normalizer)?;
        let names: Vec<String> = tax
            .au_universe()
            .iter()
            .map(|au| format!("au_{au:02}"))
            .collect();
        trainer::write_features(features_out, &features, &names)?;
        manifest.output(features_out);
    }
    manifest.write_for(&args.out)?;
    Ok(())
}

pub fn train(args: &TrainArgs, defaults: &Defaults, seed: Option<u64>) -> Result<()> {
    let (features, _) = trainer::load_features(&args.features)?;
    let labels_col = defaults.string(args.labels_col.as_deref(), "labels-col", "label");
    let labels = load_label_channel(&args.labels, "id", &labels_col, &labels_col)?;

    let base = TrainConfig::default();
    let cfg = TrainConfig {
        learning_rate: defaults.f64(args.lr, "lr", base.learning_rate),
        epochs: defaults.usize(args.epochs, "epochs", base.epochs),
        l2: defaults.f64(args.l2, "l2", base.l2),
        seed: seed.unwrap_or(base.seed),
    };
    let model = trainer::train(&features, &labels, &cfg)?;
    model.save_json(&args.out)?;
    info!(
        "trained on {} instances, {} features, {} epochs",
        features.len(),
        model.dim(),
        cfg.epochs
    );

    let mut manifest = RunManifest::new("train");
    manifest
        .config("lr", cfg.learning_rate)
        .config("epochs", cfg.epochs as u64)
        .config("l2", cfg.l2)
        .config("seed", cfg.seed)
        .config("labels-col", labels_col);
    manifest.input(&args.features)?;
    manifest.input(&args.labels)?;
    manifest.output(&args.out);
    manifest.write_for(&args.out)?;
    Ok(())
}

pub fn predict(args: &PredictArgs) -> Result<()> {
    let model = LinearModel::load_json(&args.model)?;
    let (features, _) = trainer::load_features(&args.features)?;
    let probs = trainer::predict_proba(&model, &features)?;
    let matrix = trainer::to_prediction_matrix("m0", &probs);
    data_model::write_predictions(&args.out, &matrix)?;

    let mut manifest = RunManifest::new("predict");
    manifest.input(&args.model)?;
    manifest.input(&args.features)?;
    manifest.output(&args.out);
    manifest.write_for(&args.out)?;
    Ok(())
}

/// Loads hard predictions from either a (id, pred) table or a single-model
/// prediction file (argmax, ties to class 0).
fn load_hard_predictions(path: &Path, pred_col: &str) -> Result<BTreeMap<String, u8>> {
    match load_label_channel(path, "id", pred_col, "pred") {
        Ok(channel) => Ok(channel.labels),
        Err(CoreError::Schema(_)) => {
            let (m, c) = data_model::infer_prediction_shape(path)?;
            if m != 1 {
                bail!(
                    "{} holds {m} models; use `sweep` to evaluate ensembles",
                    path.display()
                );
            }
            let matrix = data_model::load_predictions(path, 1, c)?;
            let weights = WeightVector::new(vec![1.0])?;
            Ok(ensemble::combine(&weights, &matrix)?)
        }
        Err(e) => Err(e.into()),
    }
}

pub fn evaluate(args: &EvaluateArgs, defaults: &Defaults) -> Result<()> {
    let pred_col = defaults.string(args.pred_col.as_deref(), "pred-col", "pred");
    let truth_col = defaults.string(args.truth_col.as_deref(), "truth-col", "label");
    let group_col = defaults.string(args.group_col.as_deref(), "group-col", "group");

    let pred = load_hard_predictions(&args.pred, &pred_col)?;
    let truth = load_label_channel(&args.truth, "id", &truth_col, &truth_col)?;
    let groups = load_label_channel(&args.groups, "id", &group_col, &group_col)?.labels;

    let report = fairness::fairness_report(&pred, &truth, &groups)?;
    std::fs::write(&args.out, serde_json::to_string_pretty(&report)?)?;

    let mut manifest = RunManifest::new("evaluate");
    manifest
        .config("pred-col", pred_col)
        .config("truth-col", truth_col)
        .config("group-col", group_col);
    manifest.input(&args.pred)?;
    manifest.input(&args.truth)?;
    manifest.input(&args.groups)?;
    manifest.output(&args.out);
    manifest.write_for(&args.out)?;
    Ok(())
}

fn parse_metric(name: &str) -> Result<GapMetric> {
    match name.to_ascii_lowercase().as_str() {
        "eoo" => Ok(GapMetric::Eoo),
        "disc" => Ok(GapMetric::Disc),
        other => bail!("unknown metric `{other}` (expected eoo or disc)"),
    }
}

fn load_stacked_predictions(paths: &[PathBuf]) -> Result<PredictionMatrix> {
    let mut stacked: Option<PredictionMatrix> = None;
    for path in paths {
        let (m, c) = data_model::infer_prediction_shape(path)?;
        let matrix = data_model::load_predictions(path, m, c)?;
        stacked = Some(match stacked {
            None => matrix,
            Some(mut acc) => {
                acc.merge(matrix)?;
                acc
            }
        });
    }
    stacked.ok_or_else(|| anyhow::anyhow!("no prediction files given"))
}

pub fn sweep(args: &SweepArgs, defaults: &Defaults) -> Result<()> {
    let metric = parse_metric(&defaults.string(args.metric.as_deref(), "metric", "eoo"))?;
    let step = defaults.f64(args.step, "step", 0.1);
    let truth_col = defaults.string(args.truth_col.as_deref(), "truth-col", "label");
    let group_col = defaults.string(args.group_col.as_deref(), "group-col", "group");

    let preds = load_stacked_predictions(&args.preds)?;
    let truth = load_label_channel(&args.truth, "id", &truth_col, &truth_col)?;
    let groups = load_label_channel(&args.groups, "id", &group_col, &group_col)?.labels;

    let grid = ensemble::weight_grid(preds.num_models(), step)?;
    info!(
        "sweeping {} weight vectors over {} models x {} instances",
        grid.len(),
        preds.num_models(),
        preds.rows.len()
    );
    let candidates = ensemble::sweep(&preds, &truth, &groups, &grid, metric)?;
    let undefined = candidates.iter().filter(|c| c.gap.is_none()).count();
    if undefined > 0 {
        warn!("{undefined} candidate(s) have an undefined gap and are excluded from frontiers");
    }
    ensemble::write_candidates_csv(&args.out, &candidates)?;

    let mut manifest = RunManifest::new("sweep");
    manifest
        .config("metric", format!("{metric:?}"))
        .config("step", step)
        .config("models", preds.num_models() as u64)
        .config("grid-size", grid.len() as u64)
        .config("truth-col", truth_col)
        .config("group-col", group_col);
    for path in &args.preds {
        manifest.input(path)?;
    }
    manifest.input(&args.truth)?;
    manifest.input(&args.groups)?;
    manifest.output(&args.out);
    manifest.write_for(&args.out)?;
    Ok(())
}

/// One-hot rows of a candidate list, as (model index, candidate).
fn one_hot_models(candidates: &[EnsembleCandidate]) -> Vec<(usize, &EnsembleCandidate)> {
    let mut hot: Vec<(usize, &EnsembleCandidate)> = candidates
        .iter()
        .filter_map(|c| {
            let i = c.weights.one_hot_index()?;
            (c.weights.alphas()[i] == 1.0).then_some((i, c))
        })
        .collect();
    hot.sort_by_key(|&(i, _)| i);
    hot
}

pub fn pareto(args: &ParetoArgs, defaults: &Defaults) -> Result<()> {
    let k = defaults.usize(args.k, "k", 3);
    let mut all: Vec<Vec<EnsembleCandidate>> = Vec::new();
    for path in &args.candidates {
        all.push(ensemble::read_candidates_csv(path)?);
    }
    let frontiers: Vec<_> = all.iter().map(|c| ensemble::pareto_frontier(c)).collect();
    info!(
        "frontier sizes: {:?}",
        frontiers.iter().map(|f| f.points.len()).collect::<Vec<_>>()
    );
    ensemble::write_candidates_csv(&args.out, &frontiers[0].points)?;

    let mut manifest = RunManifest::new("pareto");
    manifest.config("k", k as u64);
    for path in &args.candidates {
        manifest.input(path)?;
    }
    manifest.output(&args.out);

    if let Some(topk_path) = &args.topk {
        let top = ensemble::select_top_k_intersection(&frontiers, k);
        if top.is_empty() {
            warn!("frontier intersection is empty");
        }
        ensemble::write_candidates_csv(topk_path, &top)?;
        manifest.output(topk_path);
    }

    if let Some(svg_path) = &args.svg {
        let candidates: Vec<(f64, f64)> = all[0]
            .iter()
            .filter_map(|c| c.gap.map(|g| (c.accuracy, g)))
            .collect();
        let frontier: Vec<(f64, f64)> = frontiers[0]
            .points
            .iter()
            .filter_map(|c| c.gap.map(|g| (c.accuracy, g)))
            .collect();
        let models: Vec<ModelMarker> = one_hot_models(&all[0])
            .into_iter()
            .filter_map(|(i, c)| {
                c.gap.map(|g| ModelMarker {
                    name: format!("m{}", i + 1),
                    accuracy: c.accuracy,
                    gap: g,
                })
            })
            .collect();
        let opts = ScatterOptions {
            hline: args.hline,
            vline: args.vline,
            ..Default::default()
        };
        let svg = render_scatter(&candidates, &frontier, &models, &opts)?;
        std::fs::write(svg_path, svg)?;
        manifest.output(svg_path);
        manifest.config(
            "hline",
            args.hline.map_or(serde_json::Value::Null, Into::into),
        );
        manifest.config(
            "vline",
            args.vline.map_or(serde_json::Value::Null, Into::into),
        );
    }
    manifest.write_for(&args.out)?;
    Ok(())
}

fn candidate_json(c: &EnsembleCandidate) -> serde_json::Value {
    serde_json::json!({
        "alphas": c.weights.alphas(),
        "accuracy": c.accuracy,
        "gap": c.gap,
    })
}

pub fn report(args: &ReportArgs) -> Result<()> {
    let candidates = ensemble::read_candidates_csv(&args.candidates)?;
    if candidates.is_empty() {
        bail!("no candidates in {}", args.candidates.display());
    }
    let defined: Vec<&EnsembleCandidate> = candidates.iter().filter(|c| c.gap.is_some()).collect();
    let best_acc = defined
        .iter()
        .max_by(|a, b| a.accuracy.total_cmp(&b.accuracy))
        .copied();
    let best_gap = defined
        .iter()
        .min_by(|a, b| a.gap.unwrap().total_cmp(&b.gap.unwrap()))
        .copied();
    let one_hot: Vec<serde_json::Value> = one_hot_models(&candidates)
        .into_iter()
        .map(|(i, c)| {
            serde_json::json!({
                "model": format!("m{}", i + 1),
                "accuracy": c.accuracy,
                "gap": c.gap,
            })
        })
        .collect();

    let mut summary = serde_json::json!({
        "candidates": candidates.len(),
        "defined": defined.len(),
        "undefined": candidates.len() - defined.len(),
        "accuracy_min": defined.iter().map(|c| c.accuracy).fold(f64::INFINITY, f64::min),
        "accuracy_max": defined.iter().map(|c| c.accuracy).fold(f64::NEG_INFINITY, f64::max),
        "gap_min": defined.iter().filter_map(|c| c.gap).fold(f64::INFINITY, f64::min),
        "gap_max": defined.iter().filter_map(|c| c.gap).fold(f64::NEG_INFINITY, f64::max),
        "one_hot_models": one_hot,
        "best_accuracy": best_acc.map(candidate_json),
        "best_gap": best_gap.map(candidate_json),
    });

    let mut manifest = RunManifest::new("report");
    manifest.input(&args.candidates)?;
    if let Some(frontier_path) = &args.frontier {
        let frontier = ensemble::read_candidates_csv(frontier_path)?;
        summary["frontier_size"] = serde_json::json!(frontier.len());
        summary["frontier_top"] = serde_json::json!(frontier
            .iter()
            .take(5)
            .map(candidate_json)
            .collect::<Vec<_>>());
        manifest.input(frontier_path)?;
    }
    std::fs::write(&args.out, serde_json::to_string_pretty(&summary)?)?;
    manifest.output(&args.out);
    manifest.write_for(&args.out)?;
    Ok(())
}
