//! Minimal deterministic classifier: full-batch logistic regression over
//! caller-supplied feature vectors, plus feature extraction from the
//! annotation outputs. Stands in for heavyweight image models so the whole
//! annotate -> train -> sweep pipeline runs at desk scale; externally
//! produced prediction files can replace it without code changes.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::au_expression::ExpressionTaxonomy;
use crate::data_model::{AuFrame, LabelChannel, PredictionMatrix};
use crate::error::{Error, Result};
use crate::geometry::AttractivenessScores;

/// id -> feature vector; all vectors share one length.
pub type FeatureTable = BTreeMap<String, Vec<f64>>;

/// Binary logistic model; `weights` has length D+1 with the bias last.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearModel {
    pub weights: Vec<f64>,
}

impl LinearModel {
    pub fn zeros(dim: usize) -> Self {
        LinearModel {
            weights: vec![0.0; dim + 1],
        }
    }

    /// Feature dimension D (bias excluded).
    pub fn dim(&self) -> usize {
        self.weights.len() - 1
    }

    fn margin(&self, x: &[f64]) -> f64 {
        let d = self.dim();
        let mut z = self.weights[d];
        for (w, v) in self.weights[..d].iter().zip(x) {
            z += w * v;
        }
        z
    }

    pub fn save_json(&self, path: &Path) -> Result<()> {
        std::fs::write(path, serde_json::to_string_pretty(self)?)?;
        Ok(())
    }

    pub fn load_json(path: &Path) -> Result<Self> {
        let model: LinearModel = serde_json::from_str(&std::fs::read_to_string(path)?)?;
        if model.weights.is_empty() || model.weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::Validation(
                "model weights must be finite and non-empty".into(),
            ));
        }
        Ok(model)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub epochs: usize,
    /// Reserved for optional mini-batch shuffling; full-batch training
    /// never consumes randomness.
    pub seed: u64,
    /// L2 penalty on the non-bias weights.
    pub l2: f64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            learning_rate: 1e-3,
            epochs: 500,
            seed: 0,
            l2: 0.0,
        }
    }
}

fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

/// ln(1 + e^z) without overflow.
fn softplus(z: f64) -> f64 {
    z.max(0.0) + (-z.abs()).exp().ln_1p()
}

/// Mean cross-entropy plus (l2/2) * |w|^2 over the non-bias weights.
pub fn logistic_loss(weights: &[f64], xs: &[&[f64]], ys: &[f64], l2: f64) -> f64 {
    let d = weights.len() - 1;
    let mut loss = 0.0;
    for (x, &y) in xs.iter().zip(ys) {
        let mut z = weights[d];
        for (w, v) in weights[..d].iter().zip(*x) {
            z += w * v;
        }
        // -y ln p - (1-y) ln (1-p) = softplus(-z) + (1-y) z
        loss += softplus(-z) + (1.0 - y) * z;
    }
    loss /= xs.len() as f64;
    loss + 0.5 * l2 * weights[..d].iter().map(|w| w * w).sum::<f64>()
}

/// Analytic gradient of [`logistic_loss`]; same layout as `weights`.
pub fn logistic_gradient(weights: &[f64], xs: &[&[f64]], ys: &[f64], l2: f64) -> Vec<f64> {
    let d = weights.len() - 1;
    let n = xs.len() as f64;
    let mut grad = vec![0.0; weights.len()];
    for (x, &y) in xs.iter().zip(ys) {
        let mut z = weights[d];
        for (w, v) in weights[..d].iter().zip(*x) {
            z += w * v;
        }
        let err = sigmoid(z) - y;
        for (g, v) in grad[..d].iter_mut().zip(*x) {
            *g += err * v;
        }
        grad[d] += err;
    }
    for g in grad.iter_mut() {
        *g /= n;
    }
    for (g, w) in grad[..d].iter_mut().zip(&weights[..d]) {
        *g += l2 * w;
    }
    grad
}

#[allow(clippy::type_complexity)]
fn aligned_training_data<'a>(
    features: &'a FeatureTable,
    labels: &LabelChannel,
) -> Result<(Vec<&'a [f64]>, Vec<f64>, usize)> {
    if features.is_empty() {
        return Err(Error::Validation("no training instances".into()));
    }
    let mut missing: Vec<String> = features
        .keys()
        .filter(|id| !labels.labels.contains_key(*id))
        .chain(
            labels
                .labels
                .keys()
                .filter(|id| !features.contains_key(*id)),
        )
        .cloned()
        .collect();
    if !missing.is_empty() {
        missing.sort();
        missing.dedup();
        return Err(Error::Coverage(missing));
    }
    let dim = features.values().next().expect("non-empty").len();
    let mut xs = Vec::with_capacity(features.len());
    let mut ys = Vec::with_capacity(features.len());
    for (id, x) in features {
        if x.len() != dim {
            return Err(Error::Shape(format!(
                "feature vector of `{id}` has length {}, expected {dim}",
                x.len()
            )));
        }
        let label = labels.labels[id];
        if label > 1 {
            return Err(Error::Validation(format!(
                "label of `{id}` is {label}, expected 0 or 1"
            )));
        }
        xs.push(x.as_slice());
        ys.push(f64::from(label));
    }
    Ok((xs, ys, dim))
}

/// Full-batch gradient descent from an all-zero initialization. Instances
/// are visited in lexicographic id order, so results are bit-identical for
/// identical inputs and configuration.
pub fn train(
    features: &FeatureTable,
    labels: &LabelChannel,
    cfg: &TrainConfig,
) -> Result<LinearModel> {
    if cfg.learning_rate <= 0.0 {
        return Err(Error::Config("learning rate must be positive".into()));
    }
    let (xs, ys, dim) = aligned_training_data(features, labels)?;
    let mut model = LinearModel::zeros(dim);
    for _ in 0..cfg.epochs {
        let grad = logistic_gradient(&model.weights, &xs, &ys, cfg.l2);
        for (w, g) in model.weights.iter_mut().zip(&grad) {
            *w -= cfg.learning_rate * g;
        }
    }
    Ok(model)
}

/// Per-instance (p0, p1) with p1 = sigmoid(w . x + b).
pub fn predict_proba(
    model: &LinearModel,
    features: &FeatureTable,
) -> Result<BTreeMap<String, (f64, f64)>> {
    let mut out = BTreeMap::new();
    for (id, x) in features {
        if x.len() != model.dim() {
            return Err(Error::Shape(format!(
                "feature vector of `{id}` has length {}, model expects {}",
                x.len(),
                model.dim()
            )));
        }
        let p1 = sigmoid(model.margin(x));
        out.insert(id.clone(), (1.0 - p1, p1));
    }
    Ok(out)
}

/// Packs per-instance probabilities into a single-model prediction matrix.
pub fn to_prediction_matrix(name: &str, probs: &BTreeMap<String, (f64, f64)>) -> PredictionMatrix {
    PredictionMatrix {
        model_names: vec![name.to_string()],
        rows: probs
            .iter()
            .map(|(id, &(p0, p1))| (id.clone(), vec![vec![p0, p1]]))
            .collect(),
    }
}

/// Geometry features: (golden_ratio, symmetry, neocanons) standardized
/// per-dataset to zero mean and unit variance. Non-frontal faces (with no
/// scores) are skipped. Returns the number of zero-variance features that
/// were only centered.
pub fn feature_extract_attractiveness(
    scores: &[AttractivenessScores],
) -> Result<(FeatureTable, usize)> {
    let mut raw: FeatureTable = BTreeMap::new();
    for s in scores {
        if let (true, Some(gr), Some(sym), Some(neo)) =
            (s.frontal, s.golden_ratio, s.symmetry, s.neocanons)
        {
            if raw.insert(s.id.clone(), vec![gr, sym, neo]).is_some() {
                return Err(Error::DuplicateId(s.id.clone()));
            }
        }
    }
    if raw.is_empty() {
        return Err(Error::Validation(
            "no frontal faces to extract features from".into(),
        ));
    }
    let warnings = standardize(&mut raw);
    Ok((raw, warnings))
}

/// In-place per-column standardization (population variance). Zero-variance
/// columns are centered only; their count is returned.
pub fn standardize(features: &mut FeatureTable) -> usize {
    let n = features.len() as f64;
    let dim = features.values().next().map_or(0, Vec::len);
    let mut degenerate = 0usize;
    for j in 0..dim {
        let mean = features.values().map(|x| x[j]).sum::<f64>() / n;
        let var = features
            .values()
            .map(|x| (x[j] - mean).powi(2))
            .sum::<f64>()
            / n;
        if var < 1e-18 {
            degenerate += 1;
            for x in features.values_mut() {
                x[j] -= mean;
            }
        } else {
            let std = var.sqrt();
            for x in features.values_mut() {
                x[j] = (x[j] - mean) / std;
            }
        }
    }
    degenerate
}

/// AU features: presence-gated intensities divided by `normalizer`, in the
/// taxonomy's sorted AU-universe order.
pub fn feature_extract_au(
    frames: &[AuFrame],
    tax: &ExpressionTaxonomy,
    normalizer: f64,
) -> Result<FeatureTable> {
    let universe = tax.au_universe();
    let mut out = BTreeMap::new();
    for frame in frames {
        let x: Vec<f64> = universe
            .iter()
            .map(|&au| frame.effective_intensity(au) / normalizer)
            .collect();
        if out.insert(frame.id.clone(), x).is_some() {
            return Err(Error::DuplicateId(frame.id.clone()));
        }
    }
    Ok(out)
}

/// Feature table IO: `id` column plus one numeric column per feature, in
/// header order.
pub fn write_features(path: &Path, features: &FeatureTable, names: &[String]) -> Result<()> {
    let mut writer = csv::Writer::from_path(path)?;
    let mut header = vec!["id".to_string()];
    header.extend(names.iter().cloned());
    writer.write_record(&header)?;
    for (id, x) in features {
        if x.len() != names.len() {
            return Err(Error::Shape(format!(
                "feature vector of `{id}` has length {}, expected {}",
                x.len(),
                names.len()
            )));
        }
        let mut record = vec![id.clone()];
        record.extend(x.iter().map(f64::to_string));
        writer.write_record(&record)?;
    }
    writer.flush()?;
    Ok(())
}

pub fn load_features(path: &Path) -> Result<(FeatureTable, Vec<String>)> {
    let mut reader = csv::Reader::from_path(path)?;
    let header: Vec<String> = reader.headers()?.iter().map(str::to_owned).collect();
    let id_pos = header
        .iter()
        .position(|h| h == "id")
        .ok_or_else(|| Error::Schema("id".into()))?;
    let names: Vec<String> = header
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != id_pos)
        .map(|(_, h)| h.clone())
        .collect();
    let mut features = BTreeMap::new();
    for (i, record) in reader.records().enumerate() {
        let record = record?;
        let row = i + 1;
        let id = record[id_pos].to_string();
        let mut x = Vec::with_capacity(names.len());
        for (j, raw) in record.iter().enumerate() {
            if j == id_pos {
                continue;
            }
            let v: f64 = raw.parse().map_err(|_| Error::Parse {
                row,
                msg: format!("column `{}`: `{raw}` is not a number", header[j]),
            })?;
            x.push(v);
        }
        if features.insert(id.clone(), x).is_some() {
            return Err(Error::DuplicateId(id));
        }
    }
    Ok((features, names))
}
