//! Weighted ensemble combination, exhaustive weight-grid sweeps,
//! Pareto-frontier extraction and top-k frontier intersection.
//!
//! The ensemble score of an instance is the per-class weighted sum of the
//! base models' probability vectors; the predicted class is its argmax,
//! with exact ties resolving to the lowest class index. Scaling all weights
//! by a positive constant never changes a prediction.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::path::Path;

use rayon::prelude::*;

use crate::data_model::{LabelChannel, PredictionMatrix};
use crate::error::{Error, Result};
use crate::fairness::{fairness_report_from_slices, FairnessReport};

/// Per-model ensemble weights, each in [0, 1], not all zero.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector {
    alphas: Vec<f64>,
}

impl WeightVector {
    pub fn new(alphas: Vec<f64>) -> Result<Self> {
        if alphas.is_empty() {
            return Err(Error::Validation("weight vector is empty".into()));
        }
        if alphas.iter().any(|&a| !(0.0..=1.0).contains(&a)) {
            return Err(Error::Validation("weights must lie in [0, 1]".into()));
        }
        if alphas.iter().all(|&a| a == 0.0) {
            return Err(Error::Validation("all-zero weight vector".into()));
        }
        Ok(WeightVector { alphas })
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    pub fn len(&self) -> usize {
        self.alphas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alphas.is_empty()
    }

    /// Index of the only nonzero weight, if there is exactly one.
    pub fn one_hot_index(&self) -> Option<usize> {
        let mut hot = None;
        for (i, &a) in self.alphas.iter().enumerate() {
            if a != 0.0 {
                if hot.is_some() {
                    return None;
                }
                hot = Some(i);
            }
        }
        hot
    }

    fn cmp_lex(&self, other: &WeightVector) -> Ordering {
        for (a, b) in self.alphas.iter().zip(&other.alphas) {
            match a.total_cmp(b) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        self.alphas.len().cmp(&other.alphas.len())
    }
}

/// Which fairness gap a sweep optimizes against accuracy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GapMetric {
    /// Equality-of-opportunity gap (false-negative-rate difference).
    Eoo,
    /// Calders-Verwer discrimination score (label-free).
    Disc,
}

impl GapMetric {
    pub fn extract(&self, report: &FairnessReport) -> Option<f64> {
        match self {
            GapMetric::Eoo => report.delta_eoo,
            GapMetric::Disc => report.delta_disc,
        }
    }
}

/// One evaluated weight vector.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleCandidate {
    pub weights: WeightVector,
    pub accuracy: f64,
    /// Fairness gap under the sweep's metric; `None` when undefined.
    pub gap: Option<f64>,
    /// Full report; absent for candidates reloaded from CSV.
    pub report: Option<FairnessReport>,
}

/// Weighted per-class score argmax for one instance.
fn combine_row(alphas: &[f64], models: &[Vec<f64>]) -> u8 {
    let classes = models[0].len();
    let mut best_class = 0usize;
    let mut best_score = f64::NEG_INFINITY;
    for c in 0..classes {
        let score: f64 = alphas.iter().zip(models).map(|(&a, m)| a * m[c]).sum();
        if score > best_score {
            best_score = score;
            best_class = c;
        }
    }
    best_class as u8
}

/// Ensemble predictions over a whole matrix: id -> argmax class.
pub fn combine(weights: &WeightVector, preds: &PredictionMatrix) -> Result<BTreeMap<String, u8>> {
    if weights.len() != preds.num_models() {
        return Err(Error::Shape(format!(
            "{} weights for {} models",
            weights.len(),
            preds.num_models()
        )));
    }
    if preds.num_classes() > 256 {
        return Err(Error::Shape("more than 256 classes".into()));
    }
    Ok(preds
        .rows
        .iter()
        .map(|(id, models)| (id.clone(), combine_row(weights.alphas(), models)))
        .collect())
}

/// All weight vectors over {0, step, ..., 1}^m except the all-zero one,
/// in lexicographic order. `step` must divide 1 (within 1e-9).
pub fn weight_grid(m: usize, step: f64) -> Result<Vec<WeightVector>> {
    if m == 0 {
        return Err(Error::Config("weight grid needs at least one model".into()));
    }
    if !(step > 0.0 && step <= 1.0) {
        return Err(Error::Config(format!("step {step} outside (0, 1]")));
    }
    let n = (1.0 / step).round();
    if (n * step - 1.0).abs() > 1e-9 {
        return Err(Error::Config(format!("step {step} does not divide 1")));
    }
    let n = n as u64;
    let levels: Vec<f64> = (0..=n).map(|k| k as f64 / n as f64).collect();
    let count = (n + 1).pow(m as u32) as usize - 1;
    let mut grid = Vec::with_capacity(count);
    let mut digits = vec![0u64; m];
    loop {
        // advance the base-(n+1) odometer, most significant digit first
        let mut pos = m;
        while pos > 0 {
            pos -= 1;
            if digits[pos] < n {
                digits[pos] += 1;
                for d in &mut digits[pos + 1..] {
                    *d = 0;
                }
                break;
            }
            if pos == 0 {
                debug_assert_eq!(grid.len(), count);
                return Ok(grid);
            }
        }
        grid.push(WeightVector {
            alphas: digits.iter().map(|&d| levels[d as usize]).collect(),
        });
    }
}

/// Aligned evaluation arrays shared by every candidate of a sweep.
struct AlignedData<'a> {
    models: Vec<&'a Vec<Vec<f64>>>,
    truth: Vec<u8>,
    group: Vec<u8>,
}

fn align_sweep_inputs<'a>(
    preds: &'a PredictionMatrix,
    truth: &LabelChannel,
    groups: &BTreeMap<String, u8>,
) -> Result<AlignedData<'a>> {
    if preds.rows.is_empty() {
        return Err(Error::Validation("prediction matrix is empty".into()));
    }
    let mut missing: Vec<String> = Vec::new();
    for id in preds.rows.keys() {
        if !truth.labels.contains_key(id) || !groups.contains_key(id) {
            missing.push(id.clone());
        }
    }
    for id in truth.labels.keys().chain(groups.keys()) {
        if !preds.rows.contains_key(id) {
            missing.push(id.clone());
        }
    }
    if !missing.is_empty() {
        missing.sort();
        missing.dedup();
        return Err(Error::Coverage(missing));
    }
    let mut models = Vec::with_capacity(preds.rows.len());
    let mut truth_vec = Vec::with_capacity(preds.rows.len());
    let mut group_vec = Vec::with_capacity(preds.rows.len());
    for (id, row) in &preds.rows {
        models.push(row);
        let t = truth.labels[id];
        let g = groups[id];
        if t > 1 || g > 1 {
            return Err(Error::Validation(format!(
                "id `{id}`: truth and group must be 0 or 1"
            )));
        }
        truth_vec.push(t);
        group_vec.push(g);
    }
    Ok(AlignedData {
        models,
        truth: truth_vec,
        group: group_vec,
    })
}

/// Evaluates every grid vector. Output order equals grid order regardless
/// of the rayon pool driving it; candidates with an undefined gap are kept
/// but flagged via `gap = None`.
pub fn sweep(
    preds: &PredictionMatrix,
    truth: &LabelChannel,
    groups: &BTreeMap<String, u8>,
    grid: &[WeightVector],
    metric: GapMetric,
) -> Result<Vec<EnsembleCandidate>> {
    for w in grid {
        if w.len() != preds.num_models() {
            return Err(Error::Shape(format!(
                "{} weights for {} models",
                w.len(),
                preds.num_models()
            )));
        }
    }
    let data = align_sweep_inputs(preds, truth, groups)?;
    let candidates = grid
        .par_iter()
        .map(|weights| {
            let pred: Vec<u8> = data
                .models
                .iter()
                .map(|models| combine_row(weights.alphas(), models))
                .collect();
            let report = fairness_report_from_slices(&pred, &data.truth, &data.group);
            EnsembleCandidate {
                weights: weights.clone(),
                accuracy: report.accuracy_overall.expect("non-empty dataset"),
                gap: metric.extract(&report),
                report: Some(report),
            }
        })
        .collect();
    Ok(candidates)
}

/// Non-dominated candidates, accuracy descending.
#[derive(Debug, Clone, PartialEq)]
pub struct ParetoFrontier {
    pub points: Vec<EnsembleCandidate>,
}

/// Extracts the non-dominated set under (maximize accuracy, minimize gap).
/// Candidates with undefined gaps are excluded. Duplicate (accuracy, gap)
/// pairs keep only the lexicographically smallest weight vector.
pub fn pareto_frontier(candidates: &[EnsembleCandidate]) -> ParetoFrontier {
    let mut defined: Vec<&EnsembleCandidate> =
        candidates.iter().filter(|c| c.gap.is_some()).collect();
    defined.sort_by(|a, b| {
        b.accuracy
            .total_cmp(&a.accuracy)
            .then_with(|| a.gap.unwrap().total_cmp(&b.gap.unwrap()))
            .then_with(|| a.weights.cmp_lex(&b.weights))
    });
    // The sort puts dominating points first; anything that does not strictly
    // improve the best gap seen so far is dominated or a duplicate of an
    // already-kept (lex-smaller) point.
    let mut points: Vec<EnsembleCandidate> = Vec::new();
    let mut best_gap = f64::INFINITY;
    for c in defined {
        let gap = c.gap.unwrap();
        if gap < best_gap {
            points.push(c.clone());
            best_gap = gap;
        }
    }
    ParetoFrontier { points }
}

/// Candidates whose weight vector appears in every frontier, sorted by gap
/// ascending (ties: accuracy descending, then lexicographic weights),
/// truncated to `k`. Metrics are taken from the first frontier.
pub fn select_top_k_intersection(frontiers: &[ParetoFrontier], k: usize) -> Vec<EnsembleCandidate> {
    let Some((first, rest)) = frontiers.split_first() else {
        return Vec::new();
    };
    let mut shared: Vec<EnsembleCandidate> = first
        .points
        .iter()
        .filter(|c| {
            rest.iter().all(|f| {
                f.points
                    .iter()
                    .any(|p| p.weights.cmp_lex(&c.weights) == Ordering::Equal)
            })
        })
        .cloned()
        .collect();
    shared.sort_by(|a, b| {
        a.gap
            .unwrap_or(f64::INFINITY)
            .total_cmp(&b.gap.unwrap_or(f64::INFINITY))
            .then_with(|| b.accuracy.total_cmp(&a.accuracy))
            .then_with(|| a.weights.cmp_lex(&b.weights))
    });
    shared.truncate(k);
    shared
}

/// Writes candidates as CSV: `alpha_1..alpha_M, accuracy, gap, gap_defined`.
/// The gap column is empty when undefined.
pub fn write_candidates_csv(path: &Path, candidates: &[EnsembleCandidate]) -> Result<()> {
    let m = candidates.first().map_or(0, |c| c.weights.len());
    let mut writer = csv::Writer::from_path(path)?;
    let mut header: Vec<String> = (1..=m).map(|i| format!("alpha_{i}")).collect();
    header.extend(["accuracy".into(), "gap".into(), "gap_defined".into()]);
    writer.write_record(&header)?;
    for c in candidates {
        let mut record: Vec<String> = c.weights.alphas().iter().map(f64::to_string).collect();
        record.push(c.accuracy.to_string());
        record.push(c.gap.map(|g| g.to_string()).unwrap_or_default());
        record.push(u8::from(c.gap.is_some()).to_string());
        writer.write_record(&record)?;
    }
    writer.flush()?;
    Ok(())
}

/// Reads candidates written by [`write_candidates_csv`]. Reports are not
/// reconstructed.
pub fn read_candidates_csv(path: &Path) -> Result<Vec<EnsembleCandidate>> {
    let mut reader = csv::Reader::from_path(path)?;
    let header: Vec<String> = reader.headers()?.iter().map(str::to_owned).collect();
    let m = header.iter().filter(|h| h.starts_with("alpha_")).count();
    if m == 0 {
        return Err(Error::Schema("alpha_1".into()));
    }
    let col = |name: &str| -> Result<usize> {
        header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::Schema(name.to_string()))
    };
    let alpha_cols: Vec<usize> = (1..=m)
        .map(|i| col(&format!("alpha_{i}")))
        .collect::<Result<_>>()?;
    let acc_col = col("accuracy")?;
    let gap_col = col("gap")?;
    let parse = |raw: &str, row: usize| -> Result<f64> {
        raw.parse::<f64>().map_err(|_| Error::Parse {
            row,
            msg: format!("`{raw}` is not a number"),
        })
    };
    let mut candidates = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record?;
        let row = i + 1;
        let alphas: Vec<f64> = alpha_cols
            .iter()
            .map(|&c| parse(&record[c], row))
            .collect::<Result<_>>()?;
        let gap_raw = record[gap_col].trim();
        candidates.push(EnsembleCandidate {
            weights: WeightVector::new(alphas)?,
            accuracy: parse(&record[acc_col], row)?,
            gap: if gap_raw.is_empty() {
                None
            } else {
                Some(parse(gap_raw, row)?)
            },
            report: None,
        });
    }
    Ok(candidates)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn matrix(rows: &[(&str, Vec<Vec<f64>>)]) -> PredictionMatrix {
        let m = rows.first().map_or(0, |(_, models)| models.len());
        PredictionMatrix {
            model_names: (0..m).map(|i| format!("m{i}")).collect(),
            rows: rows
                .iter()
                .map(|(id, models)| (id.to_string(), models.clone()))
                .collect(),
        }
    }

    #[test]
    fn weight_vector_validation() {
        assert!(WeightVector::new(vec![0.5, 0.5]).is_ok());
        assert!(WeightVector::new(vec![]).is_err());
        assert!(WeightVector::new(vec![0.0, 0.0]).is_err());
        assert!(WeightVector::new(vec![1.2]).is_err());
        assert!(WeightVector::new(vec![-0.1, 0.5]).is_err());
        assert_eq!(
            WeightVector::new(vec![0.0, 1.0]).unwrap().one_hot_index(),
            Some(1)
        );
        assert_eq!(
            WeightVector::new(vec![0.5, 1.0]).unwrap().one_hot_index(),
            None
        );
    }

    #[test]
    fn combine_one_hot_projects_single_model() {
        let preds = matrix(&[
            ("a", vec![vec![0.9, 0.1], vec![0.2, 0.8]]),
            ("b", vec![vec![0.4, 0.6], vec![0.7, 0.3]]),
        ]);
        let w = WeightVector::new(vec![1.0, 0.0]).unwrap();
        let out = combine(&w, &preds).unwrap();
        assert_eq!(out["a"], 0);
        assert_eq!(out["b"], 1);
        let w = WeightVector::new(vec![0.0, 1.0]).unwrap();
        let out = combine(&w, &preds).unwrap();
        assert_eq!(out["a"], 1);
        assert_eq!(out["b"], 0);
    }

    #[test]
    fn combine_unanimous_models_keep_their_class() {
        let preds = matrix(&[("a", vec![vec![0.1, 0.9], vec![0.3, 0.7], vec![0.2, 0.8]])]);
        for alphas in [
            vec![0.1, 0.1, 0.1],
            vec![1.0, 0.5, 0.2],
            vec![0.0, 0.0, 1.0],
        ] {
            let w = WeightVector::new(alphas).unwrap();
            assert_eq!(combine(&w, &preds).unwrap()["a"], 1);
        }
    }

    #[test]
    fn combine_weighted_sum_hand_case() {
        // scores: 0.5*0.9 + 0.5*0.2 = 0.55 vs 0.5*0.1 + 0.5*0.8 = 0.45
        let preds = matrix(&[("a", vec![vec![0.9, 0.1], vec![0.2, 0.8]])]);
        let w = WeightVector::new(vec![0.5, 0.5]).unwrap();
        assert_eq!(combine(&w, &preds).unwrap()["a"], 0);
    }

    #[test]
    fn combine_exact_tie_takes_class_zero() {
        let preds = matrix(&[("a", vec![vec![0.5, 0.5]])]);
        let w = WeightVector::new(vec![1.0]).unwrap();
        assert_eq!(combine(&w, &preds).unwrap()["a"], 0);
    }

    #[test]
    fn combine_is_scale_covariant() {
        let preds = matrix(&[
            ("a", vec![vec![0.9, 0.1], vec![0.2, 0.8]]),
            ("b", vec![vec![0.45, 0.55], vec![0.65, 0.35]]),
        ]);
        let w1 = WeightVector::new(vec![0.2, 0.3]).unwrap();
        let w2 = WeightVector::new(vec![0.4, 0.6]).unwrap();
        assert_eq!(combine(&w1, &preds).unwrap(), combine(&w2, &preds).unwrap());
    }

    #[test]
    fn combine_rejects_dimension_mismatch() {
        let preds = matrix(&[("a", vec![vec![0.9, 0.1]])]);
        let w = WeightVector::new(vec![0.5, 0.5]).unwrap();
        assert!(matches!(combine(&w, &preds), Err(Error::Shape(_))));
    }

    #[test]
    fn grid_counts_match_enumeration() {
        assert_eq!(weight_grid(4, 0.1).unwrap().len(), 14_640);
        assert_eq!(weight_grid(3, 0.05).unwrap().len(), 9_260);
    }

    #[test]
    fn grid_smallest_case_and_order() {
        let grid = weight_grid(1, 0.5).unwrap();
        let alphas: Vec<&[f64]> = grid.iter().map(WeightVector::alphas).collect();
        assert_eq!(alphas, vec![&[0.5][..], &[1.0][..]]);

        let grid = weight_grid(2, 0.5).unwrap();
        let first: Vec<&[f64]> = grid.iter().take(3).map(WeightVector::alphas).collect();
        assert_eq!(
            first,
            vec![&[0.0, 0.5][..], &[0.0, 1.0][..], &[0.5, 0.0][..]]
        );
        assert!(grid
            .windows(2)
            .all(|w| w[0].cmp_lex(&w[1]) == Ordering::Less));
        assert!(grid.iter().all(|w| w.alphas().iter().any(|&a| a != 0.0)));
    }

    #[test]
    fn grid_rejects_bad_step() {
        assert!(matches!(weight_grid(2, 0.3), Err(Error::Config(_))));
        assert!(matches!(weight_grid(2, 0.0), Err(Error::Config(_))));
        assert!(matches!(weight_grid(0, 0.5), Err(Error::Config(_))));
    }

    #[test]
    fn grid_contains_every_one_hot() {
        let grid = weight_grid(3, 0.5).unwrap();
        for i in 0..3 {
            assert!(grid
                .iter()
                .any(|w| w.one_hot_index() == Some(i) && w.alphas()[i] == 1.0));
        }
    }

    fn sweep_fixture() -> (PredictionMatrix, LabelChannel, BTreeMap<String, u8>) {
        let mut rows = Vec::new();
        let mut truth = LabelChannel::new("truth");
        let mut groups = BTreeMap::new();
        for i in 0..20u32 {
            let id = format!("i{i:02}");
            let t = (i % 2) as u8;
            let g = (i / 10) as u8;
            // three models with varying agreement with the truth
            let p1 = if t == 1 { 0.8 } else { 0.3 };
            let p2 = if i % 3 == 0 { 0.9 } else { 0.2 };
            let p3 = if g == 1 { 0.7 } else { 0.1 };
            rows.push((
                id.clone(),
                vec![vec![1.0 - p1, p1], vec![1.0 - p2, p2], vec![1.0 - p3, p3]],
            ));
            truth.labels.insert(id.clone(), t);
            groups.insert(id, g);
        }
        let preds = PredictionMatrix {
            model_names: vec!["m0".into(), "m1".into(), "m2".into()],
            rows: rows.into_iter().collect(),
        };
        (preds, truth, groups)
    }

    #[test]
    fn sweep_single_vector_equals_report_composition() {
        let (preds, truth, groups) = sweep_fixture();
        let w = WeightVector::new(vec![0.5, 0.5, 0.0]).unwrap();
        let out = sweep(
            &preds,
            &truth,
            &groups,
            std::slice::from_ref(&w),
            GapMetric::Eoo,
        )
        .unwrap();
        assert_eq!(out.len(), 1);
        let combined = combine(&w, &preds).unwrap();
        let report = crate::fairness::fairness_report(&combined, &truth, &groups).unwrap();
        assert_eq!(out[0].report.as_ref().unwrap(), &report);
        assert_eq!(out[0].gap, report.delta_eoo);
        assert_eq!(Some(out[0].accuracy), report.accuracy_overall);
    }

    #[test]
    fn sweep_identical_models_give_identical_candidates() {
        let (mut preds, truth, groups) = sweep_fixture();
        for models in preds.rows.values_mut() {
            let first = models[0].clone();
            for m in models.iter_mut() {
                *m = first.clone();
            }
        }
        let grid = weight_grid(3, 0.5).unwrap();
        let out = sweep(&preds, &truth, &groups, &grid, GapMetric::Eoo).unwrap();
        let (acc0, gap0) = (out[0].accuracy, out[0].gap);
        assert!(out.iter().all(|c| c.accuracy == acc0 && c.gap == gap0));
    }

    #[test]
    fn sweep_matches_independent_recomputation() {
        // Brute-force oracle: recompute each candidate's accuracy and FNR gap
        // from scratch, without the fairness module.
        let (preds, truth, groups) = sweep_fixture();
        let grid = weight_grid(3, 0.5).unwrap();
        let out = sweep(&preds, &truth, &groups, &grid, GapMetric::Eoo).unwrap();
        assert_eq!(out.len(), grid.len());
        for (w, cand) in grid.iter().zip(&out) {
            let mut correct = 0usize;
            let mut fn_count = [0usize; 2];
            let mut pos_count = [0usize; 2];
            for (id, models) in &preds.rows {
                let score1: f64 = w.alphas().iter().zip(models).map(|(a, m)| a * m[1]).sum();
                let score0: f64 = w.alphas().iter().zip(models).map(|(a, m)| a * m[0]).sum();
                let pred = u8::from(score1 > score0);
                let t = truth.labels[id];
                let g = groups[id] as usize;
                if pred == t {
                    correct += 1;
                }
                if t == 1 {
                    pos_count[g] += 1;
                    if pred == 0 {
                        fn_count[g] += 1;
                    }
                }
            }
            let acc = correct as f64 / preds.rows.len() as f64;
            assert_eq!(cand.accuracy, acc);
            let gap = if pos_count[0] == 0 || pos_count[1] == 0 {
                None
            } else {
                Some(
                    (fn_count[0] as f64 / pos_count[0] as f64
                        - fn_count[1] as f64 / pos_count[1] as f64)
                        .abs(),
                )
            };
            assert_eq!(cand.gap, gap);
        }
    }

    fn candidate(alphas: Vec<f64>, accuracy: f64, gap: f64) -> EnsembleCandidate {
        EnsembleCandidate {
            weights: WeightVector::new(alphas).unwrap(),
            accuracy,
            gap: Some(gap),
            report: None,
        }
    }

    #[test]
    fn frontier_keeps_mutually_non_dominated() {
        let cands = vec![
            candidate(vec![1.0, 0.0], 0.9, 0.2),
            candidate(vec![0.5, 0.5], 0.8, 0.1),
            candidate(vec![0.0, 1.0], 0.7, 0.05),
        ];
        let frontier = pareto_frontier(&cands);
        assert_eq!(frontier.points.len(), 3);
        assert!(frontier
            .points
            .windows(2)
            .all(|w| w[0].accuracy >= w[1].accuracy));
    }

    #[test]
    fn frontier_drops_dominated_candidate() {
        let cands = vec![
            candidate(vec![1.0, 0.0], 0.9, 0.2),
            candidate(vec![0.5, 0.5], 0.8, 0.1),
            candidate(vec![0.0, 1.0], 0.7, 0.05),
            candidate(vec![0.5, 1.0], 0.75, 0.15), // dominated by (0.8, 0.1)
        ];
        let frontier = pareto_frontier(&cands);
        assert_eq!(frontier.points.len(), 3);
        assert!(!frontier
            .points
            .iter()
            .any(|c| c.accuracy == 0.75 && c.gap == Some(0.15)));
    }

    #[test]
    fn frontier_single_candidate_and_empty() {
        let cands = vec![candidate(vec![1.0], 0.5, 0.5)];
        assert_eq!(pareto_frontier(&cands).points.len(), 1);
        assert!(pareto_frontier(&[]).points.is_empty());
    }

    #[test]
    fn frontier_dedups_to_lex_smallest_weights() {
        let cands = vec![
            candidate(vec![1.0, 0.5], 0.9, 0.2),
            candidate(vec![0.5, 1.0], 0.9, 0.2),
        ];
        let frontier = pareto_frontier(&cands);
        assert_eq!(frontier.points.len(), 1);
        assert_eq!(frontier.points[0].weights.alphas(), &[0.5, 1.0]);
    }

    #[test]
    fn frontier_ignores_undefined_gaps() {
        let mut cands = vec![candidate(vec![1.0, 0.0], 0.9, 0.2)];
        cands.push(EnsembleCandidate {
            weights: WeightVector::new(vec![0.0, 1.0]).unwrap(),
            accuracy: 0.99,
            gap: None,
            report: None,
        });
        let frontier = pareto_frontier(&cands);
        assert_eq!(frontier.points.len(), 1);
        assert_eq!(frontier.points[0].accuracy, 0.9);
    }

    #[test]
    fn top_k_intersection_cases() {
        let f1 = pareto_frontier(&[
            candidate(vec![1.0, 0.0], 0.9, 0.2),
            candidate(vec![0.5, 0.5], 0.8, 0.1),
            candidate(vec![0.0, 1.0], 0.7, 0.05),
        ]);
        // identical frontiers: first k by gap
        let top = select_top_k_intersection(&[f1.clone(), f1.clone()], 3);
        assert_eq!(top.len(), 3);
        assert_eq!(top[0].gap, Some(0.05));
        assert_eq!(top[1].gap, Some(0.1));
        let top = select_top_k_intersection(&[f1.clone(), f1.clone()], 2);
        assert_eq!(top.len(), 2);

        // disjoint frontiers
        let f2 = pareto_frontier(&[candidate(vec![0.25, 0.25], 0.9, 0.2)]);
        assert!(select_top_k_intersection(&[f1.clone(), f2], 3).is_empty());

        // exactly one shared weight vector
        let f3 = pareto_frontier(&[
            candidate(vec![0.5, 0.5], 0.85, 0.12),
            candidate(vec![0.75, 0.0], 0.95, 0.3),
        ]);
        let top = select_top_k_intersection(&[f1, f3], 3);
        assert_eq!(top.len(), 1);
        assert_eq!(top[0].weights.alphas(), &[0.5, 0.5]);
        // metrics come from the first frontier
        assert_eq!(top[0].accuracy, 0.8);
    }

    #[test]
    fn candidates_csv_round_trip() {
        let mut cands = vec![
            candidate(vec![0.5, 1.0], 0.875, 0.12345678901234),
            candidate(vec![1.0, 0.0], 0.9, 0.2),
        ];
        cands.push(EnsembleCandidate {
            weights: WeightVector::new(vec![0.1, 0.1]).unwrap(),
            accuracy: 0.3,
            gap: None,
            report: None,
        });
        let f = tempfile::Builder::new().suffix(".csv").tempfile().unwrap();
        write_candidates_csv(f.path(), &cands).unwrap();
        let back = read_candidates_csv(f.path()).unwrap();
        assert_eq!(back, cands);
    }
}
