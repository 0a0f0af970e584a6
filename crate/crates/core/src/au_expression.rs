//! Objective facial-expression annotation from action-unit frames.
//!
//! Two algorithms: `ObjBase` assigns an expression only when every one of
//! its canonical AUs is active, breaking collisions by mean intensity;
//! `ObjLCS` picks the expression whose canonical AU sequence has the longest
//! common subsequence with the detected AUs, breaking ties by euclidean
//! distance to a reference intensity vector, and falls back to neutral when
//! the winner's mean normalized intensity is below a threshold.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data_model::{AuFrame, LabelChannel, AU_INTENSITY_MAX};
use crate::error::{Error, Result};

/// Neutral thresholds studied per configuration sweep.
pub const NEUTRAL_T_SET: [f64; 3] = [0.3, 0.4, 0.5];

/// Name of the positive class used by [`binarize_happiness`].
pub const HAPPINESS: &str = "happiness";

/// One expression: canonical AU codes (strictly ascending) and a reference
/// intensity vector on the normalized [0, 1] scale, aligned to the codes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Expression {
    pub name: String,
    pub aus: Vec<u8>,
    pub reference_intensity: Vec<f64>,
}

/// Ordered expression list; the order is the final deterministic tie-break.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpressionTaxonomy {
    pub expressions: Vec<Expression>,
    pub neutral_name: String,
}

impl Default for ExpressionTaxonomy {
    fn default() -> Self {
        let expr = |name: &str, aus: Vec<u8>| {
            let reference_intensity = vec![1.0; aus.len()];
            Expression {
                name: name.into(),
                aus,
                reference_intensity,
            }
        };
        ExpressionTaxonomy {
            expressions: vec![
                expr(HAPPINESS, vec![6, 12]),
                expr("sadness", vec![1, 4, 15]),
                expr("surprise", vec![1, 2, 5, 26]),
                expr("fear", vec![1, 2, 4, 5, 7, 20, 26]),
                expr("anger", vec![4, 5, 7, 23]),
                expr("disgust", vec![9, 15, 16]),
            ],
            neutral_name: "neutral".into(),
        }
    }
}

impl ExpressionTaxonomy {
    pub fn validate(&self) -> Result<()> {
        if self.expressions.is_empty() {
            return Err(Error::Config("taxonomy has no expressions".into()));
        }
        for e in &self.expressions {
            if e.aus.is_empty() {
                return Err(Error::Config(format!("expression `{}` has no AUs", e.name)));
            }
            if !e.aus.windows(2).all(|w| w[0] < w[1]) {
                return Err(Error::Config(format!(
                    "expression `{}`: AU codes must be strictly ascending",
                    e.name
                )));
            }
            if e.reference_intensity.len() != e.aus.len() {
                return Err(Error::Config(format!(
                    "expression `{}`: reference intensity length {} != {} AUs",
                    e.name,
                    e.reference_intensity.len(),
                    e.aus.len()
                )));
            }
        }
        Ok(())
    }

    /// Sorted union of all canonical AU codes.
    pub fn au_universe(&self) -> Vec<u8> {
        let mut aus: Vec<u8> = self
            .expressions
            .iter()
            .flat_map(|e| e.aus.iter().copied())
            .collect();
        aus.sort_unstable();
        aus.dedup();
        aus
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.expressions.iter().position(|e| e.name == name)
    }
}

/// Expression assigned to one frame: an index into the taxonomy, or neutral.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ExpressionLabel {
    Neutral,
    Expr(usize),
}

impl ExpressionLabel {
    pub fn name<'a>(&self, tax: &'a ExpressionTaxonomy) -> &'a str {
        match *self {
            ExpressionLabel::Neutral => &tax.neutral_name,
            ExpressionLabel::Expr(i) => &tax.expressions[i].name,
        }
    }
}

/// Annotation algorithm selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    ObjBase,
    ObjLcs,
}

#[derive(Debug, Clone)]
pub struct ExpressionConfig {
    pub algorithm: Algorithm,
    /// ObjLCS only: frames whose winning expression has mean normalized
    /// intensity below this become neutral.
    pub neutral_t: f64,
    /// Divisor mapping raw intensities to [0, 1].
    pub intensity_normalizer: f64,
}

impl Default for ExpressionConfig {
    fn default() -> Self {
        ExpressionConfig {
            algorithm: Algorithm::ObjLcs,
            neutral_t: 0.4,
            intensity_normalizer: AU_INTENSITY_MAX,
        }
    }
}

impl ExpressionConfig {
    pub fn validate(&self) -> Result<()> {
        if self.neutral_t <= 0.0 {
            return Err(Error::Config("neutral_t must be positive".into()));
        }
        if self.intensity_normalizer <= 0.0 {
            return Err(Error::Config(
                "intensity_normalizer must be positive".into(),
            ));
        }
        Ok(())
    }
}

fn mean_intensity(frame: &AuFrame, aus: &[u8]) -> f64 {
    if aus.is_empty() {
        return 0.0;
    }
    aus.iter()
        .map(|&au| frame.effective_intensity(au))
        .sum::<f64>()
        / aus.len() as f64
}

/// Exact-match annotation: an expression is a candidate only when every one
/// of its canonical AUs is active. Collisions resolve to the candidate with
/// the highest mean intensity over its own AUs, then by taxonomy order.
pub fn obj_base_label(frame: &AuFrame, tax: &ExpressionTaxonomy) -> ExpressionLabel {
    let mut best: Option<(usize, f64)> = None;
    for (i, e) in tax.expressions.iter().enumerate() {
        if !e.aus.iter().all(|au| frame.presence.get(au) == Some(&1)) {
            continue;
        }
        let score = mean_intensity(frame, &e.aus);
        match best {
            Some((_, s)) if score <= s => {}
            _ => best = Some((i, score)),
        }
    }
    match best {
        Some((i, _)) => ExpressionLabel::Expr(i),
        None => ExpressionLabel::Neutral,
    }
}

/// Counts ObjBase candidate expressions for a frame (collision reporting).
pub fn obj_base_candidates(frame: &AuFrame, tax: &ExpressionTaxonomy) -> usize {
    tax.expressions
        .iter()
        .filter(|e| e.aus.iter().all(|au| frame.presence.get(au) == Some(&1)))
        .count()
}

/// Longest-common-subsequence length of two strictly increasing sequences.
pub fn lcs_length(a: &[u8], b: &[u8]) -> Result<usize> {
    for (name, seq) in [("a", a), ("b", b)] {
        if !seq.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::Validation(format!(
                "lcs_length: sequence `{name}` is not strictly ascending"
            )));
        }
    }
    Ok(lcs_len_unchecked(a, b))
}

fn lcs_len_unchecked(a: &[u8], b: &[u8]) -> usize {
    // classic DP table, rolling row
    let mut prev = vec![0usize; b.len() + 1];
    let mut curr = vec![0usize; b.len() + 1];
    for &ca in a {
        for (j, &cb) in b.iter().enumerate() {
            curr[j + 1] = if ca == cb {
                prev[j] + 1
            } else {
                prev[j + 1].max(curr[j])
            };
        }
        std::mem::swap(&mut prev, &mut curr);
    }
    prev[b.len()]
}

/// Squared euclidean distance between the frame's normalized intensities on
/// `e`'s canonical AUs and `e`'s reference vector.
fn reference_distance_sq(frame: &AuFrame, e: &Expression, normalizer: f64) -> f64 {
    e.aus
        .iter()
        .zip(&e.reference_intensity)
        .map(|(&au, &r)| {
            let v = frame.effective_intensity(au) / normalizer;
            (v - r) * (v - r)
        })
        .sum()
}

/// LCS-based annotation with intensity tie-breaks and neutral thresholding.
pub fn obj_lcs_label(
    frame: &AuFrame,
    tax: &ExpressionTaxonomy,
    cfg: &ExpressionConfig,
) -> ExpressionLabel {
    let detected = frame.active_aus();
    if detected.is_empty() {
        return ExpressionLabel::Neutral;
    }

    let mut best_len = 0usize;
    let mut winner: Option<(usize, f64)> = None; // (index, reference distance)
    for (i, e) in tax.expressions.iter().enumerate() {
        let len = lcs_len_unchecked(&detected, &e.aus);
        if len > best_len {
            best_len = len;
            winner = Some((i, reference_distance_sq(frame, e, cfg.intensity_normalizer)));
        } else if len == best_len && best_len > 0 {
            let dist = reference_distance_sq(frame, e, cfg.intensity_normalizer);
            if let Some((_, best_dist)) = winner {
                // strict < keeps the earliest expression on exact ties
                if dist < best_dist {
                    winner = Some((i, dist));
                }
            }
        }
    }

    let Some((idx, _)) = winner else {
        return ExpressionLabel::Neutral;
    };
    let aus = &tax.expressions[idx].aus;
    let mean_norm = mean_intensity(frame, aus) / cfg.intensity_normalizer;
    if mean_norm < cfg.neutral_t {
        ExpressionLabel::Neutral
    } else {
        ExpressionLabel::Expr(idx)
    }
}

/// Applies the configured algorithm to a single frame.
pub fn label_frame(
    frame: &AuFrame,
    tax: &ExpressionTaxonomy,
    cfg: &ExpressionConfig,
) -> ExpressionLabel {
    match cfg.algorithm {
        Algorithm::ObjBase => obj_base_label(frame, tax),
        Algorithm::ObjLcs => obj_lcs_label(frame, tax, cfg),
    }
}

/// 1 iff the expression is happiness; neutral and everything else map to 0.
pub fn binarize_happiness(label: ExpressionLabel, tax: &ExpressionTaxonomy) -> u8 {
    match label {
        ExpressionLabel::Expr(i) if tax.expressions[i].name == HAPPINESS => 1,
        _ => 0,
    }
}

/// Batch annotation output.
#[derive(Debug, Clone)]
pub struct ExpressionAnnotation {
    /// Binary happy/unhappy channel, named after the algorithm
    /// (`ObjBase` or `ObjLCS:{t}`).
    pub channel: LabelChannel,
    /// Per-frame expression labels, input order.
    pub labels: Vec<(String, ExpressionLabel)>,
    /// group -> expression name -> count.
    pub histogram: BTreeMap<u8, BTreeMap<String, u64>>,
    /// Frames where ObjBase matched two or more expressions.
    pub collisions: usize,
}

/// Annotates every frame, emitting the binary channel and the per-group
/// expression histogram. Frame order is preserved regardless of parallelism.
pub fn annotate_expressions(
    frames: &[AuFrame],
    tax: &ExpressionTaxonomy,
    cfg: &ExpressionConfig,
) -> Result<ExpressionAnnotation> {
    tax.validate()?;
    cfg.validate()?;

    let labeled: Vec<(String, u8, ExpressionLabel, usize)> = frames
        .par_iter()
        .map(|frame| {
            let label = label_frame(frame, tax, cfg);
            let collisions = match cfg.algorithm {
                Algorithm::ObjBase => usize::from(obj_base_candidates(frame, tax) >= 2),
                Algorithm::ObjLcs => 0,
            };
            (frame.id.clone(), frame.sensitive, label, collisions)
        })
        .collect();

    let name = match cfg.algorithm {
        Algorithm::ObjBase => "ObjBase".to_string(),
        Algorithm::ObjLcs => format!("ObjLCS:{}", cfg.neutral_t),
    };
    let mut channel = LabelChannel::new(name);
    let mut histogram: BTreeMap<u8, BTreeMap<String, u64>> = BTreeMap::new();
    let mut labels = Vec::with_capacity(labeled.len());
    let mut collisions = 0usize;
    for (id, group, label, collided) in labeled {
        collisions += collided;
        if channel
            .labels
            .insert(id.clone(), binarize_happiness(label, tax))
            .is_some()
        {
            return Err(Error::DuplicateId(id));
        }
        *histogram
            .entry(group)
            .or_default()
            .entry(label.name(tax).to_string())
            .or_insert(0) += 1;
        labels.push((id, label));
    }
    Ok(ExpressionAnnotation {
        channel,
        labels,
        histogram,
        collisions,
    })
}
