//! Group-conditioned confusion statistics and fairness gaps.
//!
//! All rates follow the same undefined policy: a zero denominator yields
//! `None` rather than a coerced 0, and `None` propagates into the gap.
//! Tallies are associative, so partitioned counting merges cleanly.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::data_model::LabelChannel;
use crate::error::{Error, Result};

/// Confusion counts of one group. Positive class is 1.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionCounts {
    pub true_pos: u64,
    pub false_pos: u64,
    pub true_neg: u64,
    pub false_neg: u64,
}

impl ConfusionCounts {
    pub fn total(&self) -> u64 {
        self.true_pos + self.false_pos + self.true_neg + self.false_neg
    }

    fn add(&mut self, pred: u8, truth: u8) {
        match (pred, truth) {
            (1, 1) => self.true_pos += 1,
            (1, 0) => self.false_pos += 1,
            (0, 0) => self.true_neg += 1,
            _ => self.false_neg += 1,
        }
    }

    fn merged(&self, other: &ConfusionCounts) -> ConfusionCounts {
        ConfusionCounts {
            true_pos: self.true_pos + other.true_pos,
            false_pos: self.false_pos + other.false_pos,
            true_neg: self.true_neg + other.true_neg,
            false_neg: self.false_neg + other.false_neg,
        }
    }
}

/// Confusion counts split by the binary sensitive group.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupedConfusion {
    pub groups: [ConfusionCounts; 2],
}

impl GroupedConfusion {
    /// Tallies aligned prediction/truth/group slices (values all 0 or 1).
    pub fn from_slices(pred: &[u8], truth: &[u8], group: &[u8]) -> GroupedConfusion {
        debug_assert!(pred.len() == truth.len() && truth.len() == group.len());
        let mut c = GroupedConfusion::default();
        for i in 0..pred.len() {
            c.groups[group[i] as usize].add(pred[i], truth[i]);
        }
        c
    }

    pub fn total(&self) -> u64 {
        self.groups[0].total() + self.groups[1].total()
    }

    /// Associative merge of partition tallies.
    pub fn merged(&self, other: &GroupedConfusion) -> GroupedConfusion {
        GroupedConfusion {
            groups: [
                self.groups[0].merged(&other.groups[0]),
                self.groups[1].merged(&other.groups[1]),
            ],
        }
    }
}

fn check_binary(name: &str, values: impl Iterator<Item = u8>) -> Result<()> {
    for v in values {
        if v > 1 {
            return Err(Error::Validation(format!(
                "{name} contains value {v}, expected 0 or 1"
            )));
        }
    }
    Ok(())
}

/// Verifies the three maps cover exactly the same ids and returns them as
/// aligned slices in lexicographic id order.
fn align(
    pred: &BTreeMap<String, u8>,
    truth: &LabelChannel,
    groups: &BTreeMap<String, u8>,
) -> Result<(Vec<u8>, Vec<u8>, Vec<u8>)> {
    let mut missing: Vec<String> = Vec::new();
    for id in pred.keys() {
        if !truth.labels.contains_key(id) || !groups.contains_key(id) {
            missing.push(id.clone());
        }
    }
    for id in truth.labels.keys().chain(groups.keys()) {
        if !pred.contains_key(id) {
            missing.push(id.clone());
        }
    }
    if !missing.is_empty() {
        missing.sort();
        missing.dedup();
        return Err(Error::Coverage(missing));
    }
    let p: Vec<u8> = pred.values().copied().collect();
    let t: Vec<u8> = pred.keys().map(|id| truth.labels[id]).collect();
    let g: Vec<u8> = pred.keys().map(|id| groups[id]).collect();
    check_binary("pred", p.iter().copied())?;
    check_binary("truth", t.iter().copied())?;
    check_binary("groups", g.iter().copied())?;
    Ok((p, t, g))
}

/// Exhaustive per-group confusion tally over id-aligned maps.
pub fn grouped_confusion(
    pred: &BTreeMap<String, u8>,
    truth: &LabelChannel,
    groups: &BTreeMap<String, u8>,
) -> Result<GroupedConfusion> {
    let (p, t, g) = align(pred, truth, groups)?;
    Ok(GroupedConfusion::from_slices(&p, &t, &g))
}

fn rate(num: u64, den: u64) -> Option<f64> {
    if den == 0 {
        None
    } else {
        Some(num as f64 / den as f64)
    }
}

fn gap(a: Option<f64>, b: Option<f64>) -> Option<f64> {
    match (a, b) {
        (Some(a), Some(b)) => Some((a - b).abs()),
        _ => None,
    }
}

/// Equality-of-opportunity gap: |FNR_0 - FNR_1|, undefined when either
/// group has no positives.
pub fn delta_eoo(c: &GroupedConfusion) -> Option<f64> {
    let fnr = |g: &ConfusionCounts| rate(g.false_neg, g.false_neg + g.true_pos);
    gap(fnr(&c.groups[0]), fnr(&c.groups[1]))
}

/// (|TPR_0 - TPR_1|, |FPR_0 - FPR_1|) with per-component undefined policy.
pub fn delta_tpr_fpr(c: &GroupedConfusion) -> (Option<f64>, Option<f64>) {
    let tpr = |g: &ConfusionCounts| rate(g.true_pos, g.true_pos + g.false_neg);
    let fpr = |g: &ConfusionCounts| rate(g.false_pos, g.false_pos + g.true_neg);
    (
        gap(tpr(&c.groups[0]), tpr(&c.groups[1])),
        gap(fpr(&c.groups[0]), fpr(&c.groups[1])),
    )
}

/// Calders-Verwer discrimination from per-group positive-prediction counts:
/// signed = P(pred=1 | g=1) - P(pred=1 | g=0). Label-free.
pub fn delta_disc_from_counts(pos: [u64; 2], n: [u64; 2]) -> Option<(f64, f64)> {
    let p0 = rate(pos[0], n[0])?;
    let p1 = rate(pos[1], n[1])?;
    let signed = p1 - p0;
    Some((signed, signed.abs()))
}

/// Calders-Verwer discrimination over id-aligned maps; `(signed, absolute)`,
/// undefined when either group is empty.
pub fn delta_disc(
    pred: &BTreeMap<String, u8>,
    groups: &BTreeMap<String, u8>,
) -> Result<Option<(f64, f64)>> {
    let mut missing: Vec<String> = pred
        .keys()
        .filter(|id| !groups.contains_key(*id))
        .chain(groups.keys().filter(|id| !pred.contains_key(*id)))
        .cloned()
        .collect();
    if !missing.is_empty() {
        missing.sort();
        missing.dedup();
        return Err(Error::Coverage(missing));
    }
    check_binary("pred", pred.values().copied())?;
    check_binary("groups", groups.values().copied())?;
    let mut pos = [0u64; 2];
    let mut n = [0u64; 2];
    for (id, &p) in pred {
        let g = groups[id] as usize;
        n[g] += 1;
        pos[g] += u64::from(p == 1);
    }
    Ok(delta_disc_from_counts(pos, n))
}

/// All metrics over one (predictions, truth, groups) triple.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FairnessReport {
    pub accuracy_overall: Option<f64>,
    pub accuracy_per_group: [Option<f64>; 2],
    pub delta_tpr: Option<f64>,
    pub delta_fpr: Option<f64>,
    pub delta_eoo: Option<f64>,
    /// |signed_disc|
    pub delta_disc: Option<f64>,
    /// P(pred=1 | g=1) - P(pred=1 | g=0)
    pub signed_disc: Option<f64>,
    pub confusion: GroupedConfusion,
}

/// Computes a report directly from aligned slices.
pub fn fairness_report_from_slices(pred: &[u8], truth: &[u8], group: &[u8]) -> FairnessReport {
    let c = GroupedConfusion::from_slices(pred, truth, group);
    let correct = |g: &ConfusionCounts| g.true_pos + g.true_neg;
    let (delta_tpr, delta_fpr) = delta_tpr_fpr(&c);
    let mut pos = [0u64; 2];
    let mut n = [0u64; 2];
    for (g, counts) in c.groups.iter().enumerate() {
        pos[g] = counts.true_pos + counts.false_pos;
        n[g] = counts.total();
    }
    let disc = delta_disc_from_counts(pos, n);
    FairnessReport {
        accuracy_overall: rate(correct(&c.groups[0]) + correct(&c.groups[1]), c.total()),
        accuracy_per_group: [
            rate(correct(&c.groups[0]), c.groups[0].total()),
            rate(correct(&c.groups[1]), c.groups[1].total()),
        ],
        delta_tpr,
        delta_fpr,
        delta_eoo: delta_eoo(&c),
        delta_disc: disc.map(|(_, a)| a),
        signed_disc: disc.map(|(s, _)| s),
        confusion: c,
    }
}

/// Computes a report over id-aligned maps.
pub fn fairness_report(
    pred: &BTreeMap<String, u8>,
    truth: &LabelChannel,
    groups: &BTreeMap<String, u8>,
) -> Result<FairnessReport> {
    let (p, t, g) = align(pred, truth, groups)?;
    Ok(fairness_report_from_slices(&p, &t, &g))
}
