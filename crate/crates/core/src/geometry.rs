//! Frontality filtering and the three objective attractiveness scores
//! (golden ratio, symmetry, neoclassical canons) with threshold binarization.
//!
//! All scores are pure functions of (face, config), invariant under
//! translation and uniform scaling of the landmarks. Golden ratio is a
//! dimensionless mean of distance quotients with ideal value
//! [`GOLDEN_RATIO`]; symmetry and canon scores are non-negative deviations
//! with ideal value 0.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::data_model::{LabelChannel, LandmarkFace, Point};
use crate::error::{Error, Result};

/// Ideal golden-ratio proportion.
pub const GOLDEN_RATIO: f64 = 1.618;

/// Golden-ratio tolerance values studied per configuration sweep.
pub const DELTA_GR_SET: [f64; 5] = [0.17, 0.18, 0.19, 0.20, 0.21];
/// Symmetry thresholds studied per configuration sweep.
pub const T_SYM_SET: [f64; 5] = [4.0, 4.2, 4.4, 4.6, 4.8];
/// Neoclassical-canon thresholds studied per configuration sweep.
pub const T_NEO_SET: [f64; 5] = [0.26, 0.27, 0.28, 0.29, 0.30];

/// A derived point on a face: either a raw landmark or a simple combination.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PointRef {
    Landmark(usize),
    /// Midpoint of two landmarks.
    Midpoint(usize, usize),
    /// Mean of landmarks 36-41.
    LeftEyeCentroid,
    /// Mean of landmarks 42-47.
    RightEyeCentroid,
    /// Midpoint of the two eye centroids.
    EyeMidpoint,
}

impl PointRef {
    pub fn resolve(&self, points: &[Point]) -> Point {
        match *self {
            PointRef::Landmark(i) => points[i],
            PointRef::Midpoint(i, j) => Point::new(
                (points[i].x + points[j].x) / 2.0,
                (points[i].y + points[j].y) / 2.0,
            ),
            PointRef::LeftEyeCentroid => centroid(points, 36..=41),
            PointRef::RightEyeCentroid => centroid(points, 42..=47),
            PointRef::EyeMidpoint => {
                let l = centroid(points, 36..=41);
                let r = centroid(points, 42..=47);
                Point::new((l.x + r.x) / 2.0, (l.y + r.y) / 2.0)
            }
        }
    }
}

fn centroid(points: &[Point], range: std::ops::RangeInclusive<usize>) -> Point {
    let n = (range.end() - range.start() + 1) as f64;
    let (mut sx, mut sy) = (0.0, 0.0);
    for i in range {
        sx += points[i].x;
        sy += points[i].y;
    }
    Point::new(sx / n, sy / n)
}

fn segment_len(points: &[Point], seg: &(PointRef, PointRef)) -> f64 {
    seg.0.resolve(points).dist(&seg.1.resolve(points))
}

/// One golden-ratio rule: numerator distance over denominator distance,
/// ideally equal to [`GOLDEN_RATIO`].
#[derive(Debug, Clone)]
pub struct RatioRule {
    pub name: String,
    pub numerator: (PointRef, PointRef),
    pub denominator: (PointRef, PointRef),
}

/// One neoclassical canon: the `measured` distance should equal
/// `factor` times the `reference` distance.
#[derive(Debug, Clone)]
pub struct CanonRule {
    pub name: String,
    pub measured: (PointRef, PointRef),
    pub reference: (PointRef, PointRef),
    pub factor: f64,
}

/// Configuration for frontality filtering, scoring, and binarization.
#[derive(Debug, Clone)]
pub struct GeometryConfig {
    /// Max eye-to-nose distance asymmetry (pixels) for a face to count as frontal.
    pub beta_frontal: f64,
    /// Golden-ratio tolerance: label 1 inside [1.618 - delta, 1.618 + delta].
    pub delta_gr: f64,
    /// Symmetry threshold: label 1 inside [0, t_sym].
    pub t_sym: f64,
    /// Canon threshold: label 1 inside [0, t_neo].
    pub t_neo: f64,
    /// Swap keep/discard semantics of the frontality filter.
    pub invert_frontality: bool,
    pub ratio_set: Vec<RatioRule>,
    pub canon_set: Vec<CanonRule>,
    /// (left, right) landmark index pairs mirrored across the face midline.
    pub mirror_pairs: Vec<(usize, usize)>,
    /// Landmark indices defining the vertical symmetry axis.
    pub midline_indices: Vec<usize>,
}

impl Default for GeometryConfig {
    fn default() -> Self {
        GeometryConfig {
            beta_frontal: 10.0,
            delta_gr: 0.19,
            t_sym: 4.2,
            t_neo: 0.29,
            invert_frontality: false,
            ratio_set: default_ratio_set(),
            canon_set: default_canon_set(),
            mirror_pairs: default_mirror_pairs(),
            midline_indices: vec![27, 28, 29, 30, 33, 51, 57, 8],
        }
    }
}

/// Face height (mid-brow to chin) over face width, and eye-line-to-chin
/// over nose-bottom-to-chin.
pub fn default_ratio_set() -> Vec<RatioRule> {
    vec![
        RatioRule {
            name: "face_height_over_width".into(),
            numerator: (PointRef::Midpoint(21, 22), PointRef::Landmark(8)),
            denominator: (PointRef::Landmark(0), PointRef::Landmark(16)),
        },
        RatioRule {
            name: "eye_chin_over_nose_chin".into(),
            numerator: (PointRef::EyeMidpoint, PointRef::Landmark(8)),
            denominator: (PointRef::Landmark(33), PointRef::Landmark(8)),
        },
    ]
}

/// Inter-ocular distance = nose width; mouth width = 1.5 x nose width;
/// nose width = 1/4 face width.
pub fn default_canon_set() -> Vec<CanonRule> {
    vec![
        CanonRule {
            name: "iod_equals_nose_width".into(),
            measured: (PointRef::LeftEyeCentroid, PointRef::RightEyeCentroid),
            reference: (PointRef::Landmark(31), PointRef::Landmark(35)),
            factor: 1.0,
        },
        CanonRule {
            name: "mouth_is_1_5_nose".into(),
            measured: (PointRef::Landmark(48), PointRef::Landmark(54)),
            reference: (PointRef::Landmark(31), PointRef::Landmark(35)),
            factor: 1.5,
        },
        CanonRule {
            name: "nose_is_quarter_face".into(),
            measured: (PointRef::Landmark(31), PointRef::Landmark(35)),
            reference: (PointRef::Landmark(0), PointRef::Landmark(16)),
            factor: 0.25,
        },
    ]
}

/// Standard left/right landmark correspondences of the 68-point scheme.
pub fn default_mirror_pairs() -> Vec<(usize, usize)> {
    let mut pairs = Vec::with_capacity(29);
    for i in 0..8 {
        pairs.push((i, 16 - i)); // jaw
    }
    for i in 0..5 {
        pairs.push((17 + i, 26 - i)); // brows
    }
    pairs.push((31, 35)); // nose wings
    pairs.push((32, 34));
    pairs.extend([(36, 45), (37, 44), (38, 43), (39, 42), (40, 47), (41, 46)]); // eyes
    pairs.extend([(48, 54), (49, 53), (50, 52), (59, 55), (58, 56)]); // outer mouth
    pairs.extend([(60, 64), (61, 63), (67, 65)]); // inner mouth
    pairs
}

impl GeometryConfig {
    pub fn validate(&self) -> Result<()> {
        if self.beta_frontal <= 0.0
            || self.delta_gr <= 0.0
            || self.t_sym <= 0.0
            || self.t_neo <= 0.0
        {
            return Err(Error::Config(
                "beta_frontal, delta_gr, t_sym and t_neo must all be positive".into(),
            ));
        }
        for &(l, r) in &self.mirror_pairs {
            if l > 67 || r > 67 {
                return Err(Error::Config(format!(
                    "mirror pair ({l}, {r}) out of range"
                )));
            }
            if self.midline_indices.contains(&l) || self.midline_indices.contains(&r) {
                return Err(Error::Config(format!(
                    "mirror pair ({l}, {r}) overlaps the midline set"
                )));
            }
        }
        if self.midline_indices.iter().any(|&i| i > 67) {
            return Err(Error::Config("midline index out of range".into()));
        }
        Ok(())
    }
}

/// Scores for one face. Score fields are populated only for frontal faces.
#[derive(Debug, Clone, PartialEq)]
pub struct AttractivenessScores {
    pub id: String,
    pub frontal: bool,
    pub golden_ratio: Option<f64>,
    pub symmetry: Option<f64>,
    pub neocanons: Option<f64>,
}

fn check_not_degenerate(face: &LandmarkFace) -> Result<()> {
    let first = face.points[0];
    if face.points.iter().all(|p| *p == first) {
        return Err(Error::Geometry(format!(
            "face `{}`: all points identical",
            face.id
        )));
    }
    Ok(())
}

fn eye_centroids(points: &[Point]) -> (Point, Point) {
    (centroid(points, 36..=41), centroid(points, 42..=47))
}

/// Inter-ocular distance: distance between the two eye centroids.
pub fn interocular_distance(face: &LandmarkFace) -> f64 {
    let (l, r) = eye_centroids(&face.points);
    l.dist(&r)
}

/// Keeps a face iff its eye-to-nose-tip distances are near-symmetric:
/// |d_left - d_right| <= beta. `invert_frontality` flips the decision.
pub fn frontality_filter(face: &LandmarkFace, cfg: &GeometryConfig) -> Result<bool> {
    check_not_degenerate(face)?;
    let nose_tip = face.points[30];
    let (l, r) = eye_centroids(&face.points);
    let asymmetry = (l.dist(&nose_tip) - r.dist(&nose_tip)).abs();
    let keep = asymmetry <= cfg.beta_frontal;
    Ok(keep != cfg.invert_frontality)
}

/// Mean of the configured golden-ratio quotients.
pub fn golden_ratio_score(face: &LandmarkFace, cfg: &GeometryConfig) -> Result<f64> {
    if cfg.ratio_set.is_empty() {
        return Err(Error::Config("empty ratio set".into()));
    }
    let mut sum = 0.0;
    for rule in &cfg.ratio_set {
        let den = segment_len(&face.points, &rule.denominator);
        if den == 0.0 {
            return Err(Error::Geometry(format!(
                "face `{}`: zero-length denominator in ratio `{}`",
                face.id, rule.name
            )));
        }
        sum += segment_len(&face.points, &rule.numerator) / den;
    }
    Ok(sum / cfg.ratio_set.len() as f64)
}

/// Deviation from mirror symmetry about the vertical axis through the
/// midline landmarks, normalized by inter-ocular distance:
///
/// score = 100 / (|pairs| * IOD) * sum over pairs (i, j) of
///         |(x_mid - x_i) - (x_j - x_mid)| + |y_i - y_j|
pub fn symmetry_score(face: &LandmarkFace, cfg: &GeometryConfig) -> Result<f64> {
    if cfg.mirror_pairs.is_empty() || cfg.midline_indices.is_empty() {
        return Err(Error::Config("empty mirror pairs or midline set".into()));
    }
    let iod = interocular_distance(face);
    if iod == 0.0 {
        return Err(Error::Geometry(format!(
            "face `{}`: zero inter-ocular distance",
            face.id
        )));
    }
    let x_mid = cfg
        .midline_indices
        .iter()
        .map(|&i| face.points[i].x)
        .sum::<f64>()
        / cfg.midline_indices.len() as f64;
    let total: f64 = cfg
        .mirror_pairs
        .iter()
        .map(|&(i, j)| {
            let (pi, pj) = (face.points[i], face.points[j]);
            ((x_mid - pi.x) - (pj.x - x_mid)).abs() + (pi.y - pj.y).abs()
        })
        .sum();
    Ok(100.0 / (cfg.mirror_pairs.len() as f64 * iod) * total)
}

/// Mean relative deviation from the configured canon rules.
pub fn neocanons_score(face: &LandmarkFace, cfg: &GeometryConfig) -> Result<f64> {
    if cfg.canon_set.is_empty() {
        return Err(Error::Config("empty canon set".into()));
    }
    let mut sum = 0.0;
    for rule in &cfg.canon_set {
        let target = rule.factor * segment_len(&face.points, &rule.reference);
        if target == 0.0 {
            return Err(Error::Geometry(format!(
                "face `{}`: zero target segment in canon `{}`",
                face.id, rule.name
            )));
        }
        let measured = segment_len(&face.points, &rule.measured);
        sum += (measured - target).abs() / target;
    }
    Ok(sum / cfg.canon_set.len() as f64)
}

/// Applies the frontality filter and computes all three scores for a face.
/// Non-frontal faces get `None` scores.
pub fn score_face(face: &LandmarkFace, cfg: &GeometryConfig) -> Result<AttractivenessScores> {
    if !frontality_filter(face, cfg)? {
        return Ok(AttractivenessScores {
            id: face.id.clone(),
            frontal: false,
            golden_ratio: None,
            symmetry: None,
            neocanons: None,
        });
    }
    Ok(AttractivenessScores {
        id: face.id.clone(),
        frontal: true,
        golden_ratio: Some(golden_ratio_score(face, cfg)?),
        symmetry: Some(symmetry_score(face, cfg)?),
        neocanons: Some(neocanons_score(face, cfg)?),
    })
}

/// Binary labels for one scored face.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AttractivenessLabels {
    pub gr: u8,
    pub s: u8,
    pub nc: u8,
}

/// Thresholds scores into the three binary labels. Interval endpoints are
/// inclusive, so the ideal values always label 1.
pub fn binarize_attractiveness(
    scores: &AttractivenessScores,
    cfg: &GeometryConfig,
) -> Result<AttractivenessLabels> {
    let (gr, sym, neo) = match (scores.golden_ratio, scores.symmetry, scores.neocanons) {
        (Some(g), Some(s), Some(n)) if scores.frontal => (g, s, n),
        _ => {
            return Err(Error::Validation(format!(
                "face `{}` is not frontal; no labels",
                scores.id
            )))
        }
    };
    Ok(AttractivenessLabels {
        gr: u8::from(gr >= GOLDEN_RATIO - cfg.delta_gr && gr <= GOLDEN_RATIO + cfg.delta_gr),
        s: u8::from(sym <= cfg.t_sym),
        nc: u8::from(neo <= cfg.t_neo),
    })
}

/// Batch annotation result: per-face scores plus the three binary channels
/// (frontal faces only).
#[derive(Debug, Clone)]
pub struct AttractivenessAnnotation {
    pub scores: Vec<AttractivenessScores>,
    /// Channels named `GR:{delta}`, `S:{t_sym}`, `NC:{t_neo}`.
    pub gr_channel: LabelChannel,
    pub s_channel: LabelChannel,
    pub nc_channel: LabelChannel,
    pub kept: usize,
    pub total: usize,
}

/// Scores and binarizes a whole dataset. Non-frontal faces appear in
/// `scores` but are excluded from every channel; the keep rate is reported
/// through `kept` / `total`, never asserted.
pub fn annotate_attractiveness(
    faces: &[LandmarkFace],
    cfg: &GeometryConfig,
) -> Result<AttractivenessAnnotation> {
    cfg.validate()?;
    let scores: Vec<AttractivenessScores> = faces
        .par_iter()
        .map(|face| score_face(face, cfg))
        .collect::<Result<_>>()?;

    let mut gr_channel = LabelChannel::new(format!("GR:{}", cfg.delta_gr));
    let mut s_channel = LabelChannel::new(format!("S:{}", cfg.t_sym));
    let mut nc_channel = LabelChannel::new(format!("NC:{}", cfg.t_neo));
    let mut kept = 0usize;
    for s in &scores {
        if !s.frontal {
            continue;
        }
        kept += 1;
        let labels = binarize_attractiveness(s, cfg)?;
        gr_channel.labels.insert(s.id.clone(), labels.gr);
        s_channel.labels.insert(s.id.clone(), labels.s);
        nc_channel.labels.insert(s.id.clone(), labels.nc);
    }
    Ok(AttractivenessAnnotation {
        scores,
        gr_channel,
        s_channel,
        nc_channel,
        kept,
        total: faces.len(),
    })
}

/// Per-(group, label) counts of one channel, for distribution reports.
pub fn channel_distribution(
    channel: &LabelChannel,
    groups: &BTreeMap<String, u8>,
) -> BTreeMap<(u8, u8), u64> {
    let mut counts = BTreeMap::new();
    for (id, &label) in &channel.labels {
        if let Some(&g) = groups.get(id) {
            *counts.entry((g, label)).or_insert(0) += 1;
        }
    }
    counts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synthetic;

    fn cfg() -> GeometryConfig {
        GeometryConfig::default()
    }

    #[test]
    fn default_config_is_valid_with_default_beta() {
        let c = cfg();
        c.validate().unwrap();
        assert_eq!(c.beta_frontal, 10.0);
        assert_eq!(c.mirror_pairs.len(), 29);
    }

    #[test]
    fn frontality_keeps_symmetric_face() {
        let face = synthetic::symmetric_face("f", 0);
        assert!(frontality_filter(&face, &cfg()).unwrap());
    }

    #[test]
    fn frontality_rejects_large_asymmetry() {
        // Pull the whole right eye away from the nose tip so
        // d_R - d_L = 15 exceeds beta = 10.
        let mut face = synthetic::symmetric_face("f", 0);
        let nose = face.points[30];
        let (_, r) = (
            centroid(&face.points, 36..=41),
            centroid(&face.points, 42..=47),
        );
        let d = r.dist(&nose);
        let scale = (d + 15.0) / d;
        for i in 42..=47 {
            face.points[i].x = nose.x + (face.points[i].x - nose.x) * scale;
            face.points[i].y = nose.y + (face.points[i].y - nose.y) * scale;
        }
        let (l2, r2) = eye_centroids(&face.points);
        let diff = (r2.dist(&nose) - l2.dist(&nose)).abs();
        assert!((diff - 15.0).abs() < 1e-9);
        assert!(!frontality_filter(&face, &cfg()).unwrap());

        let mut inverted = cfg();
        inverted.invert_frontality = true;
        assert!(frontality_filter(&face, &inverted).unwrap());
    }

    #[test]
    fn frontality_rejects_degenerate_face() {
        let face = LandmarkFace {
            id: "d".into(),
            points: vec![Point::new(1.0, 1.0); 68],
            sensitive: 0,
        };
        assert!(matches!(
            frontality_filter(&face, &cfg()),
            Err(Error::Geometry(_))
        ));
    }

    #[test]
    fn golden_ratio_fixed_point() {
        let face = synthetic::golden_ratio_face("g");
        let score = golden_ratio_score(&face, &cfg()).unwrap();
        assert!((score - GOLDEN_RATIO).abs() < 1e-9, "score = {score}");
    }

    #[test]
    fn golden_ratio_is_mean_of_ratios() {
        let face = synthetic::face_with_ratios("g", 1.5, 1.7);
        let score = golden_ratio_score(&face, &cfg()).unwrap();
        assert!((score - 1.6).abs() < 1e-9, "score = {score}");
    }

    #[test]
    fn golden_ratio_zero_denominator_names_rule() {
        let mut face = synthetic::symmetric_face("g", 0);
        face.points[16] = face.points[0]; // face width collapses
        match golden_ratio_score(&face, &cfg()) {
            Err(Error::Geometry(msg)) => assert!(msg.contains("face_height_over_width")),
            other => panic!("expected geometry error, got {other:?}"),
        }
    }

    #[test]
    fn symmetry_zero_for_mirrored_face() {
        let face = synthetic::symmetric_face("s", 0);
        assert_eq!(symmetry_score(&face, &cfg()).unwrap(), 0.0);
    }

    #[test]
    fn symmetry_unit_displacement_adds_one_over_pairs() {
        // Displacing one mirrored landmark horizontally by IOD/100 away from
        // the axis adds exactly 1/|pairs| to the score.
        let mut face = synthetic::symmetric_face("s", 0);
        let iod = interocular_distance(&face);
        face.points[0].x -= iod / 100.0; // jaw point, not part of eyes or midline
        let score = symmetry_score(&face, &cfg()).unwrap();
        let expected = 1.0 / cfg().mirror_pairs.len() as f64;
        assert!((score - expected).abs() < 1e-12, "score = {score}");
    }

    #[test]
    fn symmetry_zero_iod_is_geometry_error() {
        let mut face = synthetic::symmetric_face("s", 0);
        let center = Point::new(0.0, 0.0);
        for i in 36..=47 {
            face.points[i] = center; // both eye centroids collapse
        }
        assert!(matches!(
            symmetry_score(&face, &cfg()),
            Err(Error::Geometry(_))
        ));
    }

    #[test]
    fn neocanons_zero_for_canon_perfect_face() {
        let face = synthetic::canon_perfect_face("c");
        assert_eq!(neocanons_score(&face, &cfg()).unwrap(), 0.0);
    }

    #[test]
    fn neocanons_zero_target_names_rule() {
        let mut face = synthetic::symmetric_face("c", 0);
        face.points[35] = face.points[31]; // nose width collapses
        match neocanons_score(&face, &cfg()) {
            Err(Error::Geometry(msg)) => assert!(msg.contains("iod_equals_nose_width")),
            other => panic!("expected geometry error, got {other:?}"),
        }
    }

    #[test]
    fn neocanons_single_violation_averages() {
        // Start canon-perfect, then widen the mouth to 1.5x its target:
        // one deviation of 0.5 among 3 rules.
        let mut face = synthetic::canon_perfect_face("c");
        let half_mouth = (face.points[54].x - face.points[48].x) / 2.0;
        let cx = (face.points[54].x + face.points[48].x) / 2.0;
        face.points[48].x = cx - half_mouth * 1.5;
        face.points[54].x = cx + half_mouth * 1.5;
        let score = neocanons_score(&face, &cfg()).unwrap();
        assert!((score - 0.5 / 3.0).abs() < 1e-12, "score = {score}");
    }

    #[test]
    fn binarize_boundaries_are_inclusive() {
        let mk = |gr: f64, sym: f64, neo: f64| AttractivenessScores {
            id: "x".into(),
            frontal: true,
            golden_ratio: Some(gr),
            symmetry: Some(sym),
            neocanons: Some(neo),
        };
        let mut c = cfg();
        c.delta_gr = 0.1;
        c.t_sym = 4.0;
        // 1.518 is exactly on the lower interval edge.
        assert_eq!(
            binarize_attractiveness(&mk(1.518, 0.0, 0.0), &c)
                .unwrap()
                .gr,
            1
        );
        for delta in DELTA_GR_SET {
            let mut c = cfg();
            c.delta_gr = delta;
            assert_eq!(
                binarize_attractiveness(&mk(1.618, 0.0, 0.0), &c)
                    .unwrap()
                    .gr,
                1
            );
        }
        assert_eq!(
            binarize_attractiveness(&mk(1.618, 3.2, 0.0), &c).unwrap().s,
            1
        );
        assert_eq!(
            binarize_attractiveness(&mk(1.618, 4.5, 0.0), &c).unwrap().s,
            0
        );
    }

    #[test]
    fn binarize_requires_frontal_scores() {
        let scores = AttractivenessScores {
            id: "x".into(),
            frontal: false,
            golden_ratio: None,
            symmetry: None,
            neocanons: None,
        };
        assert!(binarize_attractiveness(&scores, &cfg()).is_err());
    }

    #[test]
    fn annotation_excludes_non_frontal_faces() {
        let mut faces = vec![
            synthetic::symmetric_face("a", 0),
            synthetic::symmetric_face("b", 1),
        ];
        // Make face b grossly asymmetric in eye-to-nose distance.
        for i in 42..=47 {
            faces[1].points[i].x += 200.0;
        }
        let ann = annotate_attractiveness(&faces, &cfg()).unwrap();
        assert_eq!(ann.total, 2);
        assert_eq!(ann.kept, 1);
        assert!(ann.gr_channel.labels.contains_key("a"));
        assert!(!ann.gr_channel.labels.contains_key("b"));
        assert_eq!(ann.gr_channel.name, "GR:0.19");
        assert!(!ann.scores[1].frontal);
        assert_eq!(ann.scores[1].golden_ratio, None);
    }

    // Independent recomputation of all three scores, written directly
    // against the default configuration's definitions.
    fn oracle_scores(face: &LandmarkFace) -> (f64, f64, f64) {
        let p = &face.points;
        let mean = |lo: usize, hi: usize| {
            let n = (hi - lo + 1) as f64;
            let mut s = (0.0, 0.0);
            for q in &p[lo..=hi] {
                s.0 += q.x;
                s.1 += q.y;
            }
            (s.0 / n, s.1 / n)
        };
        let d = |a: (f64, f64), b: (f64, f64)| ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt();
        let pt = |i: usize| (p[i].x, p[i].y);

        let le = mean(36, 41);
        let re = mean(42, 47);
        let eyemid = ((le.0 + re.0) / 2.0, (le.1 + re.1) / 2.0);
        let midbrow = ((p[21].x + p[22].x) / 2.0, (p[21].y + p[22].y) / 2.0);

        let r1 = d(midbrow, pt(8)) / d(pt(0), pt(16));
        let r2 = d(eyemid, pt(8)) / d(pt(33), pt(8));
        let gr = (r1 + r2) / 2.0;

        let iod = d(le, re);
        let midline = [27usize, 28, 29, 30, 33, 51, 57, 8];
        let x_mid = midline.iter().map(|&i| p[i].x).sum::<f64>() / midline.len() as f64;
        let pairs = default_mirror_pairs();
        let mut total = 0.0;
        for &(i, j) in &pairs {
            total += ((x_mid - p[i].x) - (p[j].x - x_mid)).abs() + (p[i].y - p[j].y).abs();
        }
        let sym = 100.0 / (pairs.len() as f64 * iod) * total;

        let nose = d(pt(31), pt(35));
        let mut neo = (d(le, re) - nose).abs() / nose;
        neo += (d(pt(48), pt(54)) - 1.5 * nose).abs() / (1.5 * nose);
        let quarter = 0.25 * d(pt(0), pt(16));
        neo += (nose - quarter).abs() / quarter;
        neo /= 3.0;

        (gr, sym, neo)
    }

    #[test]
    fn scores_match_independent_recomputation_on_fixtures() {
        let c = cfg();
        for (i, face) in synthetic::fixture_faces(10).iter().enumerate() {
            let (gr_o, sym_o, neo_o) = oracle_scores(face);
            let gr = golden_ratio_score(face, &c).unwrap();
            let sym = symmetry_score(face, &c).unwrap();
            let neo = neocanons_score(face, &c).unwrap();
            assert!((gr - gr_o).abs() < 1e-9, "face {i}: gr {gr} vs {gr_o}");
            assert!((sym - sym_o).abs() < 1e-9, "face {i}: sym {sym} vs {sym_o}");
            assert!((neo - neo_o).abs() < 1e-9, "face {i}: neo {neo} vs {neo_o}");
        }
    }

    #[test]
    fn fixture_scores_frozen_values() {
        // Values computed once with oracle_scores above and pinned.
        let c = cfg();
        let faces = synthetic::fixture_faces(2);
        let expect = FROZEN_FIXTURE_SCORES;
        for (i, (face, (gr_e, sym_e, neo_e))) in faces.iter().zip(expect).enumerate() {
            let gr = golden_ratio_score(face, &c).unwrap();
            let sym = symmetry_score(face, &c).unwrap();
            let neo = neocanons_score(face, &c).unwrap();
            assert!((gr - gr_e).abs() < 1e-12, "face {i}: gr {gr}");
            assert!((sym - sym_e).abs() < 1e-12, "face {i}: sym {sym}");
            assert!((neo - neo_e).abs() < 1e-12, "face {i}: neo {neo}");
        }
    }

    /// (golden_ratio, symmetry, neocanons) of the first two fixture faces,
    /// computed once with oracle_scores and pinned.
    const FROZEN_FIXTURE_SCORES: [(f64, f64, f64); 2] = [
        (1.3532421706659308, 7.573168753832019, 0.7192257385979582),
        (1.3197979179665236, 7.380874396459674, 0.6644319208875515),
    ];
}
