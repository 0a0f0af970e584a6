//! Dataset types and file ingestion/validation.
//!
//! All tabular inputs are UTF-8 CSV with a mandatory header row, `.` decimal
//! separator and no thousands separators. A JSON mirror format (one top-level
//! array of objects with identical field names) is accepted for every loader;
//! the format is picked by file extension (`.json` vs anything else).
//!
//! Loaded structures are immutable after construction and safe to share
//! across threads. Loaders never drop or invent rows.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

/// Number of points in the standard 68-point facial landmark scheme.
pub const NUM_LANDMARKS: usize = 68;

/// A 2-D landmark point in pixel coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    /// Euclidean distance to `other`.
    pub fn dist(&self, other: &Point) -> f64 {
        ((self.x - other.x).powi(2) + (self.y - other.y).powi(2)).sqrt()
    }
}

/// One face as 68 landmark points plus a binary sensitive-group attribute.
#[derive(Debug, Clone, PartialEq)]
pub struct LandmarkFace {
    pub id: String,
    pub points: Vec<Point>,
    /// Group identifier, 0 or 1 (e.g. gender expression).
    pub sensitive: u8,
}

impl LandmarkFace {
    pub fn validate(&self) -> Result<()> {
        if self.points.len() != NUM_LANDMARKS {
            return Err(Error::Validation(format!(
                "face `{}` has {} points, expected {}",
                self.id,
                self.points.len(),
                NUM_LANDMARKS
            )));
        }
        if let Some(p) = self
            .points
            .iter()
            .find(|p| !p.x.is_finite() || !p.y.is_finite())
        {
            return Err(Error::Validation(format!(
                "face `{}` has non-finite coordinate ({}, {})",
                self.id, p.x, p.y
            )));
        }
        if self.sensitive > 1 {
            return Err(Error::Validation(format!(
                "face `{}` has sensitive={}, expected 0 or 1",
                self.id, self.sensitive
            )));
        }
        Ok(())
    }
}

/// Per-face action-unit presence flags and intensities.
///
/// `presence` and `intensity` always share the same key set. An AU with
/// presence 0 keeps its raw intensity but scores as 0 downstream; use
/// [`AuFrame::effective_intensity`] for anything that feeds a decision.
#[derive(Debug, Clone, PartialEq)]
pub struct AuFrame {
    pub id: String,
    pub presence: BTreeMap<u8, u8>,
    /// Raw intensity per AU, in [0, 5].
    pub intensity: BTreeMap<u8, f64>,
    pub sensitive: u8,
}

impl AuFrame {
    /// Intensity gated by presence: absent or inactive AUs contribute 0.
    pub fn effective_intensity(&self, au: u8) -> f64 {
        match self.presence.get(&au) {
            Some(1) => *self.intensity.get(&au).unwrap_or(&0.0),
            _ => 0.0,
        }
    }

    /// AU codes with presence 1, ascending.
    pub fn active_aus(&self) -> Vec<u8> {
        self.presence
            .iter()
            .filter(|(_, &p)| p == 1)
            .map(|(&au, _)| au)
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        let pk: Vec<u8> = self.presence.keys().copied().collect();
        let ik: Vec<u8> = self.intensity.keys().copied().collect();
        if pk != ik {
            return Err(Error::Validation(format!(
                "frame `{}`: presence and intensity key sets differ",
                self.id
            )));
        }
        for (&au, &v) in &self.intensity {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::Validation(format!(
                    "frame `{}`: AU{au} intensity {v} out of range",
                    self.id
                )));
            }
        }
        if self.sensitive > 1 {
            return Err(Error::Validation(format!(
                "frame `{}` has sensitive={}, expected 0 or 1",
                self.id, self.sensitive
            )));
        }
        Ok(())
    }
}

/// One named annotation source over a dataset: id -> label.
///
/// Labels are 0/1 for binary tasks or small expression ids for the 7-way
/// intermediate channel.
#[derive(Debug, Clone, PartialEq)]
pub struct LabelChannel {
    pub name: String,
    pub labels: BTreeMap<String, u8>,
}

impl LabelChannel {
    pub fn new(name: impl Into<String>) -> Self {
        LabelChannel {
            name: name.into(),
            labels: BTreeMap::new(),
        }
    }
}

/// Per-model, per-instance class-probability vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct PredictionMatrix {
    pub model_names: Vec<String>,
    /// id -> one probability vector (length C) per model.
    pub rows: BTreeMap<String, Vec<Vec<f64>>>,
}

impl PredictionMatrix {
    pub fn num_models(&self) -> usize {
        self.model_names.len()
    }

    pub fn num_classes(&self) -> usize {
        self.rows
            .values()
            .next()
            .and_then(|ms| ms.first())
            .map_or(0, Vec::len)
    }

    pub fn ids(&self) -> impl Iterator<Item = &String> {
        self.rows.keys()
    }

    /// Checks uniform shape, non-negative entries and unit row sums (1e-6).
    pub fn validate(&self) -> Result<()> {
        let m = self.num_models();
        let c = self.num_classes();
        for (id, models) in &self.rows {
            if models.len() != m {
                return Err(Error::Shape(format!(
                    "row `{id}` has {} models, expected {m}",
                    models.len()
                )));
            }
            for (i, probs) in models.iter().enumerate() {
                if probs.len() != c {
                    return Err(Error::Shape(format!(
                        "row `{id}` model {i} has {} classes, expected {c}",
                        probs.len()
                    )));
                }
                if probs.iter().any(|&p| p < 0.0 || !p.is_finite()) {
                    return Err(Error::Validation(format!(
                        "row `{id}` model {i} has a negative or non-finite probability"
                    )));
                }
                let sum: f64 = probs.iter().sum();
                if (sum - 1.0).abs() > 1e-6 {
                    return Err(Error::Validation(format!(
                        "row `{id}` model {i} probabilities sum to {sum}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Appends the models of `other` to `self`. Id sets must match exactly.
    pub fn merge(&mut self, other: PredictionMatrix) -> Result<()> {
        let missing: Vec<String> = self
            .rows
            .keys()
            .filter(|id| !other.rows.contains_key(*id))
            .chain(other.rows.keys().filter(|id| !self.rows.contains_key(*id)))
            .cloned()
            .collect();
        if !missing.is_empty() {
            return Err(Error::Coverage(missing));
        }
        if self.num_classes() != other.num_classes() {
            return Err(Error::Shape(format!(
                "cannot merge: {} vs {} classes",
                self.num_classes(),
                other.num_classes()
            )));
        }
        self.model_names.extend(other.model_names);
        for (id, models) in other.rows {
            self.rows
                .get_mut(&id)
                .expect("id checked above")
                .extend(models);
        }
        Ok(())
    }
}

/// Column naming for landmark tables.
#[derive(Debug, Clone)]
pub struct LandmarkSchema {
    pub id_col: String,
    pub sensitive_col: String,
    pub x_prefix: String,
    pub y_prefix: String,
}

impl Default for LandmarkSchema {
    fn default() -> Self {
        LandmarkSchema {
            id_col: "id".into(),
            sensitive_col: "sensitive".into(),
            x_prefix: "x_".into(),
            y_prefix: "y_".into(),
        }
    }
}

impl LandmarkSchema {
    fn x_col(&self, i: usize) -> String {
        format!("{}{}", self.x_prefix, i)
    }

    fn y_col(&self, i: usize) -> String {
        format!("{}{}", self.y_prefix, i)
    }
}

/// Column naming for AU tables: one `AUxx_presence` / `AUxx_intensity`
/// pair per AU code in `aus`.
#[derive(Debug, Clone)]
pub struct AuSchema {
    pub id_col: String,
    pub sensitive_col: String,
    /// AU codes expected in the file, ascending.
    pub aus: Vec<u8>,
    pub presence_suffix: String,
    pub intensity_suffix: String,
}

impl AuSchema {
    pub fn for_aus(aus: Vec<u8>) -> Self {
        AuSchema {
            id_col: "id".into(),
            sensitive_col: "sensitive".into(),
            aus,
            presence_suffix: "_presence".into(),
            intensity_suffix: "_intensity".into(),
        }
    }

    pub fn presence_col(&self, au: u8) -> String {
        format!("AU{au:02}{}", self.presence_suffix)
    }

    pub fn intensity_col(&self, au: u8) -> String {
        format!("AU{au:02}{}", self.intensity_suffix)
    }
}

/// Upper bound of the raw FACS intensity scale.
pub const AU_INTENSITY_MAX: f64 = 5.0;

// ---------------------------------------------------------------------------
// Row abstraction shared by the CSV and JSON paths
// ---------------------------------------------------------------------------

/// One input row: field name -> raw string value.
type Row = BTreeMap<String, String>;

fn is_json(path: &Path) -> bool {
    path.extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("json"))
}

/// Reads a CSV file into rows, or a JSON array of flat objects.
fn read_rows(path: &Path) -> Result<Vec<Row>> {
    if is_json(path) {
        let text = fs::read_to_string(path)?;
        let values: Vec<BTreeMap<String, serde_json::Value>> = serde_json::from_str(&text)?;
        values
            .into_iter()
            .enumerate()
            .map(|(i, obj)| {
                obj.into_iter()
                    .map(|(k, v)| {
                        let s = match v {
                            serde_json::Value::String(s) => s,
                            serde_json::Value::Number(n) => n.to_string(),
                            serde_json::Value::Bool(b) => (b as u8).to_string(),
                            other => {
                                return Err(Error::Parse {
                                    row: i + 1,
                                    msg: format!("field `{k}` has unsupported JSON value {other}"),
                                })
                            }
                        };
                        Ok((k, s))
                    })
                    .collect()
            })
            .collect()
    } else {
        let mut reader = csv::Reader::from_path(path)?;
        let header: Vec<String> = reader.headers()?.iter().map(str::to_owned).collect();
        let mut rows = Vec::new();
        for (i, record) in reader.records().enumerate() {
            let record = record?;
            if record.len() != header.len() {
                return Err(Error::Parse {
                    row: i + 1,
                    msg: format!("{} fields, header has {}", record.len(), header.len()),
                });
            }
            rows.push(
                header
                    .iter()
                    .cloned()
                    .zip(record.iter().map(str::to_owned))
                    .collect(),
            );
        }
        Ok(rows)
    }
}

fn get<'a>(row: &'a Row, col: &str) -> Result<&'a str> {
    row.get(col)
        .map(String::as_str)
        .ok_or_else(|| Error::Schema(col.to_string()))
}

fn parse_f64(row: &Row, col: &str, row_idx: usize) -> Result<f64> {
    let raw = get(row, col)?;
    raw.trim().parse::<f64>().map_err(|_| Error::Parse {
        row: row_idx,
        msg: format!("column `{col}`: `{raw}` is not a number"),
    })
}

fn parse_group(row: &Row, col: &str, row_idx: usize) -> Result<u8> {
    let raw = get(row, col)?;
    match raw.trim() {
        "0" => Ok(0),
        "1" => Ok(1),
        other => Err(Error::Parse {
            row: row_idx,
            msg: format!("column `{col}`: `{other}` is not 0 or 1"),
        }),
    }
}

fn check_duplicates<'a>(ids: impl Iterator<Item = &'a str>) -> Result<()> {
    let mut seen = BTreeSet::new();
    for id in ids {
        if !seen.insert(id) {
            return Err(Error::DuplicateId(id.to_string()));
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Landmarks
// ---------------------------------------------------------------------------

/// Loads one [`LandmarkFace`] per data row, file order preserved.
pub fn load_landmarks(path: &Path, schema: &LandmarkSchema) -> Result<Vec<LandmarkFace>> {
    let rows = read_rows(path)?;
    let mut faces = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let row_idx = i + 1;
        let id = get(row, &schema.id_col)?.to_string();
        let sensitive = parse_group(row, &schema.sensitive_col, row_idx)?;
        let mut points = Vec::with_capacity(NUM_LANDMARKS);
        for p in 0..NUM_LANDMARKS {
            let x = parse_f64(row, &schema.x_col(p), row_idx)?;
            let y = parse_f64(row, &schema.y_col(p), row_idx)?;
            points.push(Point::new(x, y));
        }
        let face = LandmarkFace {
            id,
            points,
            sensitive,
        };
        face.validate()?;
        faces.push(face);
    }
    check_duplicates(faces.iter().map(|f| f.id.as_str()))?;
    Ok(faces)
}

/// Writes faces in the loader's column layout. Numbers use the shortest
/// round-trip decimal form, so a load/write/load cycle is bit-identical.
pub fn write_landmarks(path: &Path, faces: &[LandmarkFace], schema: &LandmarkSchema) -> Result<()> {
    if is_json(path) {
        let objs: Vec<BTreeMap<String, serde_json::Value>> = faces
            .iter()
            .map(|f| {
                let mut obj = BTreeMap::new();
                obj.insert(schema.id_col.clone(), serde_json::Value::from(f.id.clone()));
                obj.insert(
                    schema.sensitive_col.clone(),
                    serde_json::Value::from(f.sensitive),
                );
                for (p, pt) in f.points.iter().enumerate() {
                    obj.insert(schema.x_col(p), serde_json::Value::from(pt.x));
                    obj.insert(schema.y_col(p), serde_json::Value::from(pt.y));
                }
                obj
            })
            .collect();
        fs::write(path, serde_json::to_string_pretty(&objs)?)?;
        return Ok(());
    }
    let mut writer = csv::Writer::from_path(path)?;
    let mut header = vec![schema.id_col.clone(), schema.sensitive_col.clone()];
    for p in 0..NUM_LANDMARKS {
        header.push(schema.x_col(p));
        header.push(schema.y_col(p));
    }
    writer.write_record(&header)?;
    for f in faces {
        let mut record = vec![f.id.clone(), f.sensitive.to_string()];
        for pt in &f.points {
            record.push(pt.x.to_string());
            record.push(pt.y.to_string());
        }
        writer.write_record(&record)?;
    }
    writer.flush()?;
    Ok(())
}

// ---------------------------------------------------------------------------
// AU frames
// ---------------------------------------------------------------------------

/// Loads one [`AuFrame`] per row. Presence must be 0/1 and intensities
/// non-negative; intensities above [`AU_INTENSITY_MAX`] are clamped, and the
/// clamp count is returned alongside the frames.
pub fn load_au_frames(path: &Path, schema: &AuSchema) -> Result<(Vec<AuFrame>, usize)> {
    let rows = read_rows(path)?;
    let mut frames = Vec::with_capacity(rows.len());
    let mut clamped = 0usize;
    for (i, row) in rows.iter().enumerate() {
        let row_idx = i + 1;
        let id = get(row, &schema.id_col)?.to_string();
        let sensitive = parse_group(row, &schema.sensitive_col, row_idx)?;
        let mut presence = BTreeMap::new();
        let mut intensity = BTreeMap::new();
        for &au in &schema.aus {
            let p = parse_group(row, &schema.presence_col(au), row_idx)?;
            let mut v = parse_f64(row, &schema.intensity_col(au), row_idx)?;
            if v < 0.0 || !v.is_finite() {
                return Err(Error::Parse {
                    row: row_idx,
                    msg: format!(
                        "column `{}`: intensity {v} out of range",
                        schema.intensity_col(au)
                    ),
                });
            }
            if v > AU_INTENSITY_MAX {
                v = AU_INTENSITY_MAX;
                clamped += 1;
            }
            presence.insert(au, p);
            intensity.insert(au, v);
        }
        let frame = AuFrame {
            id,
            presence,
            intensity,
            sensitive,
        };
        frame.validate()?;
        frames.push(frame);
    }
    check_duplicates(frames.iter().map(|f| f.id.as_str()))?;
    Ok((frames, clamped))
}

pub fn write_au_frames(path: &Path, frames: &[AuFrame], schema: &AuSchema) -> Result<()> {
    if is_json(path) {
        let objs: Vec<BTreeMap<String, serde_json::Value>> = frames
            .iter()
            .map(|f| {
                let mut obj = BTreeMap::new();
                obj.insert(schema.id_col.clone(), serde_json::Value::from(f.id.clone()));
                obj.insert(
                    schema.sensitive_col.clone(),
                    serde_json::Value::from(f.sensitive),
                );
                for &au in &schema.aus {
                    obj.insert(
                        schema.presence_col(au),
                        serde_json::Value::from(*f.presence.get(&au).unwrap_or(&0)),
                    );
                    obj.insert(
                        schema.intensity_col(au),
                        serde_json::Value::from(*f.intensity.get(&au).unwrap_or(&0.0)),
                    );
                }
                obj
            })
            .collect();
        fs::write(path, serde_json::to_string_pretty(&objs)?)?;
        return Ok(());
    }
    let mut writer = csv::Writer::from_path(path)?;
    let mut header = vec![schema.id_col.clone(), schema.sensitive_col.clone()];
    for &au in &schema.aus {
        header.push(schema.presence_col(au));
        header.push(schema.intensity_col(au));
    }
    writer.write_record(&header)?;
    for f in frames {
        let mut record = vec![f.id.clone(), f.sensitive.to_string()];
        for &au in &schema.aus {
            record.push(f.presence.get(&au).unwrap_or(&0).to_string());
            record.push(f.intensity.get(&au).unwrap_or(&0.0).to_string());
        }
        writer.write_record(&record)?;
    }
    writer.flush()?;
    Ok(())
}

// ---------------------------------------------------------------------------
// Predictions
// ---------------------------------------------------------------------------

/// Probability column name for model `i`, class `c`: `m{i}_c{c}`.
pub fn prediction_col(model: usize, class: usize) -> String {
    format!("m{model}_c{class}")
}

/// Infers (M, C) from a prediction file header by counting `m{i}_c{c}` columns.
pub fn infer_prediction_shape(path: &Path) -> Result<(usize, usize)> {
    let cols: Vec<String> = if is_json(path) {
        let rows = read_rows(path)?;
        rows.first()
            .map(|r| r.keys().cloned().collect())
            .unwrap_or_default()
    } else {
        let mut reader = csv::Reader::from_path(path)?;
        reader.headers()?.iter().map(str::to_owned).collect()
    };
    let mut m = 0usize;
    let mut c = 0usize;
    for col in &cols {
        if let Some(rest) = col.strip_prefix('m') {
            if let Some((mi, ci)) = rest.split_once("_c") {
                if let (Ok(mi), Ok(ci)) = (mi.parse::<usize>(), ci.parse::<usize>()) {
                    m = m.max(mi + 1);
                    c = c.max(ci + 1);
                }
            }
        }
    }
    if m == 0 || c == 0 {
        return Err(Error::Schema(prediction_col(0, 0)));
    }
    Ok((m, c))
}

/// Loads a prediction matrix with `m` models over `c` classes.
///
/// Per-model probability rows whose sum is within 1e-4 of 1 are renormalized
/// to an exact simplex; anything further off is a validation error.
pub fn load_predictions(path: &Path, m: usize, c: usize) -> Result<PredictionMatrix> {
    let rows = read_rows(path)?;
    let mut matrix = PredictionMatrix {
        model_names: (0..m).map(|i| format!("m{i}")).collect(),
        rows: BTreeMap::new(),
    };
    for (i, row) in rows.iter().enumerate() {
        let row_idx = i + 1;
        let id = get(row, "id")?.to_string();
        let mut models = Vec::with_capacity(m);
        for mi in 0..m {
            let mut probs = Vec::with_capacity(c);
            for ci in 0..c {
                let p = parse_f64(row, &prediction_col(mi, ci), row_idx)?;
                if p < 0.0 || !p.is_finite() {
                    return Err(Error::Validation(format!(
                        "row `{id}` model {mi}: negative probability {p}"
                    )));
                }
                probs.push(p);
            }
            let sum: f64 = probs.iter().sum();
            if (sum - 1.0).abs() > 1e-4 {
                return Err(Error::Validation(format!(
                    "row `{id}` model {mi}: probabilities sum to {sum}, outside [1-1e-4, 1+1e-4]"
                )));
            }
            // renormalize only rows that actually need it, so already-valid
            // numbers survive a write/load cycle bit-identically
            if (sum - 1.0).abs() > 1e-6 {
                for p in &mut probs {
                    *p /= sum;
                }
            }
            models.push(probs);
        }
        if matrix.rows.insert(id.clone(), models).is_some() {
            return Err(Error::DuplicateId(id));
        }
    }
    matrix.validate()?;
    Ok(matrix)
}

pub fn write_predictions(path: &Path, matrix: &PredictionMatrix) -> Result<()> {
    let m = matrix.num_models();
    let c = matrix.num_classes();
    if is_json(path) {
        let objs: Vec<BTreeMap<String, serde_json::Value>> = matrix
            .rows
            .iter()
            .map(|(id, models)| {
                let mut obj = BTreeMap::new();
                obj.insert("id".to_string(), serde_json::Value::from(id.clone()));
                for (mi, probs) in models.iter().enumerate() {
                    for (ci, &p) in probs.iter().enumerate() {
                        obj.insert(prediction_col(mi, ci), serde_json::Value::from(p));
                    }
                }
                obj
            })
            .collect();
        fs::write(path, serde_json::to_string_pretty(&objs)?)?;
        return Ok(());
    }
    let mut writer = csv::Writer::from_path(path)?;
    let mut header = vec!["id".to_string()];
    for mi in 0..m {
        for ci in 0..c {
            header.push(prediction_col(mi, ci));
        }
    }
    writer.write_record(&header)?;
    for (id, models) in &matrix.rows {
        let mut record = vec![id.clone()];
        for probs in models {
            for p in probs {
                record.push(p.to_string());
            }
        }
        writer.write_record(&record)?;
    }
    writer.flush()?;
    Ok(())
}

// ---------------------------------------------------------------------------
// Label channels
// ---------------------------------------------------------------------------

/// Loads a label channel from the `id_col` and `value_col` columns of a
/// CSV/JSON table; any other columns are ignored. Values must be small
/// non-negative integers. Rows with an empty value cell are skipped: they
/// mark instances excluded from the channel (e.g. non-frontal faces).
pub fn load_label_channel(
    path: &Path,
    id_col: &str,
    value_col: &str,
    name: &str,
) -> Result<LabelChannel> {
    let rows = read_rows(path)?;
    let mut channel = LabelChannel::new(name);
    for (i, row) in rows.iter().enumerate() {
        let row_idx = i + 1;
        let id = get(row, id_col)?.to_string();
        let raw = get(row, value_col)?;
        if raw.trim().is_empty() {
            continue;
        }
        let value: u8 = raw.trim().parse().map_err(|_| Error::Parse {
            row: row_idx,
            msg: format!("column `{value_col}`: `{raw}` is not a label"),
        })?;
        if channel.labels.insert(id.clone(), value).is_some() {
            return Err(Error::DuplicateId(id));
        }
    }
    Ok(channel)
}

pub fn write_label_channel(path: &Path, channel: &LabelChannel, value_col: &str) -> Result<()> {
    let mut writer = csv::Writer::from_path(path)?;
    writer.write_record(["id", value_col])?;
    for (id, label) in &channel.labels {
        writer.write_record([id.as_str(), &label.to_string()])?;
    }
    writer.flush()?;
    Ok(())
}

/// Aligned label table: one row per id (lexicographic), one column per channel.
#[derive(Debug, Clone, PartialEq)]
pub struct LabelTable {
    pub ids: Vec<String>,
    pub channel_names: Vec<String>,
    /// `rows[i][j]` is the label of `ids[i]` in channel `j`.
    pub rows: Vec<Vec<u8>>,
}

impl LabelTable {
    pub fn to_csv_string(&self) -> String {
        let mut out = String::from("id");
        for name in &self.channel_names {
            let _ = write!(out, ",{name}");
        }
        out.push('\n');
        for (id, row) in self.ids.iter().zip(&self.rows) {
            out.push_str(id);
            for label in row {
                let _ = write!(out, ",{label}");
            }
            out.push('\n');
        }
        out
    }
}

/// Joins channels over a fixed id set. Every channel must cover every id;
/// ids missing from any channel are reported together.
pub fn join_channels(ids: &[String], channels: &[LabelChannel]) -> Result<LabelTable> {
    let mut sorted: Vec<String> = ids.to_vec();
    sorted.sort();
    let mut missing = BTreeSet::new();
    for channel in channels {
        for id in &sorted {
            if !channel.labels.contains_key(id) {
                missing.insert(id.clone());
            }
        }
    }
    if !missing.is_empty() {
        return Err(Error::Coverage(missing.into_iter().collect()));
    }
    let rows = sorted
        .iter()
        .map(|id| channels.iter().map(|ch| ch.labels[id]).collect())
        .collect();
    Ok(LabelTable {
        ids: sorted,
        channel_names: channels.iter().map(|c| c.name.clone()).collect(),
        rows,
    })
}
