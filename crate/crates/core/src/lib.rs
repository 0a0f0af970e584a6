//! Objective facial-trait annotation, group-fairness evaluation, and
//! Pareto-front weighted-ensemble search at desk scale.
//!
//! The pipeline: generate objective label channels from landmark geometry
//! ([`geometry`]) or action units ([`au_expression`]), train small linear
//! models per channel ([`trainer`]) or ingest external prediction files
//! ([`data_model`]), evaluate group fairness ([`fairness`]), then sweep
//! weighted ensembles and extract the accuracy-vs-gap Pareto frontier
//! ([`ensemble`]).

pub mod au_expression;
pub mod data_model;
pub mod ensemble;
pub mod error;
pub mod fairness;
pub mod geometry;
pub mod synthetic;
pub mod trainer;

pub use au_expression::{Algorithm, ExpressionConfig, ExpressionLabel, ExpressionTaxonomy};
pub use data_model::{
    AuFrame, AuSchema, LabelChannel, LandmarkFace, LandmarkSchema, Point, PredictionMatrix,
};
pub use ensemble::{EnsembleCandidate, GapMetric, ParetoFrontier, WeightVector};
pub use error::{Error, Result};
pub use fairness::{FairnessReport, GroupedConfusion};
pub use geometry::{AttractivenessScores, GeometryConfig};
pub use trainer::{LinearModel, TrainConfig};
