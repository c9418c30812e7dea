use thiserror::Error;

use crate::model::ValidationReport;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("parse error at {path}: {message}")]
    Parse { path: String, message: String },
    #[error("invalid chart: {0}")]
    Invalid(ValidationReport),
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum DeconstructError {
    #[error("malformed SVG: {0}")]
    MalformedSvg(String),
    #[error("no chart found: {0}")]
    NoChartFound(String),
    #[error("unreadable axis: {0}")]
    UnreadableAxis(String),
    #[error("inconsistent series: {0}")]
    InconsistentSeries(String),
    #[error("mark {index} maps to {value}, outside the axis range [{min}, {max}] by more than 5%")]
    ScaleMismatch {
        index: usize,
        value: f64,
        min: f64,
        max: f64,
    },
    #[error("unsupported mark: {0}")]
    UnsupportedMark(String),
    #[error("missing data: {0}")]
    MissingData(String),
    #[error("malformed declarative spec: {0}")]
    MalformedSpec(String),
}

#[derive(Debug, Error, PartialEq)]
pub enum InsightError {
    #[error("need at least {needed} points, series has {found}")]
    TooFewPoints { needed: usize, found: usize },
    #[error("rank size {k} is invalid for a series of {n} points")]
    KTooLarge { k: usize, n: usize },
    #[error("series do not share the same categories")]
    CategoryMismatch,
    #[error("chart has fewer than two series")]
    NotMultiSeries,
}

#[derive(Debug, Error, PartialEq)]
pub enum PlanError {
    #[error("no messages to plan")]
    EmptyPlan,
    #[error("plan must start with an intro message")]
    MissingIntro,
}

#[derive(Debug, Error, PartialEq)]
pub enum TemplateError {
    #[error("template file is not valid JSON: {0}")]
    Json(String),
    #[error("unknown category {0:?} in template file")]
    UnknownCategory(String),
    #[error("pool {pool:?} has {found} templates, needs at least {needed}")]
    PoolTooSmall {
        pool: String,
        found: usize,
        needed: usize,
    },
    #[error("template in pool {pool:?} references undeclared slot {slot:?}")]
    UndeclaredSlot { pool: String, slot: String },
    #[error("template in pool {pool:?} has a malformed slot: {detail}")]
    MalformedSlot { pool: String, detail: String },
    #[error("template in pool {pool:?} has zero total weight")]
    ZeroWeight { pool: String },
    #[error("could not read template file: {0}")]
    Io(String),
}

#[derive(Debug, Error, PartialEq)]
pub enum RealizeError {
    #[error("no template pool for {0}")]
    MissingTemplate(String),
    #[error("slot {slot:?} has no value in pool {pool:?}")]
    UnboundSlot { pool: String, slot: String },
    #[error("index out of bounds: series {series}, point {index}")]
    IndexOutOfBounds { series: usize, index: usize },
}

#[derive(Debug, Error, PartialEq)]
pub enum QueryError {
    #[error("selection is empty")]
    EmptySelection,
    #[error("invalid selection: {0}")]
    InvalidSelection(String),
    #[error("label {0:?} not found")]
    LabelNotFound(String),
}

/// Top-level error for the end-to-end pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Deconstruct(#[from] DeconstructError),
    #[error(transparent)]
    Insight(#[from] InsightError),
    #[error(transparent)]
    Plan(#[from] PlanError),
    #[error(transparent)]
    Template(#[from] TemplateError),
    #[error(transparent)]
    Realize(#[from] RealizeError),
    #[error(transparent)]
    Query(#[from] QueryError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
