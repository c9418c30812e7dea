//! Chart accessibility engine: chart data in, spoken-style summaries out.
//!
//! The pipeline runs in four stages — [`insights::analyze`],
//! [`planner::Planner::rank`], [`planner::Planner::plan`] and
//! [`realize::realize`] — wrapped up by [`pipeline::Pipeline`].

pub mod api;
pub mod deconstruct;
pub mod error;
pub mod insights;
pub mod model;
pub mod pipeline;
pub mod planner;
pub mod query;
pub mod realize;

pub use error::{Error, Result};
pub use model::{AxisSpec, ChartSpec, ChartType, DataPoint, DataType, Series};
pub use pipeline::{Pipeline, Summary};
pub use planner::LengthLevel;
