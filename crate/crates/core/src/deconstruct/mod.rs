//! Recovering a [`ChartSpec`] from rendered or declarative charts.

mod render;
mod scale;
mod svg;
mod vegalite;

use serde::{Deserialize, Serialize};

use crate::error::DeconstructError;
use crate::model::ChartSpec;

pub use render::{nice_ticks, render_svg, RenderOptions};
pub use scale::{
    recover_from_marks, AxisScale, BBox, MarkKind, MarkRecord, Orientation, MAX_RESIDUAL,
    RANGE_TOLERANCE,
};
pub use svg::parse_label_number;
pub use vegalite::{ingest_vegalite, to_vegalite};

/// A recovered chart plus anything the reader had to guess or skip.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Deconstruction {
    #[serde(flatten)]
    pub chart: ChartSpec,
    #[serde(default)]
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeconstructOptions {
    /// Read values from data labels when present (geometry otherwise).
    pub prefer_labels: bool,
}

impl Default for DeconstructOptions {
    fn default() -> Self {
        Self {
            prefer_labels: true,
        }
    }
}

pub fn deconstruct_svg(text: &str) -> Result<Deconstruction, DeconstructError> {
    svg::deconstruct(text, &DeconstructOptions::default())
}

pub fn deconstruct_svg_with(
    text: &str,
    opts: &DeconstructOptions,
) -> Result<Deconstruction, DeconstructError> {
    svg::deconstruct(text, opts)
}

/// Dispatches on content: SVG markup, a Vega-Lite spec (has `mark`), or a
/// chart document in canonical JSON.
pub fn deconstruct_auto(text: &str) -> Result<Deconstruction, DeconstructError> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('<') {
        return deconstruct_svg(text);
    }
    let value: serde_json::Value = serde_json::from_str(trimmed)
        .map_err(|e| DeconstructError::MalformedSpec(format!("neither SVG nor JSON: {e}")))?;
    let chart = if value.get("mark").is_some() {
        ingest_vegalite(trimmed)?
    } else {
        ChartSpec::from_json_validated(trimmed)
            .map_err(|e| DeconstructError::MalformedSpec(e.to_string()))?
    };
    Ok(Deconstruction {
        chart,
        warnings: Vec::new(),
    })
}
