//! Request and response bodies of the HTTP API, shared by the service and
//! its client.

use serde::{Deserialize, Serialize};

use crate::deconstruct::Deconstruction;
use crate::insights::InsightMessage;
use crate::model::{ChartSpec, ChartType};
use crate::pipeline::Summary;
use crate::planner::LengthLevel;
use crate::query::{Answer, Selection};

pub const SESSION_HEADER: &str = "x-session-id";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChartRequest {
    pub chart: ChartSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanRequest {
    pub chart: ChartSpec,
    #[serde(default)]
    pub level: LengthLevel,
}

/// `seed` defaults to a random value, echoed back in the summary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummarizeRequest {
    pub chart: ChartSpec,
    #[serde(default)]
    pub level: LengthLevel,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub selection: Option<Selection>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnswerRequest {
    pub chart: ChartSpec,
    pub query: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InsightsResponse {
    pub messages: Vec<InsightMessage>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionSummary {
    /// "Year 2010 to 2011, and 2014 are selected."
    pub description: String,
    pub summary: Summary,
}

/// Stateless selection summary over an inline chart.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionRequest {
    pub chart: ChartSpec,
    pub indices: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub series: Option<usize>,
    #[serde(default)]
    pub level: LengthLevel,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl SelectionRequest {
    pub fn selection(&self) -> Selection {
        Selection {
            indices: self.indices.clone(),
            series: self.series,
        }
    }
}

/// Selection against a registered chart.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChartSelectionRequest {
    pub indices: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub series: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub level: Option<LengthLevel>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// Registers a chart given either as a chart model or as raw SVG /
/// Vega-Lite / chart JSON text.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegisterRequest {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chart: Option<ChartSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Registered {
    pub session_id: String,
    pub chart_id: String,
    /// Position of the chart within the session (N/P navigation order).
    pub index: usize,
    pub seed: u64,
    pub title: String,
    #[serde(default)]
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChartEntryInfo {
    pub chart_id: String,
    pub title: String,
    pub chart_type: ChartType,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionInfo {
    pub session_id: String,
    pub charts: Vec<ChartEntryInfo>,
    pub active: Option<String>,
    pub level: LengthLevel,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TextResponse {
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurrentSelection {
    pub selection: Option<Selection>,
    pub description: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Health {
    pub status: String,
    pub version: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub code: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorResponse {
    pub error: ErrorBody,
}

pub type DeconstructResponse = Deconstruction;
pub type AnswerResponse = Answer;
