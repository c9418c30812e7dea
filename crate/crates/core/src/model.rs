//! Normalized chart data model and its canonical JSON form.
//!
//! Every other stage of the pipeline works on [`ChartSpec`]. The JSON field
//! names are fixed (`chartType`, `xAxis`, `series[].points[].x`, ...) so that
//! documents produced by the deconstructor can be fed straight back into the
//! summarizer, the service or the web client.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::ModelError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChartType {
    Bar,
    GroupedBar,
    StackedBar,
    Line,
    MultiLine,
    Pie,
}

impl ChartType {
    pub const ALL: [ChartType; 6] = [
        ChartType::Bar,
        ChartType::GroupedBar,
        ChartType::StackedBar,
        ChartType::Line,
        ChartType::MultiLine,
        ChartType::Pie,
    ];

    /// True for the chart types that carry two or more series.
    pub fn is_multi_series(self) -> bool {
        matches!(
            self,
            ChartType::GroupedBar | ChartType::StackedBar | ChartType::MultiLine
        )
    }

    pub fn is_bar_family(self) -> bool {
        matches!(
            self,
            ChartType::Bar | ChartType::GroupedBar | ChartType::StackedBar
        )
    }

    /// Identifier used in JSON and as a template pool suffix.
    pub fn key(self) -> &'static str {
        match self {
            ChartType::Bar => "bar",
            ChartType::GroupedBar => "grouped_bar",
            ChartType::StackedBar => "stacked_bar",
            ChartType::Line => "line",
            ChartType::MultiLine => "multi_line",
            ChartType::Pie => "pie",
        }
    }

    /// Lower-case name as it reads inside a sentence ("multi line").
    pub fn phrase(self) -> &'static str {
        match self {
            ChartType::Bar => "bar",
            ChartType::GroupedBar => "grouped bar",
            ChartType::StackedBar => "stacked bar",
            ChartType::Line => "line",
            ChartType::MultiLine => "multi line",
            ChartType::Pie => "pie",
        }
    }

    /// Capitalized display name ("Grouped Bar").
    pub fn display_name(self) -> &'static str {
        match self {
            ChartType::Bar => "Bar",
            ChartType::GroupedBar => "Grouped Bar",
            ChartType::StackedBar => "Stacked Bar",
            ChartType::Line => "Line",
            ChartType::MultiLine => "Multi Line",
            ChartType::Pie => "Pie",
        }
    }

    /// The single-series counterpart, used when a selection keeps one series.
    pub fn single_series(self) -> ChartType {
        match self {
            ChartType::GroupedBar | ChartType::StackedBar => ChartType::Bar,
            ChartType::MultiLine => ChartType::Line,
            other => other,
        }
    }
}

impl fmt::Display for ChartType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DataType {
    Nominal,
    Ordinal,
    Temporal,
    Quantitative,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxisSpec {
    pub label: String,
    #[serde(rename = "dataType")]
    pub data_type: DataType,
}

impl AxisSpec {
    pub fn new(label: impl Into<String>, data_type: DataType) -> Self {
        Self {
            label: label.into(),
            data_type,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DataPoint {
    #[serde(rename = "x")]
    pub category: String,
    #[serde(rename = "y")]
    pub value: f64,
}

impl DataPoint {
    pub fn new(category: impl Into<String>, value: f64) -> Self {
        Self {
            category: category.into(),
            value,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Series {
    /// Legend label; absent for single-series charts.
    pub name: Option<String>,
    pub points: Vec<DataPoint>,
}

impl Series {
    pub fn new(name: Option<String>, points: Vec<DataPoint>) -> Self {
        Self { name, points }
    }

    /// Convenience constructor for an unnamed series.
    pub fn from_pairs<S: Into<String>>(pairs: impl IntoIterator<Item = (S, f64)>) -> Self {
        Self {
            name: None,
            points: pairs
                .into_iter()
                .map(|(c, v)| DataPoint::new(c, v))
                .collect(),
        }
    }

    pub fn named<S: Into<String>>(
        name: impl Into<String>,
        pairs: impl IntoIterator<Item = (S, f64)>,
    ) -> Self {
        let mut s = Self::from_pairs(pairs);
        s.name = Some(name.into());
        s
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn values(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.value).collect()
    }

    pub fn categories(&self) -> impl Iterator<Item = &str> {
        self.points.iter().map(|p| p.category.as_str())
    }

    /// Name to use in sentences; falls back to "Series {n}".
    pub fn display_name(&self, index: usize) -> String {
        match &self.name {
            Some(n) if !n.trim().is_empty() => n.clone(),
            _ => format!("Series {}", index + 1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChartSpec {
    #[serde(rename = "chartType")]
    pub chart_type: ChartType,
    pub title: String,
    #[serde(rename = "xAxis")]
    pub x_axis: AxisSpec,
    #[serde(rename = "yAxis")]
    pub y_axis: AxisSpec,
    pub series: Vec<Series>,
}

impl ChartSpec {
    pub fn new(
        chart_type: ChartType,
        title: impl Into<String>,
        x_axis: AxisSpec,
        y_axis: AxisSpec,
        series: Vec<Series>,
    ) -> Self {
        Self {
            chart_type,
            title: title.into(),
            x_axis,
            y_axis,
            series,
        }
    }

    /// Category labels of the first series (all series share them on valid specs).
    pub fn categories(&self) -> Vec<&str> {
        self.series
            .first()
            .map(|s| s.categories().collect())
            .unwrap_or_default()
    }

    pub fn point_count(&self) -> usize {
        self.series.first().map(Series::len).unwrap_or(0)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("chart spec serialization is infallible")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("chart spec serialization is infallible")
    }

    /// Parses canonical chart JSON. Errors carry a `$.`-rooted path to the
    /// offending field.
    pub fn from_json(text: &str) -> Result<Self, ModelError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|err| {
            let mut path = json_path(err.path());
            let inner = err.into_inner();
            let message = inner.to_string();
            if let Some(field) = missing_field_name(&message) {
                if path == "$" {
                    path = format!("$.{field}");
                } else {
                    path = format!("{path}.{field}");
                }
            }
            ModelError::Parse { path, message }
        })
    }

    /// Parses and validates in one go.
    pub fn from_json_validated(text: &str) -> Result<Self, ModelError> {
        let spec = Self::from_json(text)?;
        let report = validate(&spec);
        if report.is_valid() {
            Ok(spec)
        } else {
            Err(ModelError::Invalid(report))
        }
    }
}

fn json_path(path: &serde_path_to_error::Path) -> String {
    let mut out = String::from("$");
    for seg in path.iter() {
        match seg {
            serde_path_to_error::Segment::Seq { index } => out.push_str(&format!("[{index}]")),
            serde_path_to_error::Segment::Map { key } => {
                out.push('.');
                out.push_str(key);
            }
            serde_path_to_error::Segment::Enum { variant } => {
                out.push('.');
                out.push_str(variant);
            }
            serde_path_to_error::Segment::Unknown => {}
        }
    }
    out
}

fn missing_field_name(message: &str) -> Option<&str> {
    let rest = message.strip_prefix("missing field `")?;
    rest.split('`').next()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ViolationCode {
    NoSeries,
    EmptySeries,
    SeriesCount,
    CategoryMismatch,
    DuplicateCategory,
    NonFiniteValue,
    NegativePieValue,
    YAxisNotQuantitative,
}

impl ViolationCode {
    pub fn as_str(self) -> &'static str {
        match self {
            ViolationCode::NoSeries => "NO_SERIES",
            ViolationCode::EmptySeries => "EMPTY_SERIES",
            ViolationCode::SeriesCount => "SERIES_COUNT",
            ViolationCode::CategoryMismatch => "CATEGORY_MISMATCH",
            ViolationCode::DuplicateCategory => "DUPLICATE_CATEGORY",
            ViolationCode::NonFiniteValue => "NON_FINITE_VALUE",
            ViolationCode::NegativePieValue => "NEGATIVE_PIE_VALUE",
            ViolationCode::YAxisNotQuantitative => "Y_AXIS_NOT_QUANTITATIVE",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub code: ViolationCode,
    pub path: String,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn contains(&self, code: ViolationCode) -> bool {
        self.violations.iter().any(|v| v.code == code)
    }

    fn push(&mut self, code: ViolationCode, path: impl Into<String>, message: impl Into<String>) {
        self.violations.push(Violation {
            code,
            path: path.into(),
            message: message.into(),
        });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .violations
            .iter()
            .map(|v| format!("{} at {}: {}", v.code.as_str(), v.path, v.message))
            .collect();
        f.write_str(&parts.join("; "))
    }
}

/// Collects every invariant violation of `spec`. Never fails.
pub fn validate(spec: &ChartSpec) -> ValidationReport {
    let mut report = ValidationReport::default();

    if spec.y_axis.data_type != DataType::Quantitative {
        report.push(
            ViolationCode::YAxisNotQuantitative,
            "$.yAxis.dataType",
            "y axis must be quantitative",
        );
    }

    if spec.series.is_empty() {
        report.push(ViolationCode::NoSeries, "$.series", "chart has no series");
        return report;
    }

    let n_series = spec.series.len();
    if spec.chart_type.is_multi_series() {
        if n_series < 2 {
            report.push(
                ViolationCode::SeriesCount,
                "$.series",
                format!(
                    "{} chart needs at least 2 series, found {n_series}",
                    spec.chart_type
                ),
            );
        }
    } else if n_series != 1 {
        report.push(
            ViolationCode::SeriesCount,
            "$.series",
            format!(
                "{} chart needs exactly 1 series, found {n_series}",
                spec.chart_type
            ),
        );
    }

    for (si, series) in spec.series.iter().enumerate() {
        if series.points.is_empty() {
            report.push(
                ViolationCode::EmptySeries,
                format!("$.series[{si}].points"),
                "series has no points",
            );
        }
        let mut seen = HashSet::new();
        for (pi, p) in series.points.iter().enumerate() {
            let path = format!("$.series[{si}].points[{pi}]");
            if !p.value.is_finite() {
                report.push(
                    ViolationCode::NonFiniteValue,
                    format!("{path}.y"),
                    "value is not finite",
                );
            } else if spec.chart_type == ChartType::Pie && p.value < 0.0 {
                report.push(
                    ViolationCode::NegativePieValue,
                    format!("{path}.y"),
                    format!("pie value {} is negative", p.value),
                );
            }
            if !seen.insert(p.category.as_str()) {
                report.push(
                    ViolationCode::DuplicateCategory,
                    format!("{path}.x"),
                    format!("category {:?} repeats within the series", p.category),
                );
            }
        }
    }

    if n_series > 1 {
        let reference: Vec<&str> = spec.series[0].categories().collect();
        for (si, series) in spec.series.iter().enumerate().skip(1) {
            let cats: Vec<&str> = series.categories().collect();
            if cats != reference {
                report.push(
                    ViolationCode::CategoryMismatch,
                    format!("$.series[{si}].points"),
                    "series category list differs from the first series",
                );
            }
        }
    }

    report
}
