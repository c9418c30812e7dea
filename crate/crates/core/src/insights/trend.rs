//! Slope normalization, global trend classification, local trend
//! segmentation and shape detection.

use serde::{Deserialize, Serialize};

use super::message::{Category, InsightMessage};
use super::{percent_change, round_dp, series_label};
use crate::error::InsightError;
use crate::model::Series;

/// Fitted total change below this fraction of the value range is "constant".
pub const CONSTANT_BAND: f64 = 0.05;
/// Segments whose peak normalized change is below this are not reported.
pub const LOCAL_TREND_FLOOR: f64 = 0.25;
pub const MAX_LOCAL_TRENDS: usize = 5;
/// Direction reversals per step at or above which a series is zig-zag.
pub const ZIGZAG_RATIO: f64 = 0.40;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrendDirection {
    Increasing,
    Decreasing,
    Constant,
}

impl TrendDirection {
    pub fn key(self) -> &'static str {
        match self {
            TrendDirection::Increasing => "increasing",
            TrendDirection::Decreasing => "decreasing",
            TrendDirection::Constant => "constant",
        }
    }

    /// Present-participle phrase: "increasing", "roughly constant".
    pub fn word(self) -> &'static str {
        match self {
            TrendDirection::Increasing => "increasing",
            TrendDirection::Decreasing => "decreasing",
            TrendDirection::Constant => "roughly constant",
        }
    }

    fn from_step(delta: f64) -> Self {
        if delta > 0.0 {
            TrendDirection::Increasing
        } else if delta < 0.0 {
            TrendDirection::Decreasing
        } else {
            TrendDirection::Constant
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrendSegment {
    pub start_index: usize,
    pub end_index: usize,
    pub direction: TrendDirection,
    /// Percent change start→end, two decimals. Holds the absolute delta
    /// instead when `absolute` is set (start value was zero).
    pub percent_change: f64,
    pub absolute: bool,
    pub normalized_peak_change: f64,
}

fn require(series: &Series, needed: usize) -> Result<Vec<f64>, InsightError> {
    if series.len() < needed {
        return Err(InsightError::TooFewPoints {
            needed,
            found: series.len(),
        });
    }
    Ok(series.values())
}

/// Per-step change magnitude, divided by the largest step magnitude.
pub fn normalized_changes(values: &[f64]) -> Vec<f64> {
    let deltas: Vec<f64> = values.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    let max = deltas.iter().copied().fold(0.0_f64, f64::max);
    if max == 0.0 {
        return vec![0.0; deltas.len()];
    }
    deltas.iter().map(|d| d / max).collect()
}

pub fn compute_changes(series: &Series) -> Result<Vec<f64>, InsightError> {
    let values = require(series, 2)?;
    Ok(normalized_changes(&values))
}

/// Least-squares slope of value against point index.
pub(crate) fn ls_slope(values: &[f64]) -> f64 {
    let n = values.len() as f64;
    let mean_x = (n - 1.0) / 2.0;
    let mean_y = values.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for (i, v) in values.iter().enumerate() {
        let dx = i as f64 - mean_x;
        sxy += dx * (v - mean_y);
        sxx += dx * dx;
    }
    if sxx == 0.0 {
        0.0
    } else {
        sxy / sxx
    }
}

pub fn trend_direction(values: &[f64]) -> TrendDirection {
    let (min, max) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    let range = max - min;
    if range <= 0.0 || values.len() < 2 {
        return TrendDirection::Constant;
    }
    let fitted_total = ls_slope(values) * (values.len() - 1) as f64;
    if fitted_total.abs() < CONSTANT_BAND * range {
        TrendDirection::Constant
    } else if fitted_total > 0.0 {
        TrendDirection::Increasing
    } else {
        TrendDirection::Decreasing
    }
}

pub fn global_trend(series: &Series) -> Result<InsightMessage, InsightError> {
    let values = require(series, 2)?;
    let direction = trend_direction(&values);
    let first = &series.points[0];
    let last = &series.points[series.len() - 1];
    let verb = match direction {
        TrendDirection::Increasing => "increased",
        TrendDirection::Decreasing => "declined",
        TrendDirection::Constant => "remained roughly constant",
    };
    let mut msg = InsightMessage::new(Category::TrendGlobal)
        .with("direction", direction.key())
        .with("trend_verb", verb)
        .with("trend_word", direction.word())
        .with("first_category", &first.category)
        .with("first_value", first.value)
        .with("last_category", &last.category)
        .with("last_value", last.value)
        .with("overall_change", last.value - first.value)
        .with("n_points", series.len());
    if let Some(pct) = percent_change(first.value, last.value) {
        msg = msg.with("percent_change", pct);
    }
    Ok(msg)
}

/// Splits the series into maximal runs of same-direction steps. The runs
/// tile `[0, n-1]`: each segment starts where the previous one ends.
pub fn local_trends(series: &Series) -> Result<Vec<TrendSegment>, InsightError> {
    let values = require(series, 3)?;
    let changes = normalized_changes(&values);
    let dirs: Vec<TrendDirection> = values
        .windows(2)
        .map(|w| TrendDirection::from_step(w[1] - w[0]))
        .collect();

    let mut segments = Vec::new();
    let mut start = 0;
    for step in 1..=dirs.len() {
        if step == dirs.len() || dirs[step] != dirs[start] {
            let end = step;
            let peak = changes[start..end].iter().copied().fold(0.0, f64::max);
            let (percent, absolute) = match percent_change(values[start], values[end]) {
                Some(p) => (p, false),
                None => (values[end] - values[start], true),
            };
            segments.push(TrendSegment {
                start_index: start,
                end_index: end,
                direction: dirs[start],
                percent_change: percent,
                absolute,
                normalized_peak_change: peak,
            });
            start = step;
        }
    }
    Ok(segments)
}

/// Local trend segments worth reporting: non-constant, peak normalized change
/// at or above the floor, strongest first, capped.
pub fn local_trend_messages(series: &Series, series_name: Option<&str>) -> Vec<InsightMessage> {
    let Ok(segments) = local_trends(series) else {
        return Vec::new();
    };
    let mut kept: Vec<&TrendSegment> = segments
        .iter()
        .filter(|s| s.direction != TrendDirection::Constant)
        .filter(|s| s.normalized_peak_change >= LOCAL_TREND_FLOOR)
        .collect();
    // stable: ties keep point order
    kept.sort_by(|a, b| {
        b.normalized_peak_change
            .total_cmp(&a.normalized_peak_change)
    });
    kept.truncate(MAX_LOCAL_TRENDS);

    kept.into_iter()
        .map(|seg| {
            let start = &series.points[seg.start_index];
            let end = &series.points[seg.end_index];
            let verb = if seg.direction == TrendDirection::Increasing {
                "increased"
            } else {
                "decreased"
            };
            let mut msg = InsightMessage::new(Category::TrendLocal)
                .with("direction", seg.direction.key())
                .with("verb", verb)
                .with("start_category", &start.category)
                .with("end_category", &end.category)
                .with("start_value", start.value)
                .with("end_value", end.value)
                .with("start_index", seg.start_index)
                .with("end_index", seg.end_index)
                .with("change", round_dp((end.value - start.value).abs(), 2))
                .with("normalized_peak_change", seg.normalized_peak_change);
            if seg.absolute {
                msg = msg.with_variant("absolute");
            } else {
                msg = msg.with("percent_change", seg.percent_change.abs());
            }
            if let Some(name) = series_name {
                msg = msg.with("series", name);
            }
            msg
        })
        .collect()
}

/// Fraction of steps at which the direction flips relative to the previous
/// non-flat step.
pub fn reversal_ratio(values: &[f64]) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let mut reversals = 0usize;
    let mut prev = TrendDirection::Constant;
    for w in values.windows(2) {
        let d = TrendDirection::from_step(w[1] - w[0]);
        if d != TrendDirection::Constant {
            if prev != TrendDirection::Constant && d != prev {
                reversals += 1;
            }
            prev = d;
        }
    }
    reversals as f64 / (values.len() - 1) as f64
}

pub fn shape(series: &Series) -> Option<InsightMessage> {
    if series.len() < 4 {
        return None;
    }
    let ratio = reversal_ratio(&series.values());
    (ratio >= ZIGZAG_RATIO).then(|| {
        InsightMessage::new(Category::Shape)
            .with("shape", "zig-zag")
            .with("reversal_ratio", round_dp(ratio, 4))
    })
}

/// Label used for per-series trend phrases ("Services is increasing").
pub(crate) fn series_trend_phrase(series: &Series, index: usize) -> String {
    let direction = trend_direction(&series.values());
    format!("{} is {}", series_label(series, index), direction.word())
}
