//! Stage 1 of the summary pipeline: detect statistics and patterns in chart
//! data and emit them as category-tagged [`InsightMessage`]s.

mod message;
mod multi;
mod stats;
mod trend;

pub use message::{Category, InsightMessage, ParamValue};
pub use multi::multi_series_insights;
pub use stats::{
    comparison_absolute, comparison_relative, derived_values, descending_order, equal_value_groups,
    extrema, extrema_indices, max_difference, order_rank, same_values,
};
pub use trend::{
    compute_changes, global_trend, local_trend_messages, local_trends, normalized_changes,
    reversal_ratio, shape, trend_direction, TrendDirection, TrendSegment, CONSTANT_BAND,
    LOCAL_TREND_FLOOR, MAX_LOCAL_TRENDS, ZIGZAG_RATIO,
};

use crate::error::InsightError;
use crate::model::{ChartSpec, ChartType, Series};

/// Default number of categories reported by the order message.
pub const ORDER_TOP_K: usize = 3;

pub(crate) fn round_dp(x: f64, decimals: i32) -> f64 {
    let f = 10f64.powi(decimals);
    let r = (x * f).round() / f;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

pub(crate) fn round_mean(x: f64) -> f64 {
    round_dp(x, 1)
}

pub(crate) fn round_sum(x: f64, integral: bool) -> f64 {
    if integral {
        x.round()
    } else {
        round_dp(x, 1)
    }
}

/// `100 * (end - start) / |start|` to two decimals; `None` when start is 0.
pub(crate) fn percent_change(start: f64, end: f64) -> Option<f64> {
    (start != 0.0).then(|| round_dp(100.0 * (end - start) / start.abs(), 2))
}

pub(crate) fn series_label(series: &Series, index: usize) -> String {
    series.display_name(index)
}

/// The chart-level intro message.
pub fn intro(spec: &ChartSpec) -> InsightMessage {
    let names: Vec<ParamValue> = if spec.chart_type.is_multi_series() {
        spec.series
            .iter()
            .enumerate()
            .map(|(i, s)| series_label(s, i).into())
            .collect()
    } else {
        Vec::new()
    };
    InsightMessage::new(Category::IntroEncoding)
        .with("n_points", spec.point_count())
        .with("n_series", spec.series.len())
        .with("series_names", ParamValue::List(names))
        .with("title", &spec.title)
}

/// All messages for a chart, intro first, in emission order.
///
/// The chart must already be valid; category alignment is re-checked for
/// multi-series charts.
pub fn analyze(spec: &ChartSpec) -> Result<Vec<InsightMessage>, InsightError> {
    let mut out = vec![intro(spec)];
    if spec.chart_type.is_multi_series() {
        out.extend(multi_series_insights(spec)?);
        return Ok(out);
    }
    let series = spec.series.first().ok_or(InsightError::TooFewPoints {
        needed: 1,
        found: 0,
    })?;
    out.extend(single_series_insights(series, spec.chart_type)?);
    Ok(out)
}

fn single_series_insights(
    series: &Series,
    chart_type: ChartType,
) -> Result<Vec<InsightMessage>, InsightError> {
    let n = series.len();
    if n == 0 {
        return Err(InsightError::TooFewPoints {
            needed: 1,
            found: 0,
        });
    }
    if n == 1 {
        return Ok(vec![extrema(series).with_variant("point")]);
    }

    let pie = chart_type == ChartType::Pie;
    let total: f64 = series.values().iter().sum();
    let share = |v: f64| {
        if total > 0.0 {
            round_dp(100.0 * v / total, 2)
        } else {
            0.0
        }
    };

    let mut out = Vec::new();
    let mut ext = extrema(series);
    if pie {
        let max = ext.number("max_value").unwrap_or_default();
        let min = ext.number("min_value").unwrap_or_default();
        ext = ext
            .with("max_share", share(max))
            .with("min_share", share(min));
    }
    out.push(ext);
    out.extend(comparison_relative(series));
    out.push(max_difference(series)?);
    let mut rank = order_rank(series, ORDER_TOP_K.min(n))?;
    if pie {
        let top = rank.number("top_value").unwrap_or_default();
        rank = rank.with("top_share", share(top));
    }
    out.push(rank);
    if !pie {
        out.push(global_trend(series)?);
        out.extend(local_trend_messages(series, None));
        out.extend(shape(series));
    }
    out.push(derived_values(series));
    out.extend(comparison_absolute(series));
    out.extend(same_values(series));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{AxisSpec, DataType};

    #[test]
    fn rounding_helpers() {
        assert_eq!(round_dp(283.783783, 2), 283.78);
        assert_eq!(round_mean(252.404_761_9), 252.4);
        assert_eq!(percent_change(3.7, 14.2), Some(283.78));
        assert_eq!(percent_change(0.0, 1.0), None);
        assert_eq!(round_dp(-0.0001, 2).to_bits(), 0.0f64.to_bits());
    }

    #[test]
    fn single_point_chart_yields_point_statement() {
        let spec = ChartSpec::new(
            ChartType::Bar,
            "",
            AxisSpec::new("x", DataType::Nominal),
            AxisSpec::new("y", DataType::Quantitative),
            vec![Series::from_pairs([("A", 7.0)])],
        );
        let msgs = analyze(&spec).unwrap();
        assert_eq!(msgs.len(), 2);
        assert_eq!(msgs[0].category, Category::IntroEncoding);
        assert!(msgs[1].is_variant("point"));
    }

    #[test]
    fn pie_has_shares_and_no_trend() {
        let spec = ChartSpec::new(
            ChartType::Pie,
            "Market share",
            AxisSpec::new("Brand", DataType::Nominal),
            AxisSpec::new("Share", DataType::Quantitative),
            vec![Series::from_pairs([("A", 50.0), ("B", 30.0), ("C", 20.0)])],
        );
        let msgs = analyze(&spec).unwrap();
        assert!(msgs.iter().all(|m| m.category != Category::TrendGlobal));
        let ext = msgs
            .iter()
            .find(|m| m.category == Category::ExtremaMinMax)
            .unwrap();
        assert_eq!(ext.number("max_share"), Some(50.0));
        assert_eq!(ext.number("min_share"), Some(20.0));
    }
}
