use super::message::{Category, InsightMessage, ParamValue};
use super::stats::{extrema_indices, max_difference};
use super::trend::{global_trend, local_trend_messages, series_trend_phrase};
use super::{round_dp, series_label};
use crate::error::InsightError;
use crate::model::{ChartSpec, ChartType};

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Cross-series facts for grouped bars, stacked bars and multi-line charts.
///
/// Emission order: global extrema (max, min), per-series trends followed by
/// the combined trend, the per-category comparison (bar charts only), the
/// widest per-series gap, local trends, series order by mean, then
/// per-series extrema.
pub fn multi_series_insights(spec: &ChartSpec) -> Result<Vec<InsightMessage>, InsightError> {
    if spec.series.len() < 2 {
        return Err(InsightError::NotMultiSeries);
    }
    let categories: Vec<&str> = spec.series[0].categories().collect();
    if spec
        .series
        .iter()
        .any(|s| s.categories().collect::<Vec<_>>() != categories)
    {
        return Err(InsightError::CategoryMismatch);
    }
    let n = categories.len();
    let names: Vec<String> = spec
        .series
        .iter()
        .enumerate()
        .map(|(i, s)| series_label(s, i))
        .collect();

    let mut out = Vec::new();

    // Global extrema; first series wins ties, then first point.
    let (mut gmax, mut gmin) = ((0usize, 0usize), (0usize, 0usize));
    for (si, s) in spec.series.iter().enumerate() {
        for (pi, p) in s.points.iter().enumerate() {
            if p.value > spec.series[gmax.0].points[gmax.1].value {
                gmax = (si, pi);
            }
            if p.value < spec.series[gmin.0].points[gmin.1].value {
                gmin = (si, pi);
            }
        }
    }
    for (extreme, (si, pi)) in [("max", gmax), ("min", gmin)] {
        let p = &spec.series[si].points[pi];
        out.push(
            InsightMessage::new(Category::GlobalExtrema)
                .with_variant(extreme)
                .with("extreme", extreme)
                .with("series", &names[si])
                .with("category", &p.category)
                .with("value", p.value),
        );
    }

    if n >= 2 {
        for (si, s) in spec.series.iter().enumerate() {
            out.push(
                global_trend(s)?
                    .with_variant("series")
                    .with("series", &names[si]),
            );
        }
        let phrases: Vec<ParamValue> = spec
            .series
            .iter()
            .enumerate()
            .map(|(i, s)| series_trend_phrase(s, i).into())
            .collect();
        out.push(
            InsightMessage::new(Category::TrendGlobal)
                .with_variant("combined")
                .with("series_trends", ParamValue::List(phrases))
                .with("n_points", n),
        );
    }

    if matches!(
        spec.chart_type,
        ChartType::GroupedBar | ChartType::StackedBar
    ) && n >= 2
    {
        let cat_means: Vec<f64> = (0..n)
            .map(|ci| {
                mean(
                    &spec
                        .series
                        .iter()
                        .map(|s| s.points[ci].value)
                        .collect::<Vec<_>>(),
                )
            })
            .collect();
        let mut top = 0;
        let mut bottom = 0;
        for (i, m) in cat_means.iter().enumerate() {
            if *m > cat_means[top] {
                top = i;
            }
            if *m < cat_means[bottom] {
                bottom = i;
            }
        }
        if top != bottom {
            out.push(
                InsightMessage::new(Category::ComparisonRelative)
                    .with_variant("category_mean")
                    .with("top_category", categories[top])
                    .with("top_mean", round_dp(cat_means[top], 2))
                    .with("bottom_category", categories[bottom])
                    .with("bottom_mean", round_dp(cat_means[bottom], 2))
                    .with("n_series", spec.series.len()),
            );
        }
    }

    if n >= 2 {
        // series holding the widest max-min gap; first series on ties
        let gaps: Vec<f64> = spec
            .series
            .iter()
            .map(|s| {
                let (imax, imin) = extrema_indices(s).expect("non-empty series");
                s.points[imax].value - s.points[imin].value
            })
            .collect();
        let mut widest = 0;
        for (i, g) in gaps.iter().enumerate() {
            if *g > gaps[widest] {
                widest = i;
            }
        }
        out.push(
            max_difference(&spec.series[widest])?
                .with_variant("series")
                .with("series", &names[widest]),
        );

        for (si, s) in spec.series.iter().enumerate() {
            out.extend(local_trend_messages(s, Some(&names[si])));
        }
    }

    let means: Vec<f64> = spec.series.iter().map(|s| mean(&s.values())).collect();
    let mut order: Vec<usize> = (0..spec.series.len()).collect();
    order.sort_by(|&a, &b| means[b].total_cmp(&means[a]));
    let ranked_names: Vec<ParamValue> = order.iter().map(|&i| (&names[i]).into()).collect();
    let ranked_means: Vec<ParamValue> = order
        .iter()
        .map(|&i| round_dp(means[i], 2).into())
        .collect();
    let top = order[0];
    let bottom = *order.last().expect("at least two series");
    let mut rank = InsightMessage::new(Category::OrderRank)
        .with("ranked_series", ParamValue::List(ranked_names))
        .with("ranked_means", ParamValue::List(ranked_means))
        .with("top_series", &names[top])
        .with("top_mean", round_dp(means[top], 2))
        .with("bottom_series", &names[bottom])
        .with("bottom_mean", round_dp(means[bottom], 2));
    if n == 1 {
        // a single category: rank the series by their value there
        let values: Vec<ParamValue> = order
            .iter()
            .map(|&i| {
                format!(
                    "{} is {}",
                    names[i],
                    crate::realize::format_number(spec.series[i].points[0].value)
                )
                .into()
            })
            .collect();
        rank = rank
            .with_variant("point")
            .with("category", categories[0])
            .with("series_values", ParamValue::List(values));
    }
    out.push(rank);

    for (si, s) in spec.series.iter().enumerate() {
        let (imax, imin) = extrema_indices(s).expect("non-empty series");
        let (max, min) = (&s.points[imax], &s.points[imin]);
        out.push(
            InsightMessage::new(Category::LocalExtrema)
                .with("series", &names[si])
                .with("max_category", &max.category)
                .with("max_value", max.value)
                .with("min_category", &min.category)
                .with("min_value", min.value)
                .with("mean", round_dp(means[si], 2)),
        );
    }

    Ok(out)
}
