//! Single-series statistics: extrema, differences, derived values, order
//! and repeated values.

use super::message::{Category, InsightMessage, ParamValue};
use super::{round_dp, round_mean, round_sum};
use crate::error::InsightError;
use crate::model::{DataPoint, Series};

/// Index of the maximum and minimum point; ties go to the first occurrence.
pub fn extrema_indices(series: &Series) -> Option<(usize, usize)> {
    let first = series.points.first()?;
    let (mut imax, mut imin) = (0, 0);
    let (mut vmax, mut vmin) = (first.value, first.value);
    for (i, p) in series.points.iter().enumerate().skip(1) {
        if p.value > vmax {
            vmax = p.value;
            imax = i;
        }
        if p.value < vmin {
            vmin = p.value;
            imin = i;
        }
    }
    Some((imax, imin))
}

fn extremes(series: &Series) -> (&DataPoint, &DataPoint) {
    let (imax, imin) = extrema_indices(series).expect("series has at least one point");
    (&series.points[imax], &series.points[imin])
}

/// Max and min points. Panics on an empty series (excluded by validation).
pub fn extrema(series: &Series) -> InsightMessage {
    let (max, min) = extremes(series);
    InsightMessage::new(Category::ExtremaMinMax)
        .with("max_category", &max.category)
        .with("max_value", max.value)
        .with("min_category", &min.category)
        .with("min_value", min.value)
}

pub fn max_difference(series: &Series) -> Result<InsightMessage, InsightError> {
    if series.len() < 2 {
        return Err(InsightError::TooFewPoints {
            needed: 2,
            found: series.len(),
        });
    }
    let (max, min) = extremes(series);
    Ok(InsightMessage::new(Category::MaxDifference)
        .with("difference", round_dp(max.value - min.value, 2))
        .with("max_category", &max.category)
        .with("max_value", max.value)
        .with("min_category", &min.category)
        .with("min_value", min.value))
}

/// Mean rounded to one decimal; sum kept integral when every input is.
pub fn derived_values(series: &Series) -> InsightMessage {
    let values = series.values();
    let sum: f64 = values.iter().sum();
    let mean = sum / values.len() as f64;
    let integral = values.iter().all(|v| v.fract() == 0.0);
    InsightMessage::new(Category::DerivedValue)
        .with("mean", round_mean(mean))
        .with("sum", round_sum(sum, integral))
        .with("n_points", values.len())
}

/// Point indices sorted by descending value; ties keep point order.
pub fn descending_order(series: &Series) -> Vec<usize> {
    let mut order: Vec<usize> = (0..series.len()).collect();
    order.sort_by(|&a, &b| series.points[b].value.total_cmp(&series.points[a].value));
    order
}

/// Top `k` categories by value plus the minimum.
pub fn order_rank(series: &Series, k: usize) -> Result<InsightMessage, InsightError> {
    let n = series.len();
    if k == 0 || k > n {
        return Err(InsightError::KTooLarge { k, n });
    }
    let order = descending_order(series);
    let top: Vec<&DataPoint> = order[..k].iter().map(|&i| &series.points[i]).collect();
    let (_, min) = extremes(series);
    let categories: Vec<ParamValue> = top.iter().map(|p| (&p.category).into()).collect();
    let values: Vec<ParamValue> = top.iter().map(|p| p.value.into()).collect();
    Ok(InsightMessage::new(Category::OrderRank)
        .with("ranked_categories", ParamValue::List(categories.clone()))
        .with("ranked_values", ParamValue::List(values))
        .with("top_category", &top[0].category)
        .with("top_value", top[0].value)
        .with("followers", ParamValue::List(categories[1..].to_vec()))
        .with("min_category", &min.category)
        .with("min_value", min.value))
}

/// Groups (size >= 2) of categories with exactly equal values, larger groups
/// first, then by first occurrence.
pub fn equal_value_groups(series: &Series) -> Vec<(f64, Vec<usize>)> {
    let mut groups: Vec<(f64, Vec<usize>)> = Vec::new();
    for (i, p) in series.points.iter().enumerate() {
        match groups.iter_mut().find(|(v, _)| *v == p.value) {
            Some((_, members)) => members.push(i),
            None => groups.push((p.value, vec![i])),
        }
    }
    groups.retain(|(_, m)| m.len() >= 2);
    // stable sort keeps first-occurrence order among equal sizes
    groups.sort_by_key(|g| std::cmp::Reverse(g.1.len()));
    groups
}

pub fn same_values(series: &Series) -> Option<InsightMessage> {
    let groups = equal_value_groups(series);
    if groups.is_empty() {
        return None;
    }
    let names: Vec<ParamValue> = groups
        .iter()
        .map(|(_, members)| {
            ParamValue::List(
                members
                    .iter()
                    .map(|&i| (&series.points[i].category).into())
                    .collect(),
            )
        })
        .collect();
    let values: Vec<ParamValue> = groups.iter().map(|(v, _)| (*v).into()).collect();
    Some(
        InsightMessage::new(Category::SameValue)
            .with("groups", ParamValue::List(names))
            .with("group_values", ParamValue::List(values))
            .with("group_count", groups.len()),
    )
}

/// Top value against the runner-up.
pub fn comparison_absolute(series: &Series) -> Option<InsightMessage> {
    if series.len() < 2 {
        return None;
    }
    let order = descending_order(series);
    let first = &series.points[order[0]];
    let second = &series.points[order[1]];
    Some(
        InsightMessage::new(Category::ComparisonAbsolute)
            .with("first_category", &first.category)
            .with("first_value", first.value)
            .with("second_category", &second.category)
            .with("second_value", second.value)
            .with("difference", round_dp(first.value - second.value, 2)),
    )
}

/// Ratio of the maximum to the minimum, when both are positive and distinct.
pub fn comparison_relative(series: &Series) -> Option<InsightMessage> {
    if series.len() < 2 {
        return None;
    }
    let (max, min) = extremes(series);
    if min.value <= 0.0 || max.value <= min.value {
        return None;
    }
    Some(
        InsightMessage::new(Category::ComparisonRelative)
            .with("max_category", &max.category)
            .with("max_value", max.value)
            .with("min_category", &min.category)
            .with("min_value", min.value)
            .with("ratio", round_dp(max.value / min.value, 2)),
    )
}
