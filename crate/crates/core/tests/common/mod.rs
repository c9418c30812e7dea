//! Shared fixtures, random chart generators and brute-force oracles.
#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use seechart_core::deconstruct::nice_ticks;
use seechart_core::insights::{
    derived_values, extrema, max_difference, order_rank, same_values, Category, ParamValue,
};
use seechart_core::{AxisSpec, ChartSpec, ChartType, DataType, Series};

pub fn fixture_path(name: &str) -> String {
    format!("{}/../../fixtures/{name}.json", env!("CARGO_MANIFEST_DIR"))
}

pub fn fixture_text(name: &str) -> String {
    std::fs::read_to_string(fixture_path(name)).expect("fixture exists")
}

pub fn fixture(name: &str) -> ChartSpec {
    ChartSpec::from_json_validated(&fixture_text(name)).expect("fixture is valid")
}

// ---- oracles -------------------------------------------------------------

/// (index of max, index of min), first occurrence, by exhaustive comparison.
pub fn oracle_extrema(v: &[f64]) -> (usize, usize) {
    let imax = (0..v.len())
        .find(|&i| v.iter().all(|&w| v[i] >= w))
        .unwrap();
    let imin = (0..v.len())
        .find(|&i| v.iter().all(|&w| v[i] <= w))
        .unwrap();
    (imax, imin)
}

/// Largest pairwise gap.
pub fn oracle_max_difference(v: &[f64]) -> f64 {
    let mut best = 0.0f64;
    for a in v {
        for b in v {
            best = best.max(a - b);
        }
    }
    best
}

/// Position of each point in a descending ranking: number of points that
/// beat it, counting earlier equal points as beating it.
pub fn oracle_rank_order(v: &[f64]) -> Vec<usize> {
    let mut pos: Vec<(usize, usize)> = (0..v.len())
        .map(|i| {
            let beaten_by = (0..v.len())
                .filter(|&j| v[j] > v[i] || (v[j] == v[i] && j < i))
                .count();
            (beaten_by, i)
        })
        .collect();
    pos.sort();
    pos.into_iter().map(|(_, i)| i).collect()
}

/// (mean rounded to 1 decimal, plain sum).
pub fn oracle_mean_sum(v: &[f64]) -> (f64, f64) {
    let mut sum = 0.0;
    for x in v {
        sum += x;
    }
    let mean = sum / v.len() as f64;
    ((mean * 10.0).round() / 10.0, sum)
}

/// Groups of equal values as index lists, largest first, then by first
/// member.
pub fn oracle_same_groups(v: &[f64]) -> Vec<Vec<usize>> {
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for i in 0..v.len() {
        if (0..i).any(|j| v[j] == v[i]) {
            continue;
        }
        let members: Vec<usize> = (i..v.len()).filter(|&j| v[j] == v[i]).collect();
        if members.len() >= 2 {
            groups.push(members);
        }
    }
    groups.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));
    groups
}

/// |Δ| / max|Δ| computed independently.
pub fn oracle_changes(v: &[f64]) -> Vec<f64> {
    let d: Vec<f64> = (1..v.len()).map(|i| (v[i] - v[i - 1]).abs()).collect();
    let m = d.iter().cloned().fold(0.0, f64::max);
    d.iter()
        .map(|x| if m == 0.0 { 0.0 } else { x / m })
        .collect()
}

// ---- oracle comparison -------------------------------------------------------

pub fn series(values: &[f64]) -> Series {
    Series::from_pairs(
        values
            .iter()
            .enumerate()
            .map(|(i, v)| (format!("c{i}"), *v)),
    )
}

/// Checks every single-series statistic on `values` against the oracles
/// above, stopping at the first disagreement.
pub fn check_against_oracles(values: &[f64]) -> Result<(), String> {
    check_series_against_oracles(&series(values))
}

/// As [`check_against_oracles`], on an already built series.
pub fn check_series_against_oracles(s: &Series) -> Result<(), String> {
    let values = &s.values()[..];
    let (imax, imin) = oracle_extrema(values);
    let e = extrema(s);
    if e.text("max_category") != Some(s.points[imax].category.as_str())
        || e.text("min_category") != Some(s.points[imin].category.as_str())
    {
        return Err(format!("extrema {values:?}"));
    }
    if values.len() >= 2 {
        let d = max_difference(s).unwrap().number("difference").unwrap();
        if (d - oracle_max_difference(values)).abs() > 1e-9 {
            return Err(format!("max_difference {values:?}"));
        }
    }
    let order = oracle_rank_order(values);
    for k in 1..=values.len() {
        let m = order_rank(s, k).unwrap();
        let got: Vec<&str> = m
            .param("ranked_categories")
            .and_then(ParamValue::as_list)
            .unwrap()
            .iter()
            .map(|p| p.as_str().unwrap())
            .collect();
        let want: Vec<&str> = order[..k]
            .iter()
            .map(|&i| s.points[i].category.as_str())
            .collect();
        if got != want {
            return Err(format!("order_rank k={k} {values:?}"));
        }
    }
    let (mean, sum) = oracle_mean_sum(values);
    let dv = derived_values(s);
    if dv.number("mean") != Some(mean) || dv.number("sum") != Some(sum) {
        return Err(format!("derived {values:?}"));
    }
    let groups = oracle_same_groups(values);
    let got: Vec<Vec<String>> = same_values(s)
        .map(|m| {
            m.param("groups")
                .and_then(ParamValue::as_list)
                .unwrap()
                .iter()
                .map(|g| {
                    g.as_list()
                        .unwrap()
                        .iter()
                        .map(|c| c.as_str().unwrap().to_string())
                        .collect()
                })
                .collect()
        })
        .unwrap_or_default();
    let want: Vec<Vec<String>> = groups
        .iter()
        .map(|g| g.iter().map(|&i| s.points[i].category.clone()).collect())
        .collect();
    if got != want {
        return Err(format!("same_values {values:?}"));
    }
    Ok(())
}

// ---- ranking table ---------------------------------------------------------

/// Occurrence ratios transcribed from the paper's ranking table, with each
/// row mapped onto the message category that carries it.
pub fn paper_ratios(ct: ChartType) -> Vec<(Category, f64)> {
    use Category::*;
    match ct {
        ChartType::Bar | ChartType::Pie => vec![
            (ExtremaMinMax, 0.57),
            (ComparisonRelative, 0.12),
            (MaxDifference, 0.12),
            (OrderRank, 0.08),
            (TrendGlobal, 0.07),
            (DerivedValue, 0.06),
            (ComparisonAbsolute, 0.02),
        ],
        ChartType::Line => vec![
            (TrendGlobal, 0.62),
            (TrendLocal, 0.62),
            (Shape, 0.62),
            (ExtremaMinMax, 0.22),
            (ComparisonRelative, 0.10),
            (ComparisonAbsolute, 0.10),
            (MaxDifference, 0.04),
        ],
        ChartType::GroupedBar | ChartType::StackedBar => vec![
            (GlobalExtrema, 0.36),
            (TrendGlobal, 0.18),
            (ComparisonRelative, 0.13),
            (MaxDifference, 0.13),
            (TrendLocal, 0.07),
            (OrderRank, 0.04),
            (LocalExtrema, 0.02),
        ],
        ChartType::MultiLine => vec![
            (TrendGlobal, 0.48),
            (OrderRank, 0.24),
            (LocalExtrema, 0.13),
            (GlobalExtrema, 0.05),
            (ComparisonRelative, 0.02),
            (ComparisonAbsolute, 0.02),
        ],
    }
}

pub fn others(ct: ChartType) -> f64 {
    match ct {
        ChartType::Bar | ChartType::Pie => 0.04,
        ChartType::Line => 0.02,
        ChartType::GroupedBar | ChartType::StackedBar => 0.07,
        ChartType::MultiLine => 0.08,
    }
}

pub fn paper_weight(ct: ChartType, c: Category) -> f64 {
    if c == Category::IntroEncoding {
        return f64::INFINITY;
    }
    paper_ratios(ct)
        .into_iter()
        .find(|(k, _)| *k == c)
        .map_or(others(ct), |(_, w)| w)
}

// ---- generators ------------------------------------------------------------

pub fn chart(ct: ChartType, series: Vec<Series>) -> ChartSpec {
    ChartSpec::new(
        ct,
        "Generated chart",
        AxisSpec::new("Year", DataType::Temporal),
        AxisSpec::new("Amount", DataType::Quantitative),
        series,
    )
}

/// Years as categories, one series per name (or one unnamed series).
pub fn chart_from_values(ct: ChartType, values: &[Vec<f64>]) -> ChartSpec {
    let series = values
        .iter()
        .enumerate()
        .map(|(s, vals)| {
            let pairs: Vec<(String, f64)> = vals
                .iter()
                .enumerate()
                .map(|(i, v)| ((1990 + i).to_string(), *v))
                .collect();
            if ct.is_multi_series() {
                Series::named(format!("Group {}", (b'A' + s as u8) as char), pairs)
            } else {
                Series::from_pairs(pairs)
            }
        })
        .collect();
    chart(ct, series)
}

/// A random valid chart of any type with 3..=30 points.
pub fn random_chart(rng: &mut ChaCha8Rng) -> ChartSpec {
    let ct = ChartType::ALL[rng.gen_range(0..ChartType::ALL.len())];
    let n = rng.gen_range(3..=30);
    let k = if ct.is_multi_series() {
        rng.gen_range(2..=4)
    } else {
        1
    };
    let values: Vec<Vec<f64>> = (0..k)
        .map(|_| {
            (0..n)
                .map(|_| {
                    let v: f64 = rng.gen_range(1.0..500.0);
                    (v * 100.0).round() / 100.0
                })
                .collect()
        })
        .collect();
    chart_from_values(ct, &values)
}

/// Values quantized to the precision the renderer's ticks will show, so
/// tick-precision rounding is lossless.
pub fn tick_aligned(values: &mut [Vec<f64>], stacked: bool) {
    for _ in 0..4 {
        let (lo, hi) = if stacked {
            let n = values[0].len();
            let top = (0..n)
                .map(|i| values.iter().map(|s| s[i]).sum::<f64>())
                .fold(0.0, f64::max);
            (0.0, top)
        } else {
            values
                .iter()
                .flatten()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| {
                    (a.min(*v), b.max(*v))
                })
        };
        let dec = nice_ticks(lo, hi).3 as i32;
        let f = 10f64.powi(dec);
        for v in values.iter_mut().flatten() {
            *v = (*v * f).round() / f;
        }
    }
}

/// The deconstruction corpus: `count` charts cycling through the cartesian
/// and pie types, with tick-aligned values.
pub fn svg_corpus(count: usize, seed: u64) -> Vec<ChartSpec> {
    use rand::SeedableRng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let types = [
        ChartType::Bar,
        ChartType::Line,
        ChartType::GroupedBar,
        ChartType::StackedBar,
        ChartType::MultiLine,
        ChartType::Pie,
    ];
    (0..count)
        .map(|c| {
            let ct = types[c % types.len()];
            let n = rng.gen_range(3..=24);
            let k = if ct.is_multi_series() {
                rng.gen_range(2..=4)
            } else {
                1
            };
            let scale = [1.0, 10.0, 100.0, 1000.0][rng.gen_range(0..4)];
            let signed = matches!(ct, ChartType::Bar | ChartType::Line) && rng.gen_bool(0.3);
            let mut values: Vec<Vec<f64>> = (0..k)
                .map(|_| {
                    (0..n)
                        .map(|_| {
                            let lo = if signed { -0.5 } else { 0.05 };
                            rng.gen_range(lo..1.0) * scale
                        })
                        .collect()
                })
                .collect();
            tick_aligned(&mut values, ct == ChartType::StackedBar);
            if ct == ChartType::Pie {
                // percentage shares, so angle-based recovery is comparable
                let raw: Vec<f64> = values[0].iter().map(|v| v.abs() + 1.0).collect();
                let total: f64 = raw.iter().sum();
                let mut shares: Vec<f64> = raw
                    .iter()
                    .map(|v| (v / total * 10000.0).round() / 100.0)
                    .collect();
                let rest: f64 = shares[1..].iter().sum();
                shares[0] = ((100.0 - rest) * 100.0).round() / 100.0;
                values[0] = shares;
            }
            let mut spec = chart_from_values(ct, &values);
            spec.title = format!("Synthetic {} chart {c}", ct.phrase());
            spec
        })
        .collect()
}

/// Largest |recovered − truth| over all points, as a fraction of the data
/// range. `None` when the shapes differ.
pub fn relative_error(truth: &ChartSpec, got: &ChartSpec) -> Option<f64> {
    if truth.series.len() != got.series.len() {
        return None;
    }
    let all: Vec<f64> = truth.series.iter().flat_map(|s| s.values()).collect();
    let lo = all.iter().cloned().fold(f64::INFINITY, f64::min).min(0.0);
    let hi = all
        .iter()
        .cloned()
        .fold(f64::NEG_INFINITY, f64::max)
        .max(0.0);
    let range = (hi - lo).max(f64::MIN_POSITIVE);
    let mut worst = 0.0f64;
    for (a, b) in truth.series.iter().zip(&got.series) {
        if a.points.len() != b.points.len() {
            return None;
        }
        for (p, q) in a.points.iter().zip(&b.points) {
            if p.category != q.category {
                return None;
            }
            worst = worst.max((p.value - q.value).abs() / range);
        }
    }
    Some(worst)
}
