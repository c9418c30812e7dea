//! Interactive features: data-point selection, partial summaries and
//! keyword question answering.

use serde::{Deserialize, Serialize};

use crate::error::QueryError;
use crate::insights::{self, Category, InsightMessage, ParamValue};
use crate::model::{ChartSpec, Series};
use crate::realize::{format_number, realize_point};

/// A set of point indices, either across every series or within one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Selection {
    pub indices: Vec<usize>,
    /// `None` selects the indices in every series.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub series: Option<usize>,
}

impl Selection {
    pub fn cross(indices: impl Into<Vec<usize>>) -> Self {
        Self {
            indices: indices.into(),
            series: None,
        }
    }

    pub fn single(series: usize, indices: impl Into<Vec<usize>>) -> Self {
        Self {
            indices: indices.into(),
            series: Some(series),
        }
    }
}

/// Parses "0-3,7,9-10" into sorted, de-duplicated indices.
pub fn parse_ranges(text: &str) -> Result<Vec<usize>, QueryError> {
    let bad = |part: &str| QueryError::InvalidSelection(format!("cannot read range {part:?}"));
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        match part.split_once('-') {
            Some((a, b)) => {
                let a: usize = a.trim().parse().map_err(|_| bad(part))?;
                let b: usize = b.trim().parse().map_err(|_| bad(part))?;
                if a > b {
                    return Err(bad(part));
                }
                out.extend(a..=b);
            }
            None => out.push(part.parse().map_err(|_| bad(part))?),
        }
    }
    if out.is_empty() {
        return Err(QueryError::EmptySelection);
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

fn normalized_indices(spec: &ChartSpec, sel: &Selection) -> Result<Vec<usize>, QueryError> {
    if sel.indices.is_empty() {
        return Err(QueryError::EmptySelection);
    }
    if let Some(s) = sel.series {
        if s >= spec.series.len() {
            return Err(QueryError::InvalidSelection(format!(
                "series {s} does not exist (chart has {})",
                spec.series.len()
            )));
        }
    }
    let n = spec.point_count();
    let mut indices = sel.indices.clone();
    indices.sort_unstable();
    indices.dedup();
    if let Some(&bad) = indices.iter().find(|&&i| i >= n) {
        return Err(QueryError::InvalidSelection(format!(
            "index {bad} is out of range (chart has {n} points)"
        )));
    }
    Ok(indices)
}

/// The chart restricted to the selected points. Selecting within one series
/// of a multi-series chart yields the single-series chart type.
pub fn restrict(spec: &ChartSpec, sel: &Selection) -> Result<ChartSpec, QueryError> {
    let indices = normalized_indices(spec, sel)?;
    let keep = |s: &Series| Series {
        name: s.name.clone(),
        points: indices.iter().map(|&i| s.points[i].clone()).collect(),
    };
    let mut out = spec.clone();
    match sel.series {
        Some(si) if spec.series.len() > 1 => {
            out.series = vec![keep(&spec.series[si])];
            out.chart_type = spec.chart_type.single_series();
        }
        _ => out.series = spec.series.iter().map(keep).collect(),
    }
    Ok(out)
}

/// Contiguous index runs rendered with category labels:
/// ["2012 to 2014", "2018"].
fn label_runs(spec: &ChartSpec, indices: &[usize]) -> Vec<String> {
    let cats = spec.categories();
    let mut runs = Vec::new();
    let mut i = 0;
    while i < indices.len() {
        let mut j = i;
        while j + 1 < indices.len() && indices[j + 1] == indices[j] + 1 {
            j += 1;
        }
        if i == j {
            runs.push(cats[indices[i]].to_string());
        } else {
            runs.push(format!("{} to {}", cats[indices[i]], cats[indices[j]]));
        }
        i = j + 1;
    }
    runs
}

fn join_runs(runs: &[String]) -> String {
    match runs {
        [] => String::new(),
        [one] => one.clone(),
        [init @ .., last] => format!("{}, and {last}", init.join(", ")),
    }
}

/// "Year 2012 to 2014, and 2018 are selected."
pub fn describe_selection(spec: &ChartSpec, sel: &Selection) -> Result<String, QueryError> {
    let indices = normalized_indices(spec, sel)?;
    let runs = label_runs(spec, &indices);
    let verb = if indices.len() == 1 { "is" } else { "are" };
    let mut text = format!("{} {} {verb} selected", spec.x_axis.label, join_runs(&runs));
    if let (Some(si), true) = (sel.series, spec.series.len() > 1) {
        text.push_str(&format!(" for {}", spec.series[si].display_name(si)));
    }
    text.push('.');
    Ok(text)
}

/// Intro message for a partial summary.
pub fn selection_intro(spec: &ChartSpec, sel: &Selection) -> Result<InsightMessage, QueryError> {
    let indices = normalized_indices(spec, sel)?;
    let restricted = restrict(spec, sel)?;
    let multi = restricted.chart_type.is_multi_series();
    let names: Vec<ParamValue> = restricted
        .series
        .iter()
        .enumerate()
        .map(|(i, s)| s.display_name(i).into())
        .collect();
    Ok(InsightMessage::new(Category::IntroEncoding)
        .with_variant(if multi {
            "selection_multi"
        } else if sel.series.is_some() && spec.series.len() > 1 {
            // one line picked out of several: name it
            "selection_series"
        } else {
            "selection"
        })
        .with("n_points", indices.len())
        .with("n_series", restricted.series.len())
        .with("series_names", ParamValue::List(names))
        .with("title", &spec.title)
        .with("selection_ranges", join_runs(&label_runs(spec, &indices))))
}

/// Restricted chart plus its messages, led by the selection intro.
pub fn selection_insights(
    spec: &ChartSpec,
    sel: &Selection,
) -> crate::Result<(ChartSpec, Vec<InsightMessage>)> {
    let restricted = restrict(spec, sel)?;
    let mut messages = insights::analyze(&restricted)?;
    messages[0] = selection_intro(spec, sel)?;
    Ok((restricted, messages))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "label", rename_all = "snake_case")]
pub enum Query {
    Maximum,
    Minimum,
    Average,
    Sum,
    Trend,
    AxisLabel,
    ValueLookup(String),
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Answer {
    pub query: Query,
    pub found: bool,
    pub text: String,
}

fn tokens(text: &str) -> Vec<String> {
    text.split(|c: char| !c.is_alphanumeric() && c != '.')
        .map(|t| t.trim_matches('.').to_lowercase())
        .filter(|t| !t.is_empty())
        .collect()
}

const KEYWORDS: [(&[&str], Query); 5] = [
    (
        &["max", "maximum", "highest", "largest", "biggest", "peak"],
        Query::Maximum,
    ),
    (&["min", "minimum", "lowest", "smallest"], Query::Minimum),
    (&["average", "mean", "avg"], Query::Average),
    (&["sum", "total"], Query::Sum),
    (&["trend", "trends", "trending"], Query::Trend),
];

const FILLER: [&str; 18] = [
    "what", "whats", "is", "was", "the", "value", "of", "for", "in", "at", "a", "an", "show", "me",
    "tell", "about", "please", "how",
];

fn contains_seq(hay: &[String], needle: &[String]) -> bool {
    !needle.is_empty() && hay.windows(needle.len()).any(|w| w == needle)
}

fn asks_axis_labels(toks: &[String]) -> bool {
    let joined = toks.join(" ");
    toks.iter().any(|t| t == "labels" || t == "axes")
        || ["x axis", "y axis"].iter().any(|p| joined.contains(p))
}

/// Classifies a typed question: keywords first, then an exact category
/// label anywhere in the text. A "value of X" question naming no known
/// label becomes a lookup that reports "not found".
pub fn parse_query(text: &str, spec: &ChartSpec) -> Query {
    let toks = tokens(text);
    for (words, query) in KEYWORDS {
        if toks.iter().any(|t| words.contains(&t.as_str())) {
            return query;
        }
    }
    if asks_axis_labels(&toks) {
        return Query::AxisLabel;
    }
    let best = spec
        .categories()
        .into_iter()
        .filter(|c| contains_seq(&toks, &tokens(c)))
        .max_by_key(|c| (tokens(c).len(), c.len()));
    if let Some(cat) = best {
        return Query::ValueLookup(cat.to_string());
    }
    let rest: Vec<&str> = toks
        .iter()
        .map(String::as_str)
        .filter(|t| !FILLER.contains(t))
        .collect();
    let asks_value = toks.iter().any(|t| t == "value");
    if !rest.is_empty() && (asks_value || toks.len() == 1) {
        return Query::ValueLookup(rest.join(" "));
    }
    Query::Unknown
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Answers a typed question about the chart in one or two sentences.
pub fn answer(spec: &ChartSpec, text: &str) -> Answer {
    answer_query(spec, parse_query(text, spec))
}

pub fn answer_query(spec: &ChartSpec, query: Query) -> Answer {
    let x = &spec.x_axis.label;
    let y = &spec.y_axis.label;
    let multi = spec.series.len() > 1;
    let names: Vec<String> = spec
        .series
        .iter()
        .enumerate()
        .map(|(i, s)| s.display_name(i))
        .collect();

    let extreme = |want_max: bool| -> String {
        let mut best: Option<(usize, usize)> = None;
        for (si, s) in spec.series.iter().enumerate() {
            for (pi, p) in s.points.iter().enumerate() {
                let better = match best {
                    None => true,
                    Some((bs, bp)) => {
                        let cur = spec.series[bs].points[bp].value;
                        if want_max {
                            p.value > cur
                        } else {
                            p.value < cur
                        }
                    }
                };
                if better {
                    best = Some((si, pi));
                }
            }
        }
        let word = if want_max { "maximum" } else { "minimum" };
        match best {
            None => "The chart has no data.".to_string(),
            Some((si, pi)) => {
                let p = &spec.series[si].points[pi];
                let v = format_number(p.value);
                if multi {
                    format!(
                        "The {word} {y} is {v}, for {} at {x} {}.",
                        names[si], p.category
                    )
                } else {
                    format!("The {word} {y} is {v}, at {x} {}.", p.category)
                }
            }
        }
    };

    let per_series = |label: &str, f: &dyn Fn(&Series) -> f64| -> String {
        if multi {
            let parts: Vec<String> = spec
                .series
                .iter()
                .enumerate()
                .map(|(i, s)| format!("{} is {}", names[i], format_number(f(s))))
                .collect();
            format!("The {label} {y} of {}.", crate::realize::join_list(&parts))
        } else {
            let s = &spec.series[0];
            format!("The {label} {y} is {}.", format_number(f(s)))
        }
    };

    let (found, text) = match &query {
        Query::Maximum => (true, extreme(true)),
        Query::Minimum => (true, extreme(false)),
        Query::Average => (
            true,
            per_series("average", &|s| insights::round_dp(mean(&s.values()), 2)),
        ),
        Query::Sum => (
            true,
            per_series("total", &|s| insights::round_dp(s.values().iter().sum(), 2)),
        ),
        Query::Trend => {
            let phrases: Vec<String> = spec
                .series
                .iter()
                .enumerate()
                .filter(|(_, s)| s.len() >= 2)
                .map(|(i, s)| {
                    let word = insights::trend_direction(&s.values()).word();
                    if multi {
                        format!("{} is {word}", names[i])
                    } else {
                        format!("the {y} is {word}")
                    }
                })
                .collect();
            if phrases.is_empty() {
                (
                    true,
                    "There is only one data point, so there is no trend.".to_string(),
                )
            } else {
                (
                    true,
                    crate::realize::tidy_sentence(&format!(
                        "Overall, {}",
                        crate::realize::join_list(&phrases)
                    )),
                )
            }
        }
        Query::AxisLabel => (
            true,
            format!("The x axis represents {x}, and the y axis represents {y}."),
        ),
        Query::ValueLookup(label) => lookup(spec, label, &names),
        Query::Unknown => (
            false,
            format!(
                "Sorry, I did not understand the question. You can ask about the maximum, \
                 minimum, average, total or trend, or about the value at a specific {x}."
            ),
        ),
    };
    Answer { query, found, text }
}

fn lookup(spec: &ChartSpec, label: &str, names: &[String]) -> (bool, String) {
    let want = tokens(label);
    let idx = spec.categories().iter().position(|c| tokens(c) == want);
    let x = &spec.x_axis.label;
    let Some(pi) = idx else {
        return (
            false,
            format!("Sorry, {x} {label} was not found in this chart."),
        );
    };
    if spec.series.len() > 1 {
        let parts: Vec<String> = spec
            .series
            .iter()
            .enumerate()
            .map(|(i, s)| format!("{} is {}", names[i], format_number(s.points[pi].value)))
            .collect();
        let cat = &spec.series[0].points[pi].category;
        (
            true,
            format!(
                "We have found multiple values for {x} {cat}. These are, {}.",
                parts.join(", ")
            ),
        )
    } else {
        // index is in range by construction
        (true, realize_point(spec, 0, pi).unwrap_or_default())
    }
}

/// Label lookup for callers that need the index.
pub fn find_category(spec: &ChartSpec, label: &str) -> Result<usize, QueryError> {
    let want = tokens(label);
    spec.categories()
        .iter()
        .position(|c| tokens(c) == want)
        .ok_or_else(|| QueryError::LabelNotFound(label.to_string()))
}
