//! Highcharts-convention SVG reader.
//!
//! Series marks live under `highcharts-series-group`, one group per series
//! classed `highcharts-series-{i}` plus a type class (`-column-series`,
//! `-line-series`, `-pie-series`, ...). Values come from
//! `highcharts-data-labels` when present and from mark geometry measured
//! against the value-axis ticks otherwise.

use std::str::FromStr;

use roxmltree::{Document, Node};
use svgtypes::{SimplePathSegment, SimplifyingPathParser, Transform};

use super::scale::{recover_from_marks, AxisScale, BBox, MarkKind, MarkRecord, Orientation};
use super::{DeconstructOptions, Deconstruction};
use crate::error::DeconstructError;
use crate::model::{validate, AxisSpec, ChartSpec, ChartType, DataPoint, DataType, Series};

fn classes<'a>(node: Node<'a, '_>) -> impl Iterator<Item = &'a str> {
    node.attribute("class").unwrap_or("").split_whitespace()
}

fn has_class(node: Node<'_, '_>, class: &str) -> bool {
    classes(node).any(|c| c == class)
}

fn series_index(node: Node<'_, '_>) -> Option<usize> {
    classes(node)
        .filter_map(|c| c.strip_prefix("highcharts-series-"))
        .find_map(|rest| rest.parse().ok())
}

fn mul(p: &Transform, c: &Transform) -> Transform {
    Transform::new(
        p.a * c.a + p.c * c.b,
        p.b * c.a + p.d * c.b,
        p.a * c.c + p.c * c.d,
        p.b * c.c + p.d * c.d,
        p.a * c.e + p.c * c.f + p.e,
        p.b * c.e + p.d * c.f + p.f,
    )
}

fn apply(t: &Transform, x: f64, y: f64) -> (f64, f64) {
    (t.a * x + t.c * y + t.e, t.b * x + t.d * y + t.f)
}

/// Accumulated transform from the document root down to (and including)
/// `node`.
fn ctm(node: Node<'_, '_>) -> Result<Transform, DeconstructError> {
    let chain: Vec<Node> = node.ancestors().filter(Node::is_element).collect();
    let mut t = Transform::default();
    for n in chain.iter().rev() {
        if let Some(attr) = n.attribute("transform") {
            let local = Transform::from_str(attr).map_err(|e| {
                DeconstructError::MalformedSvg(format!("bad transform {attr:?}: {e}"))
            })?;
            t = mul(&t, &local);
        }
    }
    Ok(t)
}

fn num_attr(node: Node<'_, '_>, name: &str) -> f64 {
    node.attribute(name)
        .and_then(|v| v.trim().trim_end_matches("px").parse().ok())
        .unwrap_or(0.0)
}

/// Visible text of an element; Highcharts draws a stroked copy of each label
/// in a `highcharts-text-outline` tspan, which is skipped.
fn text_of(node: Node<'_, '_>) -> String {
    let mut out = String::new();
    for d in node.descendants().filter(Node::is_text) {
        let hidden = d
            .ancestors()
            .take_while(|a| *a != node)
            .any(|a| a.is_element() && has_class(a, "highcharts-text-outline"));
        if !hidden {
            out.push_str(d.text().unwrap_or(""));
            out.push(' ');
        }
    }
    out.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Absolute anchor point of a text element.
fn text_anchor(node: Node<'_, '_>) -> Result<(f64, f64), DeconstructError> {
    let text = if node.has_tag_name("text") {
        node
    } else {
        node.descendants()
            .find(|d| d.has_tag_name("text"))
            .unwrap_or(node)
    };
    let (mut x, mut y) = (text.attribute("x"), text.attribute("y"));
    if x.is_none() || y.is_none() {
        if let Some(ts) = text
            .children()
            .find(|c| c.has_tag_name("tspan") && c.attribute("x").is_some())
        {
            x = x.or(ts.attribute("x"));
            y = y.or(ts.attribute("y"));
        }
    }
    let parse = |v: Option<&str>| v.and_then(|s| s.trim().parse::<f64>().ok()).unwrap_or(0.0);
    Ok(apply(&ctm(text)?, parse(x), parse(y)))
}

fn path_vertices(node: Node<'_, '_>) -> Result<Vec<(f64, f64)>, DeconstructError> {
    let d = node.attribute("d").unwrap_or("");
    let t = ctm(node)?;
    let mut out = Vec::new();
    for seg in SimplifyingPathParser::from(d) {
        let seg = seg.map_err(|e| DeconstructError::MalformedSvg(format!("bad path data: {e}")))?;
        let p = match seg {
            SimplePathSegment::MoveTo { x, y }
            | SimplePathSegment::LineTo { x, y }
            | SimplePathSegment::CurveTo { x, y, .. }
            | SimplePathSegment::Quadratic { x, y, .. } => (x, y),
            SimplePathSegment::ClosePath => continue,
        };
        out.push(apply(&t, p.0, p.1));
    }
    Ok(out)
}

fn element_bbox(node: Node<'_, '_>) -> Result<Option<BBox>, DeconstructError> {
    let t = ctm(node)?;
    let corners = |x: f64, y: f64, w: f64, h: f64| {
        [
            apply(&t, x, y),
            apply(&t, x + w, y),
            apply(&t, x, y + h),
            apply(&t, x + w, y + h),
        ]
    };
    Ok(match node.tag_name().name() {
        "rect" => BBox::from_points(&corners(
            num_attr(node, "x"),
            num_attr(node, "y"),
            num_attr(node, "width"),
            num_attr(node, "height"),
        )),
        "circle" | "ellipse" => {
            let (cx, cy) = apply(&t, num_attr(node, "cx"), num_attr(node, "cy"));
            Some(BBox::new(cx, cy, 0.0, 0.0))
        }
        "path" => BBox::from_points(&path_vertices(node)?),
        _ => None,
    })
}

/// Parses a tick or data label: thousands separators, currency, percent and
/// k/M/B suffixes are accepted. Returns the value and its decimal places.
pub fn parse_label_number(text: &str) -> Option<(f64, usize)> {
    let mut s: String = text
        .trim()
        .replace('\u{2212}', "-")
        .chars()
        .filter(|c| !matches!(c, ',' | ' ' | '\u{a0}' | '$' | '€' | '£' | '%'))
        .collect();
    let mut mult = 1.0;
    let mut mult_digits = 0usize;
    for (suffix, m, digits) in [
        ("k", 1e3, 3),
        ("K", 1e3, 3),
        ("M", 1e6, 6),
        ("B", 1e9, 9),
        ("G", 1e9, 9),
    ] {
        if let Some(rest) = s.strip_suffix(suffix) {
            s = rest.to_string();
            mult = m;
            mult_digits = digits;
            break;
        }
    }
    if s.is_empty()
        || !s
            .chars()
            .all(|c| c.is_ascii_digit() || matches!(c, '.' | '-' | '+'))
    {
        return None;
    }
    let v: f64 = s.parse().ok()?;
    if !v.is_finite() {
        return None;
    }
    let dec = s.split_once('.').map_or(0, |(_, f)| f.len());
    Some((v * mult, dec.saturating_sub(mult_digits)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum SeriesKind {
    Bar,
    Line,
    Pie,
}

fn series_kind(node: Node<'_, '_>) -> Option<SeriesKind> {
    classes(node).find_map(|c| match c {
        "highcharts-column-series" | "highcharts-bar-series" => Some(SeriesKind::Bar),
        "highcharts-line-series" | "highcharts-spline-series" | "highcharts-area-series" => {
            Some(SeriesKind::Line)
        }
        "highcharts-pie-series" => Some(SeriesKind::Pie),
        _ => None,
    })
}

struct Label {
    pos: (f64, f64),
    text: String,
}

fn labels_in(group: Node<'_, '_>) -> Result<Vec<Label>, DeconstructError> {
    let mut out = Vec::new();
    // data labels are wrapped in a classed <g>; axis labels are bare <text>
    let wrapped: Vec<Node> = group
        .descendants()
        .filter(|d| d.is_element() && has_class(*d, "highcharts-data-label"))
        .collect();
    let items: Vec<Node> = if wrapped.is_empty() {
        group
            .descendants()
            .filter(|d| d.has_tag_name("text"))
            .collect()
    } else {
        wrapped
    };
    for item in items {
        let text = text_of(item);
        if text.is_empty() {
            continue;
        }
        out.push(Label {
            pos: text_anchor(item)?,
            text,
        });
    }
    Ok(out)
}

fn find_classed<'a, 'i>(root: Node<'a, 'i>, class: &str) -> Vec<Node<'a, 'i>> {
    root.descendants()
        .filter(|d| d.is_element() && has_class(*d, class))
        .collect()
}

fn axis_title(root: Node<'_, '_>, axis_class: &str) -> Option<String> {
    find_classed(root, "highcharts-axis-title")
        .into_iter()
        .find(|t| {
            t.ancestors()
                .any(|a| a.is_element() && has_class(a, axis_class))
        })
        .map(text_of)
        .filter(|s| !s.is_empty())
}

fn looks_temporal(labels: &[String]) -> bool {
    const MONTHS: [&str; 12] = [
        "jan", "feb", "mar", "apr", "may", "jun", "jul", "aug", "sep", "oct", "nov", "dec",
    ];
    !labels.is_empty()
        && labels.iter().all(|l| {
            let l = l.trim().to_ascii_lowercase();
            (l.len() == 4 && l.chars().all(|c| c.is_ascii_digit()))
                || MONTHS.iter().any(|m| l.starts_with(m))
        })
}

struct RawSeries<'a, 'i> {
    index: usize,
    kind: SeriesKind,
    node: Node<'a, 'i>,
}

/// x, y and parsed (value, decimals) of a numeric tick label.
type Tick = (f64, f64, (f64, usize));

fn pick_nearest(positions: &[f64], target: f64) -> usize {
    let mut best = 0;
    for (i, p) in positions.iter().enumerate() {
        if (p - target).abs() < (positions[best] - target).abs() {
            best = i;
        }
    }
    best
}

pub(super) fn deconstruct(
    text: &str,
    opts: &DeconstructOptions,
) -> Result<Deconstruction, DeconstructError> {
    let doc = Document::parse(text).map_err(|e| DeconstructError::MalformedSvg(e.to_string()))?;
    let root = doc.root_element();
    if !root.has_tag_name("svg") {
        return Err(DeconstructError::MalformedSvg(format!(
            "root element is <{}>, not <svg>",
            root.tag_name().name()
        )));
    }
    let group = find_classed(root, "highcharts-series-group")
        .into_iter()
        .next()
        .ok_or_else(|| {
            DeconstructError::NoChartFound("no highcharts-series-group element".into())
        })?;

    let mut raw: Vec<RawSeries> = Vec::new();
    for node in group.descendants().filter(|d| d.is_element()) {
        if !has_class(node, "highcharts-series") || has_class(node, "highcharts-markers") {
            continue;
        }
        let Some(index) = series_index(node) else {
            continue;
        };
        let kind = series_kind(node).ok_or_else(|| {
            DeconstructError::UnsupportedMark(format!(
                "series {index} has classes {:?}",
                node.attribute("class").unwrap_or("")
            ))
        })?;
        raw.push(RawSeries { index, kind, node });
    }
    if raw.is_empty() {
        return Err(DeconstructError::NoChartFound(
            "series group contains no series".into(),
        ));
    }
    raw.sort_by_key(|s| s.index);
    let kind = raw[0].kind;
    if raw.iter().any(|s| s.kind != kind) {
        return Err(DeconstructError::InconsistentSeries(
            "series mix different mark types".into(),
        ));
    }

    let title = find_classed(root, "highcharts-title")
        .first()
        .map(|n| text_of(*n))
        .unwrap_or_default();
    let mut warnings = Vec::new();
    let x_title = axis_title(root, "highcharts-xaxis");
    let y_title = axis_title(root, "highcharts-yaxis");

    let data_labels = |index: usize| -> Result<Option<Vec<Label>>, DeconstructError> {
        let groups: Vec<Node> = find_classed(root, "highcharts-data-labels")
            .into_iter()
            .filter(|g| series_index(*g) == Some(index))
            .collect();
        if groups.is_empty() {
            return Ok(None);
        }
        let mut all = Vec::new();
        for g in groups {
            all.extend(labels_in(g)?);
        }
        Ok((!all.is_empty()).then_some(all))
    };

    if kind == SeriesKind::Pie {
        let spec = pie_chart(
            root,
            &raw[0],
            title,
            x_title,
            y_title,
            opts,
            &mut warnings,
            data_labels(raw[0].index)?,
        )?;
        return finish(spec, warnings);
    }

    // value axis ticks
    let y_labels: Vec<Label> = find_classed(root, "highcharts-yaxis-labels")
        .into_iter()
        .map(labels_in)
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .flatten()
        .collect();
    let numeric_ticks: Vec<Tick> = y_labels
        .iter()
        .filter_map(|l| parse_label_number(&l.text).map(|v| (l.pos.0, l.pos.1, v)))
        .collect();
    let spread = |f: fn(&Tick) -> f64| {
        let lo = numeric_ticks.iter().map(f).fold(f64::INFINITY, f64::min);
        let hi = numeric_ticks
            .iter()
            .map(f)
            .fold(f64::NEG_INFINITY, f64::max);
        hi - lo
    };
    let value_axis = if numeric_ticks.len() >= 2 && spread(|t| t.0) > spread(|t| t.1) {
        Orientation::X
    } else {
        Orientation::Y
    };
    let cat_axis = match value_axis {
        Orientation::X => Orientation::Y,
        Orientation::Y => Orientation::X,
    };
    let scale = build_scale(root, &numeric_ticks, value_axis);

    // marks per series, ordered along the category axis
    let mut marks: Vec<Vec<BBox>> = Vec::new();
    for s in &raw {
        let mut boxes = series_marks(root, s)?;
        boxes.sort_by(|a, b| a.mid(cat_axis).total_cmp(&b.mid(cat_axis)));
        marks.push(boxes);
    }
    let n = marks[0].len();
    if marks.iter().any(|m| m.len() != n) {
        return Err(DeconstructError::InconsistentSeries(format!(
            "series disagree on point count: {:?}",
            marks.iter().map(Vec::len).collect::<Vec<_>>()
        )));
    }
    if n == 0 {
        return Err(DeconstructError::NoChartFound(
            "series contain no marks".into(),
        ));
    }

    let stacked = kind == SeriesKind::Bar
        && marks.len() >= 2
        && (0..n).all(|i| {
            let (a, b) = (&marks[0][i], &marks[1][i]);
            (a.mid(cat_axis) - b.mid(cat_axis)).abs() < 0.5
        });

    // categories from the category-axis labels
    let mut x_labels: Vec<Label> = find_classed(root, "highcharts-xaxis-labels")
        .into_iter()
        .map(labels_in)
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .flatten()
        .collect();
    let pos_of = |p: (f64, f64)| match cat_axis {
        Orientation::X => p.0,
        Orientation::Y => p.1,
    };
    x_labels.sort_by(|a, b| pos_of(a.pos).total_cmp(&pos_of(b.pos)));
    // mark slot centers along the category axis (mean over series)
    let centers: Vec<f64> = (0..n)
        .map(|i| marks.iter().map(|m| m[i].mid(cat_axis)).sum::<f64>() / marks.len() as f64)
        .collect();
    let categories: Vec<String> = if x_labels.len() == n {
        x_labels.iter().map(|l| l.text.clone()).collect()
    } else if x_labels.is_empty() {
        warnings.push("no category labels found; categories numbered".to_string());
        (1..=n).map(|i| format!("Point {i}")).collect()
    } else {
        let positions: Vec<f64> = x_labels.iter().map(|l| pos_of(l.pos)).collect();
        let picked: Vec<String> = centers
            .iter()
            .map(|c| x_labels[pick_nearest(&positions, *c)].text.clone())
            .collect();
        let mut seen = std::collections::HashSet::new();
        if !picked.iter().all(|c| seen.insert(c.clone())) {
            return Err(DeconstructError::InconsistentSeries(format!(
                "{} category labels cannot be matched to {n} marks",
                x_labels.len()
            )));
        }
        picked
    };

    let mark_kind = match (kind, stacked) {
        (SeriesKind::Line, _) => MarkKind::LineVertex,
        (_, true) => MarkKind::StackedBar,
        _ => MarkKind::Bar,
    };

    let legend = legend_names(root);
    let mut series_out = Vec::new();
    for (si, s) in raw.iter().enumerate() {
        let records: Vec<MarkRecord> = marks[si]
            .iter()
            .enumerate()
            .map(|(ci, b)| MarkRecord {
                kind: mark_kind,
                bbox: *b,
                series: si,
                category: ci,
            })
            .collect();
        let mut values: Vec<Option<f64>> = vec![None; n];
        let labels = if opts.prefer_labels {
            data_labels(s.index)?
        } else {
            None
        };
        if let Some(labels) = labels {
            let assigned: Vec<usize> = if labels.len() == n {
                let mut order: Vec<usize> = (0..n).collect();
                order.sort_by(|&a, &b| pos_of(labels[a].pos).total_cmp(&pos_of(labels[b].pos)));
                let mut slot = vec![0; n];
                for (rank, li) in order.into_iter().enumerate() {
                    slot[li] = rank;
                }
                slot
            } else {
                labels
                    .iter()
                    .map(|l| pick_nearest(&centers, pos_of(l.pos)))
                    .collect()
            };
            let mut dropped = vec![false; n];
            for (l, ci) in labels.iter().zip(assigned) {
                match parse_label_number(&l.text) {
                    Some((v, _)) => values[ci] = Some(v),
                    None => {
                        dropped[ci] = true;
                        warnings.push(format!(
                            "series {si}: data label {:?} at {:?} is not a number; point dropped",
                            l.text, categories[ci]
                        ));
                    }
                }
            }
            let missing: Vec<usize> = (0..n)
                .filter(|&i| values[i].is_none() && !dropped[i])
                .collect();
            if !missing.is_empty() {
                let scale = scale.clone()?;
                let picked: Vec<MarkRecord> = missing.iter().map(|&i| records[i].clone()).collect();
                for (i, v) in missing.iter().zip(recover_from_marks(&picked, &scale)?) {
                    values[*i] = Some(v);
                }
                warnings.push(format!(
                    "series {si}: {} point(s) without data labels read from geometry",
                    missing.len()
                ));
            }
        } else {
            let scale = scale.clone()?;
            for (i, v) in recover_from_marks(&records, &scale)?
                .into_iter()
                .enumerate()
            {
                values[i] = Some(v);
            }
        }
        let points: Vec<DataPoint> = values
            .iter()
            .zip(&categories)
            .filter_map(|(v, c)| v.map(|v| DataPoint::new(c.clone(), v)))
            .collect();
        let name = legend
            .iter()
            .find(|(i, _)| *i == s.index)
            .map(|(_, n)| n.clone());
        series_out.push(Series::new(name, points));
    }

    // a dropped label in one series must not misalign the others
    if series_out.len() > 1 {
        let keep: Vec<String> = series_out[0]
            .points
            .iter()
            .map(|p| p.category.clone())
            .filter(|c| {
                series_out
                    .iter()
                    .all(|s| s.points.iter().any(|p| &p.category == c))
            })
            .collect();
        for s in &mut series_out {
            let before = s.points.len();
            s.points.retain(|p| keep.contains(&p.category));
            if s.points.len() != before {
                warnings.push("points missing from another series were dropped".into());
            }
        }
    }

    let chart_type = match (kind, series_out.len() > 1, stacked) {
        (SeriesKind::Line, false, _) => ChartType::Line,
        (SeriesKind::Line, true, _) => ChartType::MultiLine,
        (_, false, _) => ChartType::Bar,
        (_, true, true) => ChartType::StackedBar,
        (_, true, false) => ChartType::GroupedBar,
    };
    if chart_type.is_multi_series() {
        for (i, s) in series_out.iter_mut().enumerate() {
            if s.name.is_none() {
                s.name = Some(format!("Series {}", i + 1));
            }
        }
    }
    let x_type = if looks_temporal(&categories) {
        DataType::Temporal
    } else {
        DataType::Nominal
    };
    let spec = ChartSpec::new(
        chart_type,
        title,
        AxisSpec::new(x_title.unwrap_or_else(|| "Category".into()), x_type),
        AxisSpec::new(
            y_title.unwrap_or_else(|| "Value".into()),
            DataType::Quantitative,
        ),
        series_out,
    );
    finish(spec, warnings)
}

fn finish(spec: ChartSpec, warnings: Vec<String>) -> Result<Deconstruction, DeconstructError> {
    let report = validate(&spec);
    if !report.is_valid() {
        return Err(DeconstructError::InconsistentSeries(report.to_string()));
    }
    Ok(Deconstruction {
        chart: spec,
        warnings,
    })
}

/// Scale from tick labels, using grid lines for exact tick pixels when they
/// pair up one-to-one with the labels. Errors are deferred until a series
/// actually needs geometry.
fn build_scale(
    root: Node<'_, '_>,
    ticks: &[(f64, f64, (f64, usize))],
    axis: Orientation,
) -> Result<AxisScale, DeconstructError> {
    let pos = |p: (f64, f64)| match axis {
        Orientation::X => p.0,
        Orientation::Y => p.1,
    };
    let mut label_pos: Vec<(f64, f64)> = ticks.iter().map(|t| (pos((t.0, t.1)), t.2 .0)).collect();
    label_pos.sort_by(|a, b| a.0.total_cmp(&b.0));
    let decimals = ticks.iter().map(|t| t.2 .1).max().unwrap_or(0);

    let mut grid: Vec<f64> = Vec::new();
    for g in find_classed(root, "highcharts-yaxis-grid") {
        for line in g.descendants().filter(|d| d.has_tag_name("path")) {
            if let Some(first) = path_vertices(line)?.first() {
                grid.push(pos(*first));
            }
        }
    }
    grid.sort_by(f64::total_cmp);
    grid.dedup_by(|a, b| (*a - *b).abs() < 1e-6);

    let positions: Vec<f64> = if grid.len() == label_pos.len() {
        grid
    } else {
        label_pos.iter().map(|t| t.0).collect()
    };
    let values: Vec<f64> = label_pos.iter().map(|t| t.1).collect();
    AxisScale::fit(axis, &positions, &values, decimals)
}

fn series_marks(root: Node<'_, '_>, s: &RawSeries<'_, '_>) -> Result<Vec<BBox>, DeconstructError> {
    let mut out = Vec::new();
    match s.kind {
        SeriesKind::Bar => {
            for r in s.node.descendants().filter(|d| d.has_tag_name("rect")) {
                if let Some(b) = element_bbox(r)? {
                    out.push(b);
                }
            }
        }
        SeriesKind::Line => {
            let graph = s
                .node
                .descendants()
                .find(|d| d.has_tag_name("path") && has_class(*d, "highcharts-graph"));
            if let Some(graph) = graph {
                for (x, y) in path_vertices(graph)? {
                    out.push(BBox::new(x, y, 0.0, 0.0));
                }
            } else {
                // fall back to point markers
                let markers = find_classed(root, "highcharts-markers")
                    .into_iter()
                    .filter(|m| series_index(*m) == Some(s.index));
                for m in markers {
                    for p in m.descendants().filter(|d| d.is_element()) {
                        if matches!(p.tag_name().name(), "path" | "circle" | "rect") {
                            if let Some(b) = element_bbox(p)? {
                                let (cx, cy) = b.center();
                                out.push(BBox::new(cx, cy, 0.0, 0.0));
                            }
                        }
                    }
                }
            }
        }
        SeriesKind::Pie => {}
    }
    Ok(out)
}

fn legend_names(root: Node<'_, '_>) -> Vec<(usize, String)> {
    find_classed(root, "highcharts-legend-item")
        .into_iter()
        .filter_map(|item| Some((series_index(item)?, text_of(item))))
        .filter(|(_, t)| !t.is_empty())
        .collect()
}

/// Angle swept by a slice path around its center (the vertex the path
/// returns to before closing).
fn slice_angle(vertices: &[(f64, f64)]) -> Option<f64> {
    if vertices.len() < 3 {
        return None;
    }
    let (cx, cy) = *vertices.last()?;
    let arc = &vertices[..vertices.len() - 1];
    let mut total = 0.0;
    for w in arc.windows(2) {
        let a0 = (w[0].1 - cy).atan2(w[0].0 - cx);
        let a1 = (w[1].1 - cy).atan2(w[1].0 - cx);
        let mut d = a1 - a0;
        while d > std::f64::consts::PI {
            d -= 2.0 * std::f64::consts::PI;
        }
        while d < -std::f64::consts::PI {
            d += 2.0 * std::f64::consts::PI;
        }
        total += d;
    }
    Some(total.abs())
}

#[allow(clippy::too_many_arguments)]
fn pie_chart(
    root: Node<'_, '_>,
    s: &RawSeries<'_, '_>,
    title: String,
    x_title: Option<String>,
    y_title: Option<String>,
    opts: &DeconstructOptions,
    warnings: &mut Vec<String>,
    labels: Option<Vec<Label>>,
) -> Result<ChartSpec, DeconstructError> {
    let slices: Vec<Node> = s
        .node
        .descendants()
        .filter(|d| d.has_tag_name("path"))
        .collect();
    if slices.is_empty() {
        return Err(DeconstructError::NoChartFound(
            "pie series has no slices".into(),
        ));
    }
    let n = slices.len();
    let labels = if opts.prefer_labels { labels } else { None };
    let legend: Vec<String> = find_classed(root, "highcharts-legend-item")
        .into_iter()
        .map(text_of)
        .filter(|t| !t.is_empty())
        .collect();

    let mut names: Vec<Option<String>> = vec![None; n];
    let mut values: Vec<Option<f64>> = vec![None; n];
    let mut dropped = vec![false; n];
    if let Some(labels) = labels.as_ref().filter(|l| l.len() == n) {
        for (i, l) in labels.iter().enumerate() {
            let (name, number) = match l.text.rsplit_once(':') {
                Some((a, b)) => (Some(a.trim().to_string()), b.trim()),
                None => (None, l.text.as_str()),
            };
            names[i] = name;
            match parse_label_number(number) {
                Some((v, _)) => values[i] = Some(v),
                None => {
                    dropped[i] = true;
                    warnings.push(format!(
                        "pie label {:?} is not a number; slice dropped",
                        l.text
                    ));
                }
            }
        }
    } else if labels.is_some() {
        warnings.push("pie data labels do not match the slices; using slice angles".into());
    }
    let mut from_angles = false;
    for (i, slice) in slices.iter().enumerate() {
        if values[i].is_none() && !dropped[i] {
            let angle = slice_angle(&path_vertices(*slice)?)
                .ok_or_else(|| DeconstructError::MalformedSvg("pie slice path too short".into()))?;
            let share = 100.0 * angle / (2.0 * std::f64::consts::PI);
            values[i] = Some((share * 100.0).round() / 100.0);
            from_angles = true;
        }
        if names[i].is_none() {
            names[i] = legend.get(i).cloned();
        }
    }
    if from_angles {
        warnings.push("pie values recovered from slice angles as percentage shares".into());
    }
    if names.iter().any(Option::is_none) {
        warnings.push("some pie slices have no name; slices numbered".into());
    }
    let points: Vec<DataPoint> = (0..n)
        .filter_map(|i| {
            let v = values[i]?;
            let name = names[i]
                .clone()
                .unwrap_or_else(|| format!("Slice {}", i + 1));
            Some(DataPoint::new(name, v))
        })
        .collect();
    let names: Vec<String> = points.iter().map(|p| p.category.clone()).collect();
    let x_type = if looks_temporal(&names) {
        DataType::Temporal
    } else {
        DataType::Nominal
    };
    Ok(ChartSpec::new(
        ChartType::Pie,
        title,
        AxisSpec::new(x_title.unwrap_or_else(|| "Category".into()), x_type),
        AxisSpec::new(
            y_title.unwrap_or_else(|| "Value".into()),
            DataType::Quantitative,
        ),
        vec![Series::new(None, points)],
    ))
}
