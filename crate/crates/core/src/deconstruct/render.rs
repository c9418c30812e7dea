//! Renders a chart as SVG using highcharts markup conventions.
//!
//! The output is what [`super::deconstruct_svg`] expects to read: a
//! `highcharts-series-group`, per-series groups translated into the plot
//! area, optional `highcharts-data-labels` with text-outline copies, axis
//! labels, grid lines and a legend. Used to synthesize test corpora.

use std::fmt::Write;

use crate::model::{ChartSpec, ChartType};

#[derive(Debug, Clone, PartialEq)]
pub struct RenderOptions {
    pub data_labels: bool,
    pub width: f64,
    pub height: f64,
}

impl Default for RenderOptions {
    fn default() -> Self {
        Self {
            data_labels: true,
            width: 640.0,
            height: 400.0,
        }
    }
}

const LEFT: f64 = 70.0;
const TOP: f64 = 50.0;
const RIGHT: f64 = 20.0;
const BOTTOM: f64 = 70.0;

fn esc(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Ticks covering `[lo, hi]` (and zero) with a 1/2/5 step; returns
/// `(first, step, count, decimals)`.
pub fn nice_ticks(lo: f64, hi: f64) -> (f64, f64, usize, usize) {
    let (lo, hi) = (lo.min(0.0), hi.max(0.0));
    let raw = if hi > lo { (hi - lo) / 5.0 } else { 1.0 };
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0]
        .iter()
        .map(|m| m * mag)
        .find(|s| *s >= raw * (1.0 - 1e-12))
        .unwrap_or(10.0 * mag);
    let first = (lo / step + 1e-9).floor() * step;
    let last = (hi / step - 1e-9).ceil() * step;
    let count = ((last - first) / step).round() as usize + 1;
    let decimals = if step >= 1.0 {
        0
    } else {
        (-step.log10().floor()) as usize
    };
    (first, step, count.max(2), decimals)
}

pub fn render_svg(spec: &ChartSpec, opts: &RenderOptions) -> String {
    let mut out = String::new();
    let (w, h) = (opts.width, opts.height);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" class="highcharts-root" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    );
    let _ = writeln!(
        out,
        r#"<text class="highcharts-title" x="{}" y="24" text-anchor="middle"><tspan>{}</tspan></text>"#,
        w / 2.0,
        esc(&spec.title)
    );
    if spec.chart_type == ChartType::Pie {
        render_pie(&mut out, spec, opts);
    } else {
        render_cartesian(&mut out, spec, opts);
    }
    if spec.chart_type.is_multi_series() {
        out.push_str(r#"<g class="highcharts-legend">"#);
        out.push('\n');
        for (i, s) in spec.series.iter().enumerate() {
            let _ = writeln!(
                out,
                r#"<g class="highcharts-legend-item highcharts-series-{i}" transform="translate({},{})"><text x="20" y="4">{}</text></g>"#,
                LEFT + 120.0 * i as f64,
                h - 16.0,
                esc(&s.display_name(i))
            );
        }
        out.push_str("</g>\n");
    }
    out.push_str("</svg>\n");
    out
}

fn series_class(ct: ChartType) -> &'static str {
    match ct {
        ChartType::Line | ChartType::MultiLine => "highcharts-line-series",
        ChartType::Pie => "highcharts-pie-series",
        _ => "highcharts-column-series",
    }
}

fn data_label(out: &mut String, x: f64, y: f64, text: &str) {
    let t = esc(text);
    let _ = writeln!(
        out,
        r#"<g class="highcharts-label highcharts-data-label" transform="translate({x:.3},{y:.3})"><text x="0" y="0" text-anchor="middle"><tspan class="highcharts-text-outline" stroke-width="2">{t}</tspan><tspan x="0" dy="0">{t}</tspan></text></g>"#
    );
}

fn render_cartesian(out: &mut String, spec: &ChartSpec, opts: &RenderOptions) {
    let plot_w = opts.width - LEFT - RIGHT;
    let plot_h = opts.height - TOP - BOTTOM;
    let stacked = spec.chart_type == ChartType::StackedBar;
    let n = spec.point_count();

    let (lo, hi) = if stacked {
        let totals: Vec<f64> = (0..n)
            .map(|i| spec.series.iter().map(|s| s.points[i].value.abs()).sum())
            .collect();
        (0.0, totals.iter().copied().fold(0.0, f64::max))
    } else {
        let all = spec
            .series
            .iter()
            .flat_map(|s| s.points.iter().map(|p| p.value));
        all.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| {
            (a.min(v), b.max(v))
        })
    };
    let (first, step, count, decimals) = nice_ticks(lo, hi);
    let top_value = first + step * (count - 1) as f64;
    // plot-local y of a value
    let py = |v: f64| plot_h - (v - first) / (top_value - first) * plot_h;

    out.push_str(r#"<g class="highcharts-grid highcharts-yaxis-grid">"#);
    out.push('\n');
    for k in 0..count {
        let y = TOP + py(first + step * k as f64);
        let _ = writeln!(
            out,
            r##"<path class="highcharts-grid-line" d="M {LEFT} {y:.3} L {} {y:.3}" stroke="#e6e6e6"/>"##,
            LEFT + plot_w
        );
    }
    out.push_str("</g>\n");

    let _ = writeln!(
        out,
        r#"<g class="highcharts-axis highcharts-xaxis"><text class="highcharts-axis-title" x="{}" y="{}" text-anchor="middle">{}</text></g>"#,
        LEFT + plot_w / 2.0,
        opts.height - 34.0,
        esc(&spec.x_axis.label)
    );
    let _ = writeln!(
        out,
        r#"<g class="highcharts-axis highcharts-yaxis"><text class="highcharts-axis-title" x="18" y="{0}" transform="rotate(270 18 {0})" text-anchor="middle">{1}</text></g>"#,
        TOP + plot_h / 2.0,
        esc(&spec.y_axis.label)
    );

    let slot = plot_w / n.max(1) as f64;
    let is_line = matches!(spec.chart_type, ChartType::Line | ChartType::MultiLine);
    let k = spec.series.len();
    let bar_w = match spec.chart_type {
        ChartType::GroupedBar => slot * 0.7 / k as f64,
        _ => slot * 0.6,
    };
    let cx = |i: usize| slot * (i as f64 + 0.5);
    let bar_x = |si: usize, i: usize| match spec.chart_type {
        ChartType::GroupedBar => cx(i) - slot * 0.35 + bar_w * si as f64,
        _ => cx(i) - bar_w / 2.0,
    };

    let mut stack_base = vec![0.0; n];
    let mut labels = String::new();
    out.push_str(r#"<g class="highcharts-series-group">"#);
    out.push('\n');
    for (si, s) in spec.series.iter().enumerate() {
        let class = series_class(spec.chart_type);
        let _ = writeln!(
            out,
            r#"<g class="highcharts-series highcharts-series-{si} {class} highcharts-tracker" transform="translate({LEFT},{TOP})">"#
        );
        let mut label_pos = Vec::with_capacity(n);
        if is_line {
            let mut d = String::new();
            for (i, p) in s.points.iter().enumerate() {
                let _ = write!(
                    d,
                    "{} {:.3} {:.3} ",
                    if i == 0 { "M" } else { "L" },
                    cx(i),
                    py(p.value)
                );
                label_pos.push((cx(i), py(p.value) - 8.0));
            }
            let _ = writeln!(
                out,
                r#"<path class="highcharts-graph" fill="none" stroke-width="2" d="{}"/>"#,
                d.trim_end()
            );
        } else {
            for (i, p) in s.points.iter().enumerate() {
                let (v0, v1) = if stacked {
                    let b = stack_base[i];
                    stack_base[i] += p.value.abs();
                    (b, b + p.value.abs())
                } else {
                    (first.max(0.0).min(top_value), p.value)
                };
                let (y0, y1) = (py(v0), py(v1));
                let (top, height) = (y0.min(y1), (y0 - y1).abs());
                let x = bar_x(si, i);
                let _ = writeln!(
                    out,
                    r#"<rect class="highcharts-point" x="{x:.3}" y="{top:.3}" width="{bar_w:.3}" height="{height:.3}"/>"#
                );
                label_pos.push((
                    x + bar_w / 2.0,
                    if stacked {
                        top + height / 2.0
                    } else {
                        top - 6.0
                    },
                ));
            }
        }
        out.push_str("</g>\n");
        if is_line {
            let _ = writeln!(
                out,
                r#"<g class="highcharts-markers highcharts-series-{si} {class}" transform="translate({LEFT},{TOP})">"#
            );
            for (i, p) in s.points.iter().enumerate() {
                let _ = writeln!(
                    out,
                    r#"<circle class="highcharts-point" cx="{:.3}" cy="{:.3}" r="3"/>"#,
                    cx(i),
                    py(p.value)
                );
            }
            out.push_str("</g>\n");
        }
        if opts.data_labels {
            let _ = writeln!(
                labels,
                r#"<g class="highcharts-data-labels highcharts-series-{si} {class}" transform="translate({LEFT},{TOP})">"#
            );
            for (p, (x, y)) in s.points.iter().zip(label_pos) {
                data_label(&mut labels, x, y, &p.value.to_string());
            }
            labels.push_str("</g>\n");
        }
    }
    out.push_str("</g>\n");
    out.push_str(&labels);

    out.push_str(r#"<g class="highcharts-axis-labels highcharts-xaxis-labels">"#);
    out.push('\n');
    for (i, c) in spec.categories().iter().enumerate() {
        let _ = writeln!(
            out,
            r#"<text x="{:.3}" y="{}" text-anchor="middle">{}</text>"#,
            LEFT + cx(i),
            TOP + plot_h + 20.0,
            esc(c)
        );
    }
    out.push_str("</g>\n");
    out.push_str(r#"<g class="highcharts-axis-labels highcharts-yaxis-labels">"#);
    out.push('\n');
    for k in 0..count {
        let v = first + step * k as f64;
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{:.3}" text-anchor="end">{:.*}</text>"#,
            LEFT - 8.0,
            TOP + py(v) + 4.0,
            decimals,
            v
        );
    }
    out.push_str("</g>\n");
}

fn render_pie(out: &mut String, spec: &ChartSpec, opts: &RenderOptions) {
    let s = &spec.series[0];
    let total: f64 = s.points.iter().map(|p| p.value.abs()).sum();
    let (cx, cy) = (opts.width / 2.0, opts.height / 2.0 + 10.0);
    let r = (opts.width.min(opts.height) / 2.0 - 60.0).max(20.0);
    let class = series_class(ChartType::Pie);
    let mut labels = String::new();
    if opts.data_labels {
        let _ = writeln!(
            labels,
            r#"<g class="highcharts-data-labels highcharts-series-0 {class}">"#
        );
    }
    out.push_str(r#"<g class="highcharts-series-group">"#);
    out.push('\n');
    let _ = writeln!(
        out,
        r#"<g class="highcharts-series highcharts-series-0 {class} highcharts-tracker">"#
    );
    let mut angle = -std::f64::consts::FRAC_PI_2;
    for (i, p) in s.points.iter().enumerate() {
        let sweep = if total > 0.0 {
            p.value.abs() / total * std::f64::consts::TAU
        } else {
            0.0
        };
        // arcs are split so no single segment exceeds a half turn
        let pieces = (sweep / std::f64::consts::PI).ceil().max(1.0) as usize;
        let mut d = format!("M {:.4} {:.4}", cx + r * angle.cos(), cy + r * angle.sin());
        for k in 1..=pieces {
            let a = angle + sweep * k as f64 / pieces as f64;
            let _ = write!(
                d,
                " A {r} {r} 0 0 1 {:.4} {:.4}",
                cx + r * a.cos(),
                cy + r * a.sin()
            );
        }
        let _ = write!(d, " L {cx} {cy} Z");
        let _ = writeln!(
            out,
            r#"<path class="highcharts-point highcharts-color-{i}" d="{d}"/>"#
        );
        if opts.data_labels {
            let mid = angle + sweep / 2.0;
            data_label(
                &mut labels,
                cx + (r + 24.0) * mid.cos(),
                cy + (r + 24.0) * mid.sin(),
                &format!("{}: {}", p.category, p.value),
            );
        }
        angle += sweep;
    }
    out.push_str("</g>\n</g>\n");
    if opts.data_labels {
        labels.push_str("</g>\n");
        out.push_str(&labels);
    }
    out.push_str(r#"<g class="highcharts-legend">"#);
    out.push('\n');
    for (i, p) in s.points.iter().enumerate() {
        let _ = writeln!(
            out,
            r#"<g class="highcharts-legend-item highcharts-point-{i}"><text x="{}" y="{}">{}</text></g>"#,
            LEFT + 110.0 * (i % 5) as f64,
            opts.height - 30.0 + 14.0 * (i / 5) as f64,
            esc(&p.category)
        );
    }
    out.push_str("</g>\n");
}
