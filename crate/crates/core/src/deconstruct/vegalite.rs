//! Vega-Lite-style declarative specs: ingestion and emission.
//!
//! Only the subset a deconstructed chart needs is understood: a `bar`,
//! `line` or `arc` mark, inline `data.values`, and `x`/`y`/`color`
//! (`theta`/`color` for arcs) encodings. Bars with a `color` channel are
//! grouped unless the value channel asks for `"stack": "zero"`.

use serde_json::{json, Map, Value};

use crate::error::DeconstructError;
use crate::model::{AxisSpec, ChartSpec, ChartType, DataPoint, DataType, Series};

fn malformed(msg: impl Into<String>) -> DeconstructError {
    DeconstructError::MalformedSpec(msg.into())
}

fn data_type(s: &str) -> Result<DataType, DeconstructError> {
    match s {
        "nominal" => Ok(DataType::Nominal),
        "ordinal" => Ok(DataType::Ordinal),
        "temporal" => Ok(DataType::Temporal),
        "quantitative" => Ok(DataType::Quantitative),
        other => Err(malformed(format!("unknown encoding type {other:?}"))),
    }
}

fn type_name(t: DataType) -> &'static str {
    match t {
        DataType::Nominal => "nominal",
        DataType::Ordinal => "ordinal",
        DataType::Temporal => "temporal",
        DataType::Quantitative => "quantitative",
    }
}

struct Channel {
    field: String,
    data_type: DataType,
    stack: Option<Value>,
}

fn channel(enc: &Map<String, Value>, name: &str) -> Result<Option<Channel>, DeconstructError> {
    let Some(c) = enc.get(name) else {
        return Ok(None);
    };
    let field = c
        .get("field")
        .and_then(Value::as_str)
        .ok_or_else(|| malformed(format!("encoding.{name} has no field")))?
        .to_string();
    let data_type = match c.get("type").and_then(Value::as_str) {
        Some(t) => data_type(t)?,
        None => DataType::Nominal,
    };
    Ok(Some(Channel {
        field,
        data_type,
        stack: c.get("stack").cloned(),
    }))
}

/// Category text for a data cell: strings verbatim, integral numbers without
/// a fraction.
fn cell_text(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(s.clone()),
        Value::Number(n) => Some(match n.as_f64() {
            Some(f) if f.fract() == 0.0 && f.abs() < 1e15 => format!("{}", f as i64),
            _ => n.to_string(),
        }),
        Value::Bool(b) => Some(b.to_string()),
        _ => None,
    }
}

fn cell_number(v: &Value) -> Option<f64> {
    match v {
        Value::Number(n) => n.as_f64(),
        Value::String(s) => s.trim().parse().ok(),
        _ => None,
    }
}

/// Builds series from rows, keeping first-appearance order for both
/// categories and series keys.
fn collect(
    rows: &[Value],
    cat_field: &str,
    val_field: &str,
    series_field: Option<&str>,
) -> Result<Vec<Series>, DeconstructError> {
    let mut keys: Vec<String> = Vec::new();
    let mut points: Vec<Vec<DataPoint>> = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        let obj = row
            .as_object()
            .ok_or_else(|| malformed(format!("data.values[{i}] is not an object")))?;
        let category = obj.get(cat_field).and_then(cell_text).ok_or_else(|| {
            DeconstructError::MissingData(format!("data.values[{i}] lacks {cat_field:?}"))
        })?;
        let value = obj.get(val_field).and_then(cell_number).ok_or_else(|| {
            DeconstructError::MissingData(format!("data.values[{i}] lacks a numeric {val_field:?}"))
        })?;
        let key = match series_field {
            Some(f) => obj.get(f).and_then(cell_text).ok_or_else(|| {
                DeconstructError::MissingData(format!("data.values[{i}] lacks {f:?}"))
            })?,
            None => String::new(),
        };
        let slot = match keys.iter().position(|k| *k == key) {
            Some(s) => s,
            None => {
                keys.push(key);
                points.push(Vec::new());
                keys.len() - 1
            }
        };
        points[slot].push(DataPoint::new(category, value));
    }
    Ok(keys
        .into_iter()
        .zip(points)
        .map(|(k, p)| Series::new(series_field.map(|_| k), p))
        .collect())
}

pub fn ingest_vegalite(spec_text: &str) -> Result<ChartSpec, DeconstructError> {
    let root: Value = serde_json::from_str(spec_text).map_err(|e| malformed(e.to_string()))?;
    let mark = match root.get("mark") {
        Some(Value::String(s)) => s.as_str(),
        Some(Value::Object(o)) => o
            .get("type")
            .and_then(Value::as_str)
            .ok_or_else(|| malformed("mark object has no type"))?,
        _ => return Err(malformed("spec has no mark")),
    };
    let rows = root
        .pointer("/data/values")
        .and_then(Value::as_array)
        .ok_or_else(|| DeconstructError::MissingData("spec has no inline data.values".into()))?;
    if rows.is_empty() {
        return Err(DeconstructError::MissingData("data.values is empty".into()));
    }
    let enc = root
        .get("encoding")
        .and_then(Value::as_object)
        .ok_or_else(|| malformed("spec has no encoding"))?;
    let title = match root.get("title") {
        Some(Value::String(s)) => s.clone(),
        Some(Value::Object(o)) => o
            .get("text")
            .and_then(Value::as_str)
            .unwrap_or("")
            .to_string(),
        _ => String::new(),
    };

    let spec = match mark {
        "arc" => {
            let theta = channel(enc, "theta")?
                .ok_or_else(|| malformed("arc mark needs a theta encoding"))?;
            let color = channel(enc, "color")?
                .ok_or_else(|| malformed("arc mark needs a color encoding"))?;
            let series = collect(rows, &color.field, &theta.field, None)?;
            ChartSpec::new(
                ChartType::Pie,
                title,
                AxisSpec::new(color.field, color.data_type),
                AxisSpec::new(theta.field, theta.data_type),
                series,
            )
        }
        "bar" | "line" => {
            let x = channel(enc, "x")?.ok_or_else(|| malformed("encoding has no x channel"))?;
            let y = channel(enc, "y")?.ok_or_else(|| malformed("encoding has no y channel"))?;
            // horizontal bars put the measure on x
            let (cat, val) =
                if x.data_type == DataType::Quantitative && y.data_type != DataType::Quantitative {
                    (y, x)
                } else {
                    (x, y)
                };
            let group = match (
                channel(enc, "color")?,
                channel(enc, "column")?,
                channel(enc, "xOffset")?,
            ) {
                (Some(c), _, _) => Some(c),
                (None, Some(c), _) => Some(c),
                (None, None, Some(c)) => Some(c),
                _ => None,
            };
            let series = collect(
                rows,
                &cat.field,
                &val.field,
                group.as_ref().map(|g| g.field.as_str()),
            )?;
            let stacked = matches!(
                &val.stack,
                Some(Value::String(s)) if s == "zero" || s == "normalize"
            ) || matches!(&val.stack, Some(Value::Bool(true)));
            let chart_type = match (mark, group.is_some() && series.len() > 1, stacked) {
                ("line", false, _) => ChartType::Line,
                ("line", true, _) => ChartType::MultiLine,
                (_, false, _) => ChartType::Bar,
                (_, true, true) => ChartType::StackedBar,
                (_, true, false) => ChartType::GroupedBar,
            };
            let series = if chart_type.is_multi_series() {
                series
            } else {
                series
                    .into_iter()
                    .map(|s| Series::new(None, s.points))
                    .collect()
            };
            ChartSpec::new(
                chart_type,
                title,
                AxisSpec::new(cat.field, cat.data_type),
                AxisSpec::new(val.field, val.data_type),
                series,
            )
        }
        other => {
            return Err(DeconstructError::UnsupportedMark(format!(
                "mark {other:?} is not a bar, line or arc"
            )))
        }
    };
    Ok(spec)
}

/// Emits the Vega-Lite form of a chart. Multi-series charts carry the series
/// name in a `series` field (or one named after the legend when that would
/// clash with an axis field).
pub fn to_vegalite(spec: &ChartSpec) -> Value {
    let cat = spec.x_axis.label.as_str();
    let val = spec.y_axis.label.as_str();
    let mut series_field = "series".to_string();
    while series_field == cat || series_field == val {
        series_field.insert(0, '_');
    }
    let multi = spec.chart_type.is_multi_series();
    let mut rows = Vec::new();
    for (i, s) in spec.series.iter().enumerate() {
        for p in &s.points {
            let mut row = Map::new();
            row.insert(cat.to_string(), Value::String(p.category.clone()));
            row.insert(val.to_string(), json!(p.value));
            if multi {
                row.insert(series_field.clone(), Value::String(s.display_name(i)));
            }
            rows.push(Value::Object(row));
        }
    }
    let x = json!({"field": cat, "type": type_name(spec.x_axis.data_type)});
    let mut y = json!({"field": val, "type": type_name(spec.y_axis.data_type)});
    let color = json!({"field": series_field, "type": "nominal"});
    let (mark, encoding) = match spec.chart_type {
        ChartType::Pie => (
            "arc",
            json!({
                "theta": {"field": val, "type": type_name(spec.y_axis.data_type)},
                "color": {"field": cat, "type": type_name(spec.x_axis.data_type)},
            }),
        ),
        ChartType::Bar => ("bar", json!({"x": x, "y": y})),
        ChartType::Line => ("line", json!({"x": x, "y": y})),
        ChartType::MultiLine => ("line", json!({"x": x, "y": y, "color": color})),
        ChartType::GroupedBar => (
            "bar",
            json!({"x": x, "y": y, "color": color, "xOffset": color}),
        ),
        ChartType::StackedBar => {
            y["stack"] = json!("zero");
            ("bar", json!({"x": x, "y": y, "color": color}))
        }
    };
    json!({
        "$schema": "https://vega.github.io/schema/vega-lite/v5.json",
        "title": spec.title,
        "mark": mark,
        "data": {"values": rows},
        "encoding": encoding,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIG3: &str = r#"{
        "mark": "bar",
        "data": {"values": [
            {"Country": "USA", "Number of Fighter Jet": 2085},
            {"Country": "Russia", "Number of Fighter Jet": 789},
            {"Country": "China", "Number of Fighter Jet": 1200}
        ]},
        "encoding": {
            "x": {"field": "Country", "type": "nominal"},
            "y": {"field": "Number of Fighter Jet", "type": "quantitative"}
        }
    }"#;

    #[test]
    fn fighter_jet_bar() {
        let c = ingest_vegalite(FIG3).unwrap();
        assert_eq!(c.chart_type, ChartType::Bar);
        assert_eq!(c.x_axis, AxisSpec::new("Country", DataType::Nominal));
        assert_eq!(
            c.y_axis,
            AxisSpec::new("Number of Fighter Jet", DataType::Quantitative)
        );
        assert_eq!(c.series[0].values(), vec![2085.0, 789.0, 1200.0]);
    }

    #[test]
    fn colored_line_is_multi_line() {
        let mut rows = Vec::new();
        for s in ["a", "b", "c"] {
            for x in 0..4 {
                rows.push(json!({"t": x, "v": x * 2, "s": s}));
            }
        }
        let spec = json!({
            "mark": {"type": "line"},
            "data": {"values": rows},
            "encoding": {"x": {"field": "t", "type": "ordinal"}, "y": {"field": "v", "type": "quantitative"}, "color": {"field": "s", "type": "nominal"}}
        });
        let c = ingest_vegalite(&spec.to_string()).unwrap();
        assert_eq!(c.chart_type, ChartType::MultiLine);
        assert_eq!(c.series.len(), 3);
        assert_eq!(c.series[1].name.as_deref(), Some("b"));
        assert_eq!(c.categories(), vec!["0", "1", "2", "3"]);
    }

    #[test]
    fn point_mark_unsupported() {
        let spec = FIG3.replace("\"bar\"", "\"point\"");
        assert!(matches!(
            ingest_vegalite(&spec),
            Err(DeconstructError::UnsupportedMark(_))
        ));
    }

    #[test]
    fn missing_values() {
        let spec = r#"{"mark":"bar","data":{"url":"x.csv"},"encoding":{}}"#;
        assert!(matches!(
            ingest_vegalite(spec),
            Err(DeconstructError::MissingData(_))
        ));
    }

    #[test]
    fn horizontal_bar_swaps_axes() {
        let spec = FIG3
            .replace(
                "\"x\": {\"field\": \"Country\"",
                "\"y\": {\"field\": \"Country\"",
            )
            .replace("\"y\": {\"field\": \"Number", "\"x\": {\"field\": \"Number");
        let c = ingest_vegalite(&spec).unwrap();
        assert_eq!(c.x_axis.label, "Country");
        assert_eq!(c.y_axis.label, "Number of Fighter Jet");
    }
}
