//! Linear axis scales fitted from tick labels, and value recovery from mark
//! geometry.

use serde::{Deserialize, Serialize};

use crate::error::DeconstructError;

/// Largest allowed fit residual, as a fraction of the tick value range.
pub const MAX_RESIDUAL: f64 = 0.005;
/// How far (fraction of range) a mark may fall outside the ticks.
pub const RANGE_TOLERANCE: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Orientation {
    X,
    Y,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct BBox {
    pub x: f64,
    pub y: f64,
    pub width: f64,
    pub height: f64,
}

impl BBox {
    pub fn new(x: f64, y: f64, width: f64, height: f64) -> Self {
        Self {
            x,
            y,
            width,
            height,
        }
    }

    pub fn from_points(points: &[(f64, f64)]) -> Option<Self> {
        let (first, rest) = points.split_first()?;
        let (mut x0, mut y0, mut x1, mut y1) = (first.0, first.1, first.0, first.1);
        for &(x, y) in rest {
            x0 = x0.min(x);
            y0 = y0.min(y);
            x1 = x1.max(x);
            y1 = y1.max(y);
        }
        Some(Self::new(x0, y0, x1 - x0, y1 - y0))
    }

    pub fn center(&self) -> (f64, f64) {
        (self.x + self.width / 2.0, self.y + self.height / 2.0)
    }

    /// (low, high) pixel extent along an axis.
    pub fn span(&self, o: Orientation) -> (f64, f64) {
        match o {
            Orientation::X => (self.x, self.x + self.width),
            Orientation::Y => (self.y, self.y + self.height),
        }
    }

    pub fn mid(&self, o: Orientation) -> f64 {
        let (lo, hi) = self.span(o);
        (lo + hi) / 2.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MarkKind {
    Bar,
    /// One segment of a stacked bar: its value is its own extent.
    StackedBar,
    LineVertex,
    PieSlice,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarkRecord {
    pub kind: MarkKind,
    pub bbox: BBox,
    pub series: usize,
    pub category: usize,
}

/// A least-squares linear map from pixel position to data value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxisScale {
    pub orientation: Orientation,
    pub tick_positions: Vec<f64>,
    pub tick_values: Vec<f64>,
    pub value_per_pixel: f64,
    /// Value at pixel 0.
    pub intercept: f64,
    /// Decimal places shown on the tick labels.
    pub decimals: usize,
}

impl AxisScale {
    pub fn fit(
        orientation: Orientation,
        positions: &[f64],
        values: &[f64],
        decimals: usize,
    ) -> Result<Self, DeconstructError> {
        if positions.len() != values.len() {
            return Err(DeconstructError::UnreadableAxis(
                "tick positions and labels differ in count".into(),
            ));
        }
        if positions.len() < 2 {
            return Err(DeconstructError::UnreadableAxis(format!(
                "need at least 2 numeric ticks, found {}",
                positions.len()
            )));
        }
        let mut ticks: Vec<(f64, f64)> = positions
            .iter()
            .copied()
            .zip(values.iter().copied())
            .collect();
        ticks.sort_by(|a, b| a.0.total_cmp(&b.0));
        let increasing = ticks.windows(2).all(|w| w[1].1 > w[0].1 && w[1].0 > w[0].0);
        let decreasing = ticks.windows(2).all(|w| w[1].1 < w[0].1 && w[1].0 > w[0].0);
        if !increasing && !decreasing {
            return Err(DeconstructError::UnreadableAxis(
                "tick values are not strictly monotone".into(),
            ));
        }

        let n = ticks.len() as f64;
        let mx = ticks.iter().map(|t| t.0).sum::<f64>() / n;
        let my = ticks.iter().map(|t| t.1).sum::<f64>() / n;
        let sxy: f64 = ticks.iter().map(|t| (t.0 - mx) * (t.1 - my)).sum();
        let sxx: f64 = ticks.iter().map(|t| (t.0 - mx).powi(2)).sum();
        let slope = sxy / sxx;
        let intercept = my - slope * mx;

        let lo = ticks.iter().map(|t| t.1).fold(f64::INFINITY, f64::min);
        let hi = ticks.iter().map(|t| t.1).fold(f64::NEG_INFINITY, f64::max);
        let worst = ticks
            .iter()
            .map(|t| (slope * t.0 + intercept - t.1).abs())
            .fold(0.0, f64::max);
        if worst > MAX_RESIDUAL * (hi - lo) {
            return Err(DeconstructError::UnreadableAxis(format!(
                "ticks are not linear (residual {worst:.4} exceeds {:.4})",
                MAX_RESIDUAL * (hi - lo)
            )));
        }
        Ok(Self {
            orientation,
            tick_positions: ticks.iter().map(|t| t.0).collect(),
            tick_values: ticks.iter().map(|t| t.1).collect(),
            value_per_pixel: slope,
            intercept,
            decimals,
        })
    }

    pub fn value_at(&self, pixel: f64) -> f64 {
        self.value_per_pixel * pixel + self.intercept
    }

    pub fn pixel_of(&self, value: f64) -> f64 {
        (value - self.intercept) / self.value_per_pixel
    }

    /// (min, max) of the tick values.
    pub fn value_range(&self) -> (f64, f64) {
        let lo = self
            .tick_values
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        let hi = self
            .tick_values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max);
        (lo, hi)
    }

    /// Where bars grow from: zero, clamped into the tick range.
    pub fn baseline_value(&self) -> f64 {
        let (lo, hi) = self.value_range();
        0f64.clamp(lo, hi)
    }

    pub fn round(&self, value: f64) -> f64 {
        let f = 10f64.powi(self.decimals as i32);
        let r = (value * f).round() / f;
        if r == 0.0 {
            0.0
        } else {
            r
        }
    }

    fn check(&self, index: usize, value: f64) -> Result<(), DeconstructError> {
        let (lo, hi) = self.value_range();
        let slack = RANGE_TOLERANCE * (hi - lo);
        if value < lo - slack || value > hi + slack {
            return Err(DeconstructError::ScaleMismatch {
                index,
                value,
                min: lo,
                max: hi,
            });
        }
        Ok(())
    }
}

/// Data values encoded by marks, in mark order.
pub fn recover_from_marks(
    marks: &[MarkRecord],
    scale: &AxisScale,
) -> Result<Vec<f64>, DeconstructError> {
    let o = scale.orientation;
    let base_px = scale.pixel_of(scale.baseline_value());
    marks
        .iter()
        .enumerate()
        .map(|(i, m)| {
            let (lo, hi) = m.bbox.span(o);
            let value = match m.kind {
                MarkKind::Bar => {
                    // the edge away from the baseline carries the value
                    let far = if (lo - base_px).abs() >= (hi - base_px).abs() {
                        lo
                    } else {
                        hi
                    };
                    let v = scale.value_at(far);
                    scale.check(i, v)?;
                    v
                }
                MarkKind::StackedBar => {
                    let (a, b) = (scale.value_at(lo), scale.value_at(hi));
                    scale.check(i, a)?;
                    scale.check(i, b)?;
                    (a - b).abs()
                }
                MarkKind::LineVertex => {
                    let v = scale.value_at(m.bbox.mid(o));
                    scale.check(i, v)?;
                    v
                }
                MarkKind::PieSlice => {
                    return Err(DeconstructError::UnsupportedMark(
                        "pie slices are not read against an axis".into(),
                    ))
                }
            };
            Ok(scale.round(value))
        })
        .collect()
}
