use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Category of an extracted fact. Mirrors the statistic taxonomy used for
/// ranking, plus the intro and shape messages.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Category {
    IntroEncoding,
    ExtremaMinMax,
    LocalExtrema,
    GlobalExtrema,
    MaxDifference,
    ComparisonRelative,
    ComparisonAbsolute,
    OrderRank,
    TrendGlobal,
    TrendLocal,
    DerivedValue,
    SameValue,
    Shape,
}

impl Category {
    pub const ALL: [Category; 13] = [
        Category::IntroEncoding,
        Category::ExtremaMinMax,
        Category::LocalExtrema,
        Category::GlobalExtrema,
        Category::MaxDifference,
        Category::ComparisonRelative,
        Category::ComparisonAbsolute,
        Category::OrderRank,
        Category::TrendGlobal,
        Category::TrendLocal,
        Category::DerivedValue,
        Category::SameValue,
        Category::Shape,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Category::IntroEncoding => "IntroEncoding",
            Category::ExtremaMinMax => "ExtremaMinMax",
            Category::LocalExtrema => "LocalExtrema",
            Category::GlobalExtrema => "GlobalExtrema",
            Category::MaxDifference => "MaxDifference",
            Category::ComparisonRelative => "ComparisonRelative",
            Category::ComparisonAbsolute => "ComparisonAbsolute",
            Category::OrderRank => "OrderRank",
            Category::TrendGlobal => "TrendGlobal",
            Category::TrendLocal => "TrendLocal",
            Category::DerivedValue => "DerivedValue",
            Category::SameValue => "SameValue",
            Category::Shape => "Shape",
        }
    }

    /// Parameter names a message of this category may carry. Templates may
    /// only reference these (plus chart context slots).
    pub fn declared_params(self) -> &'static [&'static str] {
        match self {
            Category::IntroEncoding => &[
                "n_points",
                "n_series",
                "series_names",
                "title",
                "selection_ranges",
            ],
            Category::ExtremaMinMax => &[
                "max_category",
                "max_value",
                "min_category",
                "min_value",
                "max_share",
                "min_share",
            ],
            Category::LocalExtrema => &[
                "series",
                "max_category",
                "max_value",
                "min_category",
                "min_value",
                "mean",
            ],
            Category::GlobalExtrema => &[
                "extreme",
                "series",
                "category",
                "value",
                "max_series",
                "max_category",
                "max_value",
                "min_series",
                "min_category",
                "min_value",
            ],
            Category::MaxDifference => &[
                "difference",
                "max_category",
                "max_value",
                "min_category",
                "min_value",
                "series",
            ],
            Category::ComparisonRelative => &[
                "max_category",
                "max_value",
                "min_category",
                "min_value",
                "ratio",
                "top_category",
                "top_mean",
                "bottom_category",
                "bottom_mean",
                "n_series",
            ],
            Category::ComparisonAbsolute => &[
                "first_category",
                "first_value",
                "second_category",
                "second_value",
                "difference",
            ],
            Category::OrderRank => &[
                "ranked_categories",
                "ranked_values",
                "top_category",
                "top_value",
                "followers",
                "min_category",
                "min_value",
                "ranked_series",
                "ranked_means",
                "top_series",
                "top_mean",
                "bottom_series",
                "bottom_mean",
                "category",
                "series_values",
                "top_share",
            ],
            Category::TrendGlobal => &[
                "direction",
                "trend_verb",
                "trend_word",
                "first_category",
                "first_value",
                "last_category",
                "last_value",
                "overall_change",
                "percent_change",
                "n_points",
                "series",
                "series_trends",
            ],
            Category::TrendLocal => &[
                "direction",
                "verb",
                "start_category",
                "end_category",
                "start_value",
                "end_value",
                "percent_change",
                "change",
                "start_index",
                "end_index",
                "normalized_peak_change",
                "series",
                "chain",
            ],
            Category::DerivedValue => &["mean", "sum", "n_points"],
            Category::SameValue => &["groups", "group_values", "group_count"],
            Category::Shape => &["shape", "reversal_ratio"],
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Category {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Category::ALL
            .iter()
            .copied()
            .find(|c| c.name() == s)
            .ok_or_else(|| s.to_string())
    }
}

/// A typed message parameter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamValue {
    Flag(bool),
    Number(f64),
    Text(String),
    List(Vec<ParamValue>),
}

impl ParamValue {
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            ParamValue::Number(v) => Some(*v),
            _ => None,
        }
    }

    pub fn as_str(&self) -> Option<&str> {
        match self {
            ParamValue::Text(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_list(&self) -> Option<&[ParamValue]> {
        match self {
            ParamValue::List(items) => Some(items),
            _ => None,
        }
    }

    fn all_finite(&self) -> bool {
        match self {
            ParamValue::Number(v) => v.is_finite(),
            ParamValue::List(items) => items.iter().all(ParamValue::all_finite),
            _ => true,
        }
    }
}

impl From<f64> for ParamValue {
    fn from(v: f64) -> Self {
        ParamValue::Number(v)
    }
}

impl From<usize> for ParamValue {
    fn from(v: usize) -> Self {
        ParamValue::Number(v as f64)
    }
}

impl From<bool> for ParamValue {
    fn from(v: bool) -> Self {
        ParamValue::Flag(v)
    }
}

impl From<&str> for ParamValue {
    fn from(v: &str) -> Self {
        ParamValue::Text(v.to_string())
    }
}

impl From<String> for ParamValue {
    fn from(v: String) -> Self {
        ParamValue::Text(v)
    }
}

impl From<&String> for ParamValue {
    fn from(v: &String) -> Self {
        ParamValue::Text(v.clone())
    }
}

impl<T: Into<ParamValue>> From<Vec<T>> for ParamValue {
    fn from(v: Vec<T>) -> Self {
        ParamValue::List(v.into_iter().map(Into::into).collect())
    }
}

/// One category-tagged fact extracted from chart data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InsightMessage {
    pub category: Category,
    /// Selects a specialized template pool (`Category.variant`) when set.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variant: Option<String>,
    pub params: BTreeMap<String, ParamValue>,
    /// Filled in by the ranker; zero until then.
    #[serde(default)]
    pub salience: f64,
}

impl InsightMessage {
    pub fn new(category: Category) -> Self {
        Self {
            category,
            variant: None,
            params: BTreeMap::new(),
            salience: 0.0,
        }
    }

    pub fn with(mut self, key: &str, value: impl Into<ParamValue>) -> Self {
        self.params.insert(key.to_string(), value.into());
        self
    }

    pub fn with_variant(mut self, variant: &str) -> Self {
        self.variant = Some(variant.to_string());
        self
    }

    pub fn param(&self, key: &str) -> Option<&ParamValue> {
        self.params.get(key)
    }

    pub fn number(&self, key: &str) -> Option<f64> {
        self.param(key).and_then(ParamValue::as_f64)
    }

    pub fn text(&self, key: &str) -> Option<&str> {
        self.param(key).and_then(ParamValue::as_str)
    }

    /// True when every numeric parameter (including list members) is finite.
    pub fn params_finite(&self) -> bool {
        self.params.values().all(ParamValue::all_finite)
    }

    /// True when the message carries variant `v`.
    pub fn is_variant(&self, v: &str) -> bool {
        self.variant.as_deref() == Some(v)
    }
}
