//! Ranking and document planning.
//!
//! Messages are weighted by how often their statistic shows up in
//! human-written summaries of the same chart type, sorted, fused into
//! sentences and cut to the requested length.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::PlanError;
use crate::insights::{Category, InsightMessage};
use crate::model::ChartType;

type Weight = (Category, f64);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum LengthLevel {
    Short,
    #[default]
    Moderate,
    Long,
}

impl LengthLevel {
    pub const ALL: [LengthLevel; 3] =
        [LengthLevel::Short, LengthLevel::Moderate, LengthLevel::Long];

    /// Sentences allowed after the intro.
    pub fn body_sentences(self) -> usize {
        match self {
            LengthLevel::Short => 2,
            LengthLevel::Moderate => 4,
            LengthLevel::Long => 9,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            LengthLevel::Short => "short",
            LengthLevel::Moderate => "moderate",
            LengthLevel::Long => "long",
        }
    }
}

impl fmt::Display for LengthLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for LengthLevel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "short" | "1" => Ok(LengthLevel::Short),
            "moderate" | "2" => Ok(LengthLevel::Moderate),
            "long" | "3" => Ok(LengthLevel::Long),
            other => Err(format!("unknown length level {other:?}")),
        }
    }
}

/// Occurrence ratios per chart type. Categories without an entry fall back
/// to the chart type's residual ("others") weight.
#[derive(Debug, Clone)]
pub struct SalienceTable {
    listed: HashMap<(ChartType, Category), f64>,
    others: HashMap<ChartType, f64>,
}

impl Default for SalienceTable {
    fn default() -> Self {
        Self::standard()
    }
}

impl SalienceTable {
    pub fn standard() -> Self {
        use Category::*;
        let single_bar: &[(Category, f64)] = &[
            (ExtremaMinMax, 0.57),
            (ComparisonRelative, 0.12),
            // difference between the extremes is read as a relative comparison
            (MaxDifference, 0.12),
            (OrderRank, 0.08),
            (TrendGlobal, 0.07),
            (DerivedValue, 0.06),
            (ComparisonAbsolute, 0.02),
        ];
        let single_line: &[(Category, f64)] = &[
            (TrendGlobal, 0.62),
            (TrendLocal, 0.62),
            (Shape, 0.62),
            (ExtremaMinMax, 0.22),
            (ComparisonRelative, 0.10),
            (ComparisonAbsolute, 0.10),
            (MaxDifference, 0.04),
        ];
        let grouped_bar: &[(Category, f64)] = &[
            (GlobalExtrema, 0.36),
            (TrendGlobal, 0.18),
            (ComparisonRelative, 0.13),
            (MaxDifference, 0.13),
            (TrendLocal, 0.07),
            (OrderRank, 0.04),
            (LocalExtrema, 0.02),
        ];
        let multi_line: &[(Category, f64)] = &[
            (TrendGlobal, 0.48),
            (OrderRank, 0.24),
            (LocalExtrema, 0.13),
            (GlobalExtrema, 0.05),
            (ComparisonRelative, 0.02),
            (ComparisonAbsolute, 0.02),
        ];

        let mut listed = HashMap::new();
        let mut others = HashMap::new();
        let columns: [(ChartType, &[Weight], f64); 6] = [
            (ChartType::Bar, single_bar, 0.04),
            (ChartType::Pie, single_bar, 0.04),
            (ChartType::Line, single_line, 0.02),
            (ChartType::GroupedBar, grouped_bar, 0.07),
            (ChartType::StackedBar, grouped_bar, 0.07),
            (ChartType::MultiLine, multi_line, 0.08),
        ];
        for (chart_type, rows, residual) in columns {
            listed.insert((chart_type, IntroEncoding), 1.0);
            for (cat, w) in rows {
                listed.insert((chart_type, *cat), *w);
            }
            others.insert(chart_type, residual);
        }
        Self { listed, others }
    }

    pub fn is_listed(&self, chart_type: ChartType, category: Category) -> bool {
        self.listed.contains_key(&(chart_type, category))
    }

    pub fn weight(&self, chart_type: ChartType, category: Category) -> f64 {
        self.listed
            .get(&(chart_type, category))
            .or_else(|| self.others.get(&chart_type))
            .copied()
            .unwrap_or(0.0)
    }

    /// Listed categories for a chart type, heaviest first (intro excluded).
    pub fn listed_order(&self, chart_type: ChartType) -> Vec<(Category, f64)> {
        let mut rows: Vec<(Category, f64)> = Category::ALL
            .iter()
            .filter(|c| **c != Category::IntroEncoding)
            .filter_map(|c| self.listed.get(&(chart_type, *c)).map(|w| (*c, *w)))
            .collect();
        rows.sort_by(|a, b| b.1.total_cmp(&a.1));
        rows
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SentenceKind {
    Intro,
    Single,
    /// Global maximum and minimum in one sentence.
    ExtremaPair,
    /// One or more local trend segments joined with connectives.
    TrendChain,
    /// Cross-series trend statement absorbing the per-series trends.
    TrendSummary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlannedSentence {
    pub kind: SentenceKind,
    pub messages: Vec<InsightMessage>,
}

impl PlannedSentence {
    pub fn lead(&self) -> &InsightMessage {
        &self.messages[0]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryPlan {
    pub chart_type: ChartType,
    pub length_level: LengthLevel,
    pub sentences: Vec<PlannedSentence>,
}

impl SummaryPlan {
    pub fn messages(&self) -> impl Iterator<Item = &InsightMessage> {
        self.sentences.iter().flat_map(|s| s.messages.iter())
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("plan serialization is infallible")
    }
}

#[derive(Debug, Clone, Default)]
pub struct Planner {
    pub table: SalienceTable,
}

impl Planner {
    pub fn new(table: SalienceTable) -> Self {
        Self { table }
    }

    /// Assigns salience and sorts by descending weight with the intro
    /// pinned first. The sort is stable, so equal weights keep emission
    /// order.
    pub fn rank(
        &self,
        messages: Vec<InsightMessage>,
        chart_type: ChartType,
    ) -> Result<Vec<InsightMessage>, PlanError> {
        if messages.is_empty() {
            return Err(PlanError::EmptyPlan);
        }
        let mut ranked: Vec<InsightMessage> = messages
            .into_iter()
            .map(|mut m| {
                m.salience = self.table.weight(chart_type, m.category);
                m
            })
            .collect();
        ranked.sort_by(|a, b| {
            let pinned = |m: &InsightMessage| m.category != Category::IntroEncoding;
            pinned(a)
                .cmp(&pinned(b))
                .then(b.salience.total_cmp(&a.salience))
        });
        Ok(ranked)
    }

    pub fn plan(
        &self,
        ranked: &[InsightMessage],
        chart_type: ChartType,
        level: LengthLevel,
    ) -> Result<SummaryPlan, PlanError> {
        let (intro, body) = ranked.split_first().ok_or(PlanError::EmptyPlan)?;
        if intro.category != Category::IntroEncoding {
            return Err(PlanError::MissingIntro);
        }

        let listed_count = body
            .iter()
            .filter(|m| self.table.is_listed(chart_type, m.category))
            .count();
        let allow_others = listed_count < 2;
        let candidates: Vec<&InsightMessage> = body
            .iter()
            .filter(|m| m.category != Category::IntroEncoding)
            .filter(|m| allow_others || self.table.is_listed(chart_type, m.category))
            .collect();

        let mut sentences = vec![PlannedSentence {
            kind: SentenceKind::Intro,
            messages: vec![intro.clone()],
        }];
        sentences.extend(fuse(&candidates).into_iter().take(level.body_sentences()));
        Ok(SummaryPlan {
            chart_type,
            length_level: level,
            sentences,
        })
    }

    /// Planning for a selection-restricted chart. The intro must be the
    /// selection intro produced by the query engine.
    pub fn plan_selection(
        &self,
        ranked: &[InsightMessage],
        chart_type: ChartType,
        level: LengthLevel,
    ) -> Result<SummaryPlan, PlanError> {
        let first = ranked.first().ok_or(PlanError::EmptyPlan)?;
        let is_selection_intro = first.category == Category::IntroEncoding
            && first
                .variant
                .as_deref()
                .is_some_and(|v| v.starts_with("selection"));
        if !is_selection_intro {
            return Err(PlanError::MissingIntro);
        }
        self.plan(ranked, chart_type, level)
    }
}

fn fuse(candidates: &[&InsightMessage]) -> Vec<PlannedSentence> {
    let has_combined_trend = candidates
        .iter()
        .any(|m| m.category == Category::TrendGlobal && m.is_variant("combined"));
    let mut used = vec![false; candidates.len()];
    let mut out = Vec::new();

    for i in 0..candidates.len() {
        if used[i] {
            continue;
        }
        let msg = candidates[i];
        used[i] = true;
        match msg.category {
            Category::GlobalExtrema => {
                let partner = (i + 1..candidates.len()).find(|&j| {
                    !used[j]
                        && candidates[j].category == Category::GlobalExtrema
                        && candidates[j].variant != msg.variant
                });
                match partner {
                    Some(j) => {
                        used[j] = true;
                        let mut pair = vec![msg.clone(), candidates[j].clone()];
                        pair.sort_by_key(|m| !m.is_variant("max"));
                        out.push(PlannedSentence {
                            kind: SentenceKind::ExtremaPair,
                            messages: pair,
                        });
                    }
                    None => out.push(single(msg)),
                }
            }
            Category::TrendGlobal if has_combined_trend => {
                let mut group = vec![msg.clone()];
                for j in i + 1..candidates.len() {
                    if !used[j] && candidates[j].category == Category::TrendGlobal {
                        used[j] = true;
                        group.push(candidates[j].clone());
                    }
                }
                group.sort_by_key(|m| !m.is_variant("combined"));
                out.push(PlannedSentence {
                    kind: SentenceKind::TrendSummary,
                    messages: group,
                });
            }
            Category::TrendLocal => {
                let series = msg.text("series").map(str::to_string);
                let mut chain = vec![msg.clone()];
                let mut j = i + 1;
                while j < candidates.len()
                    && !used[j]
                    && candidates[j].category == Category::TrendLocal
                    && candidates[j].text("series").map(str::to_string) == series
                {
                    used[j] = true;
                    chain.push(candidates[j].clone());
                    j += 1;
                }
                chain.sort_by(|a, b| {
                    let key = |m: &InsightMessage| m.number("start_index").unwrap_or(0.0);
                    key(a).total_cmp(&key(b))
                });
                out.push(PlannedSentence {
                    kind: SentenceKind::TrendChain,
                    messages: chain,
                });
            }
            _ => out.push(single(msg)),
        }
    }
    out
}

fn single(msg: &InsightMessage) -> PlannedSentence {
    PlannedSentence {
        kind: SentenceKind::Single,
        messages: vec![msg.clone()],
    }
}
