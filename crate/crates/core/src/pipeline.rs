//! End-to-end orchestration: validate, analyze, rank, plan, realize.

use serde::{Deserialize, Serialize};

use crate::error::{ModelError, Result};
use crate::insights::{self, InsightMessage};
use crate::model::{validate, ChartSpec, ChartType};
use crate::planner::{LengthLevel, Planner, SummaryPlan};
use crate::query::{self, Selection};
use crate::realize::{self, RealizationContext, TemplateRegistry};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub chart_type: ChartType,
    pub length_level: LengthLevel,
    pub seed: u64,
    pub sentences: Vec<String>,
    pub text: String,
}

#[derive(Debug, Clone)]
pub struct Pipeline {
    pub planner: Planner,
    pub registry: TemplateRegistry,
}

impl Default for Pipeline {
    fn default() -> Self {
        Self::new(TemplateRegistry::builtin())
    }
}

fn check(spec: &ChartSpec) -> Result<()> {
    let report = validate(spec);
    if report.is_valid() {
        Ok(())
    } else {
        Err(ModelError::Invalid(report).into())
    }
}

impl Pipeline {
    pub fn new(registry: TemplateRegistry) -> Self {
        Self {
            planner: Planner::default(),
            registry,
        }
    }

    /// Ranked messages, intro first.
    pub fn insights(&self, spec: &ChartSpec) -> Result<Vec<InsightMessage>> {
        check(spec)?;
        let messages = insights::analyze(spec)?;
        Ok(self.planner.rank(messages, spec.chart_type)?)
    }

    pub fn plan(&self, spec: &ChartSpec, level: LengthLevel) -> Result<SummaryPlan> {
        let ranked = self.insights(spec)?;
        Ok(self.planner.plan(&ranked, spec.chart_type, level)?)
    }

    pub fn summarize(&self, spec: &ChartSpec, level: LengthLevel, seed: u64) -> Result<Summary> {
        let plan = self.plan(spec, level)?;
        self.realize_plan(&plan, spec, seed)
    }

    pub fn plan_selection(
        &self,
        spec: &ChartSpec,
        selection: &Selection,
        level: LengthLevel,
    ) -> Result<(ChartSpec, SummaryPlan)> {
        check(spec)?;
        let (restricted, messages) = query::selection_insights(spec, selection)?;
        let ranked = self.planner.rank(messages, restricted.chart_type)?;
        let plan = self
            .planner
            .plan_selection(&ranked, restricted.chart_type, level)?;
        Ok((restricted, plan))
    }

    /// Partial summary over the selected points only.
    pub fn summarize_selection(
        &self,
        spec: &ChartSpec,
        selection: &Selection,
        level: LengthLevel,
        seed: u64,
    ) -> Result<Summary> {
        let (restricted, plan) = self.plan_selection(spec, selection, level)?;
        self.realize_plan(&plan, &restricted, seed)
    }

    fn realize_plan(&self, plan: &SummaryPlan, spec: &ChartSpec, seed: u64) -> Result<Summary> {
        let ctx = RealizationContext::for_chart(spec, seed);
        let out = realize::realize(plan, &self.registry, &ctx)?;
        Ok(Summary {
            chart_type: plan.chart_type,
            length_level: plan.length_level,
            seed,
            sentences: out.sentences,
            text: out.text,
        })
    }
}
