//! Surface realization: turn planned sentences into text using weighted
//! template pools and a seeded random stream.

use std::collections::BTreeMap;
use std::path::Path;

use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{RealizeError, TemplateError};
use crate::insights::{Category, InsightMessage, ParamValue};
use crate::model::{ChartSpec, ChartType};
use crate::planner::{PlannedSentence, SentenceKind, SummaryPlan};

const BUILTIN_TEMPLATES: &str = include_str!("../templates/default.json");

/// Slots every template may use regardless of category.
pub const CONTEXT_SLOTS: [&str; 5] = [
    "x_label",
    "y_label",
    "x_label_plural",
    "chart_type_name",
    "title",
];

const FORMATS: [&str; 7] = ["num", "d1", "pct", "int", "list", "numbered", "groups"];

/// Middle connectives for fused trend chains; the last clause always gets
/// "and lastly,".
const CONNECTIVES: [&str; 3] = ["and", "after that", "however"];

fn default_weight() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Template {
    pub text: String,
    #[serde(default = "default_weight")]
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq)]
struct Slot {
    name: String,
    format: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
enum Piece {
    Lit(String),
    Slot(Slot),
}

fn parse_template(pool: &str, text: &str) -> Result<Vec<Piece>, TemplateError> {
    let malformed = |detail: String| TemplateError::MalformedSlot {
        pool: pool.to_string(),
        detail,
    };
    let mut pieces = Vec::new();
    let mut rest = text;
    while let Some(open) = rest.find(['{', '}']) {
        if rest.as_bytes()[open] == b'}' {
            return Err(malformed(format!("stray '}}' in {text:?}")));
        }
        if open > 0 {
            pieces.push(Piece::Lit(rest[..open].to_string()));
        }
        let after = &rest[open + 1..];
        let close = after
            .find('}')
            .ok_or_else(|| malformed(format!("unclosed '{{' in {text:?}")))?;
        let inner = &after[..close];
        let (name, format) = match inner.split_once(':') {
            Some((n, f)) => (n, Some(f)),
            None => (inner, None),
        };
        if name.is_empty() || !name.chars().all(|c| c.is_ascii_lowercase() || c == '_') {
            return Err(malformed(format!("bad slot name {inner:?}")));
        }
        if let Some(f) = format {
            if !FORMATS.contains(&f) {
                return Err(malformed(format!("unknown format {f:?} in {inner:?}")));
            }
        }
        pieces.push(Piece::Slot(Slot {
            name: name.to_string(),
            format: format.map(str::to_string),
        }));
        rest = &after[close + 1..];
    }
    if !rest.is_empty() {
        pieces.push(Piece::Lit(rest.to_string()));
    }
    Ok(pieces)
}

fn pool_category(key: &str) -> Result<Category, TemplateError> {
    let head = key.split_once('.').map_or(key, |(c, _)| c);
    head.parse()
        .map_err(|_| TemplateError::UnknownCategory(key.to_string()))
}

fn min_pool_size(category: Category) -> usize {
    match category {
        Category::IntroEncoding | Category::ExtremaMinMax => 3,
        _ => 2,
    }
}

#[derive(Debug, Clone)]
struct Pool {
    templates: Vec<Template>,
    parsed: Vec<Vec<Piece>>,
    dist: WeightedIndex<f64>,
}

/// Validated template pools keyed by `Category` or `Category.suffix`.
#[derive(Debug, Clone)]
pub struct TemplateRegistry {
    pools: BTreeMap<String, Pool>,
}

impl TemplateRegistry {
    /// The pools shipped with the library.
    pub fn builtin() -> Self {
        Self::from_json(BUILTIN_TEMPLATES).expect("built-in templates are valid")
    }

    pub fn from_json(text: &str) -> Result<Self, TemplateError> {
        let raw: BTreeMap<String, Vec<Template>> =
            serde_json::from_str(text).map_err(|e| TemplateError::Json(e.to_string()))?;
        let mut pools = BTreeMap::new();
        for (key, templates) in raw {
            let pool = build_pool(&key, templates)?;
            pools.insert(key, pool);
        }
        Ok(Self { pools })
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self, TemplateError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| TemplateError::Io(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Built-in pools with the pools from `path` layered on top; a pool in
    /// the file replaces the built-in pool of the same key.
    pub fn builtin_with_overrides(path: impl AsRef<Path>) -> Result<Self, TemplateError> {
        let mut base = Self::builtin();
        base.pools.extend(Self::from_path(path)?.pools);
        Ok(base)
    }

    pub fn pool_keys(&self) -> impl Iterator<Item = &str> {
        self.pools.keys().map(String::as_str)
    }

    pub fn templates(&self, key: &str) -> Option<&[Template]> {
        self.pools.get(key).map(|p| p.templates.as_slice())
    }

    fn resolve(&self, msg: &InsightMessage, chart_type: ChartType) -> Result<&str, RealizeError> {
        let cat = msg.category.name();
        let mut keys = Vec::with_capacity(3);
        if let Some(v) = &msg.variant {
            keys.push(format!("{cat}.{v}"));
        }
        keys.push(format!("{cat}.{}", chart_type.key()));
        keys.push(cat.to_string());
        keys.iter()
            .find_map(|k| {
                self.pools
                    .get_key_value(k.as_str())
                    .map(|(k, _)| k.as_str())
            })
            .ok_or_else(|| RealizeError::MissingTemplate(keys.join(" | ")))
    }

    fn require(&self, key: &str) -> Result<&Pool, RealizeError> {
        self.pools
            .get(key)
            .ok_or_else(|| RealizeError::MissingTemplate(key.to_string()))
    }

    /// Checks that every template of the pool(s) a message would use can be
    /// filled from the message and the chart context.
    pub fn check_message(
        &self,
        msg: &InsightMessage,
        ctx: &RealizationContext,
    ) -> Result<(), RealizeError> {
        let bindings = Bindings::new(ctx).with_message(msg);
        let keys: Vec<String> = if msg.category == Category::TrendLocal {
            vec![clause_pool(msg).to_string(), chain_pool(msg).to_string()]
        } else {
            vec![self.resolve(msg, ctx.chart_type)?.to_string()]
        };
        for key in keys {
            let pool = self.require(&key)?;
            let mut b = bindings.clone();
            if msg.category == Category::TrendLocal {
                b.set("chain", ParamValue::Text(String::new()));
            }
            for pieces in &pool.parsed {
                fill(&key, pieces, &b)?;
            }
        }
        Ok(())
    }
}

fn build_pool(key: &str, templates: Vec<Template>) -> Result<Pool, TemplateError> {
    let category = pool_category(key)?;
    let needed = min_pool_size(category);
    if templates.len() < needed {
        return Err(TemplateError::PoolTooSmall {
            pool: key.to_string(),
            found: templates.len(),
            needed,
        });
    }
    let declared = category.declared_params();
    let mut parsed = Vec::with_capacity(templates.len());
    for t in &templates {
        let pieces = parse_template(key, &t.text)?;
        for piece in &pieces {
            if let Piece::Slot(slot) = piece {
                let name = slot.name.as_str();
                if !declared.contains(&name) && !CONTEXT_SLOTS.contains(&name) {
                    return Err(TemplateError::UndeclaredSlot {
                        pool: key.to_string(),
                        slot: slot.name.clone(),
                    });
                }
            }
        }
        parsed.push(pieces);
    }
    let weights: Vec<f64> = templates.iter().map(|t| t.weight).collect();
    let dist = WeightedIndex::new(&weights).map_err(|_| TemplateError::ZeroWeight {
        pool: key.to_string(),
    })?;
    Ok(Pool {
        templates,
        parsed,
        dist,
    })
}

/// Chart-level values shared by every sentence plus the random seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealizationContext {
    pub seed: u64,
    pub chart_type: ChartType,
    pub x_label: String,
    pub y_label: String,
    pub title: String,
}

impl RealizationContext {
    pub fn for_chart(spec: &ChartSpec, seed: u64) -> Self {
        Self {
            seed,
            chart_type: spec.chart_type,
            x_label: spec.x_axis.label.clone(),
            y_label: spec.y_axis.label.clone(),
            title: spec.title.clone(),
        }
    }
}

#[derive(Debug, Clone)]
struct Bindings {
    values: BTreeMap<String, ParamValue>,
}

impl Bindings {
    fn new(ctx: &RealizationContext) -> Self {
        let mut values = BTreeMap::new();
        values.insert("x_label".into(), ParamValue::Text(ctx.x_label.clone()));
        values.insert("y_label".into(), ParamValue::Text(ctx.y_label.clone()));
        values.insert(
            "x_label_plural".into(),
            ParamValue::Text(pluralize(&ctx.x_label)),
        );
        values.insert(
            "chart_type_name".into(),
            ParamValue::Text(ctx.chart_type.phrase().to_string()),
        );
        values.insert("title".into(), ParamValue::Text(ctx.title.clone()));
        Self { values }
    }

    fn with_message(mut self, msg: &InsightMessage) -> Self {
        for (k, v) in &msg.params {
            self.values.insert(k.clone(), v.clone());
        }
        self
    }

    fn with_prefixed(mut self, prefix: &str, msg: &InsightMessage) -> Self {
        for (k, v) in &msg.params {
            self.values.insert(format!("{prefix}_{k}"), v.clone());
        }
        self
    }

    fn set(&mut self, key: &str, value: ParamValue) {
        self.values.insert(key.to_string(), value);
    }
}

fn fill(pool: &str, pieces: &[Piece], bindings: &Bindings) -> Result<String, RealizeError> {
    let mut out = String::new();
    for piece in pieces {
        match piece {
            Piece::Lit(s) => out.push_str(s),
            Piece::Slot(slot) => {
                let value =
                    bindings
                        .values
                        .get(&slot.name)
                        .ok_or_else(|| RealizeError::UnboundSlot {
                            pool: pool.to_string(),
                            slot: slot.name.clone(),
                        })?;
                out.push_str(&render_value(value, slot.format.as_deref()));
            }
        }
    }
    Ok(out)
}

fn render_value(value: &ParamValue, format: Option<&str>) -> String {
    match value {
        ParamValue::Number(v) => match format {
            Some("d1") => format!("{:.1}", clean_zero(*v)),
            Some("pct") => format!("{:.2}", clean_zero(*v)),
            Some("int") => format!("{:.0}", clean_zero(v.round())),
            _ => format_number(*v),
        },
        ParamValue::Text(s) => s.clone(),
        ParamValue::Flag(b) => if *b { "yes" } else { "no" }.to_string(),
        ParamValue::List(items) => {
            let nested = items.iter().any(|i| matches!(i, ParamValue::List(_)));
            match format {
                Some("numbered") => numbered_list(&render_items(items)),
                Some("groups") => render_groups(items),
                _ if nested => render_groups(items),
                _ => join_list(&render_items(items)),
            }
        }
    }
}

fn render_items(items: &[ParamValue]) -> Vec<String> {
    items.iter().map(|i| render_value(i, None)).collect()
}

fn render_groups(items: &[ParamValue]) -> String {
    items
        .iter()
        .map(|g| match g {
            ParamValue::List(inner) => join_list(&render_items(inner)),
            other => render_value(other, None),
        })
        .collect::<Vec<_>>()
        .join(", as well as ")
}

fn clean_zero(v: f64) -> f64 {
    if v == 0.0 {
        0.0
    } else {
        v
    }
}

/// Integral values print without a fraction; others with up to two decimals,
/// trailing zeros trimmed. No thousands separators.
pub fn format_number(v: f64) -> String {
    if !v.is_finite() {
        return v.to_string();
    }
    if (v - v.round()).abs() < 1e-9 {
        return format!("{:.0}", clean_zero(v.round()));
    }
    let s = format!("{:.2}", v);
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

/// "A", "A and B", "A, B, and C".
pub fn join_list(items: &[String]) -> String {
    match items {
        [] => String::new(),
        [one] => one.clone(),
        [a, b] => format!("{a} and {b}"),
        [init @ .., last] => format!("{}, and {last}", init.join(", ")),
    }
}

/// "1. A, 2. B, and lastly, 3. C".
pub fn numbered_list(items: &[String]) -> String {
    let numbered: Vec<String> = items
        .iter()
        .enumerate()
        .map(|(i, s)| format!("{}. {s}", i + 1))
        .collect();
    match numbered.as_slice() {
        [] => String::new(),
        [one] => one.clone(),
        [init @ .., last] => format!("{}, and lastly, {last}", init.join(", ")),
    }
}

/// Naive English plural for axis labels ("Country" -> "Countries").
pub fn pluralize(word: &str) -> String {
    let lower = word.to_ascii_lowercase();
    if word.is_empty() || lower.ends_with('s') {
        return word.to_string();
    }
    let bytes = lower.as_bytes();
    if lower.ends_with('y') && bytes.len() >= 2 && !b"aeiou".contains(&bytes[bytes.len() - 2]) {
        return format!("{}ies", &word[..word.len() - 1]);
    }
    if ["ch", "sh", "x", "z"].iter().any(|e| lower.ends_with(e)) {
        return format!("{word}es");
    }
    format!("{word}s")
}

/// Whitespace cleanup, leading capital and terminal punctuation.
pub fn tidy_sentence(raw: &str) -> String {
    let mut s = raw.split_whitespace().collect::<Vec<_>>().join(" ");
    for (from, to) in [(" ,", ","), (" .", "."), (",,", ","), (",.", ".")] {
        while s.contains(from) {
            s = s.replace(from, to);
        }
    }
    let mut chars = s.chars();
    let mut out = match chars.next() {
        Some(c) => c.to_uppercase().chain(chars).collect::<String>(),
        None => return s,
    };
    if !out.ends_with(['.', '!', '?']) {
        out.push('.');
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealizedSummary {
    pub seed: u64,
    pub sentences: Vec<String>,
    pub text: String,
}

fn clause_pool(msg: &InsightMessage) -> &'static str {
    if msg.is_variant("absolute") {
        "TrendLocal.clause_absolute"
    } else {
        "TrendLocal.clause"
    }
}

fn chain_pool(msg: &InsightMessage) -> &'static str {
    if msg.param("series").is_some() {
        "TrendLocal.chain_series"
    } else {
        "TrendLocal.chain"
    }
}

struct Draw<'a> {
    registry: &'a TemplateRegistry,
    rng: ChaCha8Rng,
}

impl Draw<'_> {
    fn pick(&mut self, key: &str, bindings: &Bindings) -> Result<String, RealizeError> {
        let pool = self.registry.require(key)?;
        let i = pool.dist.sample(&mut self.rng);
        fill(key, &pool.parsed[i], bindings)
    }
}

/// Realizes every planned sentence in order. The random stream is seeded
/// once per summary and consumed sentence by sentence.
pub fn realize(
    plan: &SummaryPlan,
    registry: &TemplateRegistry,
    ctx: &RealizationContext,
) -> Result<RealizedSummary, RealizeError> {
    let mut draw = Draw {
        registry,
        rng: ChaCha8Rng::seed_from_u64(ctx.seed),
    };
    let base = Bindings::new(ctx);
    let mut sentences = Vec::with_capacity(plan.sentences.len());
    for sentence in &plan.sentences {
        let raw = realize_sentence(sentence, &mut draw, &base, ctx)?;
        sentences.push(tidy_sentence(&raw));
    }
    let text = sentences.join(" ");
    Ok(RealizedSummary {
        seed: ctx.seed,
        sentences,
        text,
    })
}

fn realize_sentence(
    sentence: &PlannedSentence,
    draw: &mut Draw<'_>,
    base: &Bindings,
    ctx: &RealizationContext,
) -> Result<String, RealizeError> {
    let lead = sentence.lead();
    match sentence.kind {
        SentenceKind::ExtremaPair if sentence.messages.len() == 2 => {
            let b = base
                .clone()
                .with_prefixed("max", &sentence.messages[0])
                .with_prefixed("min", &sentence.messages[1]);
            draw.pick("GlobalExtrema.pair", &b)
        }
        SentenceKind::TrendChain => realize_chain(&sentence.messages, draw, base, ctx.seed),
        _ => {
            let key = draw.registry.resolve(lead, ctx.chart_type)?.to_string();
            draw.pick(&key, &base.clone().with_message(lead))
        }
    }
}

fn realize_chain(
    messages: &[InsightMessage],
    draw: &mut Draw<'_>,
    base: &Bindings,
    seed: u64,
) -> Result<String, RealizeError> {
    let lead = &messages[0];
    let mut clauses = Vec::with_capacity(messages.len());
    for m in messages {
        let clause = draw.pick(clause_pool(m), &base.clone().with_message(m))?;
        clauses.push(clause.trim().trim_end_matches('.').to_string());
    }

    let mut chain = clauses[0].clone();
    let mut cursor = (seed % CONNECTIVES.len() as u64) as usize;
    for i in 1..clauses.len() {
        let connective = if i == clauses.len() - 1 && clauses.len() >= 3 {
            "and lastly,"
        } else {
            let turned = messages[i].text("direction") != messages[i - 1].text("direction");
            let mut c = CONNECTIVES[cursor % CONNECTIVES.len()];
            if turned {
                c = "however";
            } else if c == "however" {
                cursor += 1;
                c = CONNECTIVES[cursor % CONNECTIVES.len()];
            }
            cursor += 1;
            c
        };
        chain.push_str(&format!(", {connective} {}", clauses[i]));
    }

    let mut b = base.clone().with_message(lead);
    b.set("chain", ParamValue::Text(chain));
    draw.pick(chain_pool(lead), &b)
}

/// "This is a Line chart. It shows <title>" — the title is read as given.
pub fn realize_title(spec: &ChartSpec) -> String {
    let head = format!("This is a {} chart.", spec.chart_type.display_name());
    let title = spec.title.trim();
    if title.is_empty() {
        head
    } else {
        format!("{head} It shows {title}")
    }
}

/// Spoken description of one data point.
pub fn realize_point(
    spec: &ChartSpec,
    series: usize,
    index: usize,
) -> Result<String, RealizeError> {
    let s = spec
        .series
        .get(series)
        .ok_or(RealizeError::IndexOutOfBounds { series, index })?;
    let p = s
        .points
        .get(index)
        .ok_or(RealizeError::IndexOutOfBounds { series, index })?;
    let body = format!(
        "in {} {}, the {} was, {}.",
        spec.x_axis.label,
        p.category,
        spec.y_axis.label,
        format_number(p.value)
    );
    let text = if spec.chart_type.is_multi_series() {
        format!("For {}, {body}", s.display_name(series))
    } else {
        body
    };
    Ok(tidy_sentence(&text))
}
