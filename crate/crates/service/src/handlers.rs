use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use axum::body::Bytes;
use axum::extract::rejection::QueryRejection;
use axum::extract::{Path, Query, State};
use axum::http::{HeaderMap, HeaderValue};
use axum::response::{IntoResponse, Response};
use axum::Json;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use seechart_core::api::*;
use seechart_core::deconstruct::deconstruct_auto;
use seechart_core::error::ModelError;
use seechart_core::model::validate;
use seechart_core::query::{self, Selection};
use seechart_core::realize::{realize_point, realize_title};
use seechart_core::{ChartSpec, LengthLevel};

use crate::error::ApiError;
use crate::session::{ChartEntry, SharedSession};
use crate::AppState;

/// Attached to responses so the request log can name the chart.
#[derive(Debug, Clone, Copy)]
pub struct ChartHash(pub u64);

pub fn chart_hash(spec: &ChartSpec) -> u64 {
    let mut h = DefaultHasher::new();
    spec.to_json().hash(&mut h);
    h.finish()
}

fn reply<T: Serialize>(value: &T, chart: Option<&ChartSpec>) -> Response {
    let mut r = Json(value).into_response();
    if let Some(c) = chart {
        r.extensions_mut().insert(ChartHash(chart_hash(c)));
    }
    r
}

fn with_session(mut r: Response, id: &str) -> Response {
    if let Ok(v) = HeaderValue::from_str(id) {
        r.headers_mut().insert(SESSION_HEADER, v);
    }
    r
}

fn parse<T: DeserializeOwned>(body: &Bytes) -> Result<T, ApiError> {
    serde_json::from_slice(body).map_err(|e| ApiError::BadBody(e.to_string()))
}

fn check(spec: &ChartSpec) -> Result<(), ApiError> {
    let report = validate(spec);
    if report.is_valid() {
        Ok(())
    } else {
        Err(ApiError::Pipeline(ModelError::Invalid(report).into()))
    }
}

fn seed_or_random(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(rand::random)
}

pub async fn health() -> Json<Health> {
    Json(Health {
        status: "ok".into(),
        version: env!("CARGO_PKG_VERSION").into(),
    })
}

pub async fn fallback(uri: axum::http::Uri) -> ApiError {
    ApiError::NoRoute(uri.path().to_string())
}

// ---- stateless ---------------------------------------------------------------

/// Body is raw SVG, Vega-Lite JSON or chart JSON.
pub async fn deconstruct(body: Bytes) -> Result<Response, ApiError> {
    let text = std::str::from_utf8(&body).map_err(|e| ApiError::BadBody(e.to_string()))?;
    let d = deconstruct_auto(text)?;
    Ok(reply(&d, Some(&d.chart)))
}

pub async fn insights(State(app): State<AppState>, body: Bytes) -> Result<Response, ApiError> {
    let req: ChartRequest = parse(&body)?;
    let messages = app.pipeline.insights(&req.chart)?;
    Ok(reply(&InsightsResponse { messages }, Some(&req.chart)))
}

pub async fn plan(State(app): State<AppState>, body: Bytes) -> Result<Response, ApiError> {
    let req: PlanRequest = parse(&body)?;
    let plan = app.pipeline.plan(&req.chart, req.level)?;
    Ok(reply(&plan, Some(&req.chart)))
}

pub async fn summarize(State(app): State<AppState>, body: Bytes) -> Result<Response, ApiError> {
    let req: SummarizeRequest = parse(&body)?;
    let seed = seed_or_random(req.seed);
    let summary = match &req.selection {
        Some(sel) => app
            .pipeline
            .summarize_selection(&req.chart, sel, req.level, seed)?,
        None => app.pipeline.summarize(&req.chart, req.level, seed)?,
    };
    Ok(reply(&summary, Some(&req.chart)))
}

pub async fn answer(body: Bytes) -> Result<Response, ApiError> {
    let req: AnswerRequest = parse(&body)?;
    check(&req.chart)?;
    Ok(reply(
        &query::answer(&req.chart, &req.query),
        Some(&req.chart),
    ))
}

pub async fn selection_summarize(
    State(app): State<AppState>,
    body: Bytes,
) -> Result<Response, ApiError> {
    let req: SelectionRequest = parse(&body)?;
    let sel = req.selection();
    let out = summarize_selection(&app, &req.chart, &sel, req.level, seed_or_random(req.seed))?;
    Ok(reply(&out, Some(&req.chart)))
}

fn summarize_selection(
    app: &AppState,
    spec: &ChartSpec,
    sel: &Selection,
    level: LengthLevel,
    seed: u64,
) -> Result<SelectionSummary, ApiError> {
    let summary = app.pipeline.summarize_selection(spec, sel, level, seed)?;
    let description = query::describe_selection(spec, sel)?;
    Ok(SelectionSummary {
        description,
        summary,
    })
}

// ---- sessions ----------------------------------------------------------------

fn session_id(headers: &HeaderMap) -> Result<Option<String>, ApiError> {
    match headers.get(SESSION_HEADER) {
        None => Ok(None),
        Some(v) => v
            .to_str()
            .map(|s| Some(s.trim().to_string()))
            .map_err(|_| ApiError::BadParam(format!("{SESSION_HEADER} is not text"))),
    }
}

fn require_session(app: &AppState, headers: &HeaderMap) -> Result<SharedSession, ApiError> {
    let id = session_id(headers)?.ok_or(ApiError::MissingSession(SESSION_HEADER))?;
    app.sessions.get(&id)
}

/// Runs `f` on one chart of the caller's session, holding the session lock.
fn on_chart<T>(
    app: &AppState,
    headers: &HeaderMap,
    chart_id: &str,
    f: impl FnOnce(&mut ChartEntry, &mut LengthLevel) -> Result<T, ApiError>,
) -> Result<(T, ChartSpec, String), ApiError> {
    let session = require_session(app, headers)?;
    let mut guard = session.lock().expect("session poisoned");
    let state = &mut *guard;
    let id = state.id.clone();
    let mut level = state.level;
    let entry = state.chart_mut(chart_id)?;
    let out = f(entry, &mut level)?;
    let spec = entry.spec.clone();
    state.level = level;
    Ok((out, spec, id))
}

pub async fn register(
    State(app): State<AppState>,
    headers: HeaderMap,
    body: Bytes,
) -> Result<Response, ApiError> {
    let req: RegisterRequest = parse(&body)?;
    let (spec, warnings) = match (req.chart, req.source) {
        (Some(chart), None) => (chart, Vec::new()),
        (None, Some(source)) => {
            let d = deconstruct_auto(&source)?;
            (d.chart, d.warnings)
        }
        _ => {
            return Err(ApiError::BadBody(
                "exactly one of \"chart\" or \"source\" is required".into(),
            ))
        }
    };
    check(&spec)?;
    let session = match session_id(&headers)? {
        Some(id) => app.sessions.get(&id)?,
        None => app.sessions.create(),
    };
    let mut state = session.lock().expect("session poisoned");
    let entry = ChartEntry {
        id: uuid::Uuid::new_v4().to_string(),
        seed: seed_or_random(req.seed),
        spec,
        selection: None,
    };
    let out = Registered {
        session_id: state.id.clone(),
        chart_id: entry.id.clone(),
        index: state.charts.len(),
        seed: entry.seed,
        title: entry.spec.title.clone(),
        warnings,
    };
    let r = reply(&out, Some(&entry.spec));
    state.active = Some(state.charts.len());
    state.charts.push(entry);
    Ok(with_session(r, &out.session_id))
}

pub async fn session_info(
    State(app): State<AppState>,
    headers: HeaderMap,
) -> Result<Response, ApiError> {
    let session = require_session(&app, &headers)?;
    let info = session.lock().expect("session poisoned").info();
    Ok(with_session(reply(&info, None), &info.session_id))
}

pub async fn chart(
    State(app): State<AppState>,
    headers: HeaderMap,
    Path(id): Path<String>,
) -> Result<Response, ApiError> {
    let (_, spec, sid) = on_chart(&app, &headers, &id, |_, _| Ok(()))?;
    Ok(with_session(reply(&spec, Some(&spec)), &sid))
}

pub async fn title(
    State(app): State<AppState>,
    headers: HeaderMap,
    Path(id): Path<String>,
) -> Result<Response, ApiError> {
    let (text, spec, sid) = on_chart(&app, &headers, &id, |c, _| Ok(realize_title(&c.spec)))?;
    Ok(with_session(
        reply(&TextResponse { text }, Some(&spec)),
        &sid,
    ))
}

#[derive(Debug, Deserialize)]
pub struct SummaryParams {
    level: Option<String>,
    seed: Option<u64>,
}

fn level_param(raw: Option<&str>) -> Result<Option<LengthLevel>, ApiError> {
    raw.map(|l| l.parse().map_err(ApiError::BadParam))
        .transpose()
}

/// Uses (and updates) the session's length level; the chart's own seed
/// unless one is given.
pub async fn chart_summary(
    State(app): State<AppState>,
    headers: HeaderMap,
    Path(id): Path<String>,
    params: Result<Query<SummaryParams>, QueryRejection>,
) -> Result<Response, ApiError> {
    let Query(params) = params.map_err(|e| ApiError::BadParam(e.body_text()))?;
    let requested = level_param(params.level.as_deref())?;
    let (summary, spec, sid) = on_chart(&app, &headers, &id, |c, level| {
        if let Some(l) = requested {
            *level = l;
        }
        Ok(app
            .pipeline
            .summarize(&c.spec, *level, params.seed.unwrap_or(c.seed))?)
    })?;
    Ok(with_session(reply(&summary, Some(&spec)), &sid))
}

#[derive(Debug, Deserialize)]
pub struct PointParams {
    #[serde(default)]
    series: usize,
    index: usize,
}

pub async fn point(
    State(app): State<AppState>,
    headers: HeaderMap,
    Path(id): Path<String>,
    params: Result<Query<PointParams>, QueryRejection>,
) -> Result<Response, ApiError> {
    let Query(p) = params.map_err(|e| ApiError::BadParam(e.body_text()))?;
    let (text, spec, sid) = on_chart(&app, &headers, &id, |c, _| {
        Ok(realize_point(&c.spec, p.series, p.index)?)
    })?;
    Ok(with_session(
        reply(&TextResponse { text }, Some(&spec)),
        &sid,
    ))
}

pub async fn chart_selection_summarize(
    State(app): State<AppState>,
    headers: HeaderMap,
    Path(id): Path<String>,
    body: Bytes,
) -> Result<Response, ApiError> {
    let req: ChartSelectionRequest = parse(&body)?;
    let sel = Selection {
        indices: req.indices,
        series: req.series,
    };
    let (out, spec, sid) = on_chart(&app, &headers, &id, |c, level| {
        if let Some(l) = req.level {
            *level = l;
        }
        let out = summarize_selection(&app, &c.spec, &sel, *level, req.seed.unwrap_or(c.seed))?;
        // stored only once it is known to be valid
        c.selection = Some(sel.clone());
        Ok(out)
    })?;
    Ok(with_session(reply(&out, Some(&spec)), &sid))
}

pub async fn current_selection(
    State(app): State<AppState>,
    headers: HeaderMap,
    Path(id): Path<String>,
) -> Result<Response, ApiError> {
    let (out, spec, sid) = on_chart(&app, &headers, &id, |c, _| {
        let description = match &c.selection {
            Some(sel) => Some(query::describe_selection(&c.spec, sel)?),
            None => None,
        };
        Ok(CurrentSelection {
            selection: c.selection.clone(),
            description,
        })
    })?;
    Ok(with_session(reply(&out, Some(&spec)), &sid))
}

pub async fn clear_selection(
    State(app): State<AppState>,
    headers: HeaderMap,
    Path(id): Path<String>,
) -> Result<Response, ApiError> {
    let (out, spec, sid) = on_chart(&app, &headers, &id, |c, _| {
        c.selection = None;
        Ok(CurrentSelection {
            selection: None,
            description: None,
        })
    })?;
    Ok(with_session(reply(&out, Some(&spec)), &sid))
}

#[derive(Debug, Deserialize)]
pub struct QueryBody {
    query: String,
}

pub async fn chart_answer(
    State(app): State<AppState>,
    headers: HeaderMap,
    Path(id): Path<String>,
    body: Bytes,
) -> Result<Response, ApiError> {
    let req: QueryBody = parse(&body)?;
    let (out, spec, sid) = on_chart(&app, &headers, &id, |c, _| {
        Ok(query::answer(&c.spec, &req.query))
    })?;
    Ok(with_session(reply(&out, Some(&spec)), &sid))
}
