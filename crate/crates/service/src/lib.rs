//! HTTP/JSON front end for the summarization pipeline.
//!
//! Stateless endpoints take the chart inline; session endpoints keep charts
//! server-side, keyed by the `x-session-id` header. Sessions live in memory
//! only and are lost on restart.

pub mod error;
pub mod handlers;
pub mod session;

use std::net::{IpAddr, Ipv4Addr, SocketAddr};
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use axum::extract::{DefaultBodyLimit, MatchedPath, Request};
use axum::middleware::{self, Next};
use axum::response::Response;
use axum::routing::{get, post};
use axum::Router;
use seechart_core::api::SESSION_HEADER;
use seechart_core::error::TemplateError;
use seechart_core::realize::TemplateRegistry;
use seechart_core::Pipeline;
use thiserror::Error;
use tokio::net::TcpListener;

pub use error::ApiError;
use handlers::ChartHash;
use session::SessionStore;

pub const DEFAULT_PORT: u16 = 8737;
const BODY_LIMIT: usize = 32 * 1024 * 1024;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("SEECHART_PORT must be a port number, got {0:?}")]
    BadPort(String),
    #[error(transparent)]
    Templates(#[from] TemplateError),
    #[error("cannot bind {addr}: {source}")]
    Bind {
        addr: SocketAddr,
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub host: IpAddr,
    pub port: u16,
    /// Template overrides layered over the built-in pools.
    pub templates: Option<PathBuf>,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            host: IpAddr::V4(Ipv4Addr::LOCALHOST),
            port: DEFAULT_PORT,
            templates: None,
        }
    }
}

impl Config {
    /// Reads `SEECHART_PORT` and `SEECHART_TEMPLATES`.
    pub fn from_env() -> Result<Self, ConfigError> {
        Self::from_lookup(|k| std::env::var(k).ok())
    }

    pub fn from_lookup(get: impl Fn(&str) -> Option<String>) -> Result<Self, ConfigError> {
        let mut config = Config::default();
        if let Some(p) = get("SEECHART_PORT").filter(|p| !p.trim().is_empty()) {
            config.port = p.trim().parse().map_err(|_| ConfigError::BadPort(p))?;
        }
        config.templates = get("SEECHART_TEMPLATES")
            .filter(|t| !t.trim().is_empty())
            .map(PathBuf::from);
        Ok(config)
    }

    pub fn pipeline(&self) -> Result<Pipeline, TemplateError> {
        let registry = match &self.templates {
            Some(path) => TemplateRegistry::builtin_with_overrides(path)?,
            None => TemplateRegistry::builtin(),
        };
        Ok(Pipeline::new(registry))
    }
}

#[derive(Debug, Clone)]
pub struct AppState {
    pub pipeline: Arc<Pipeline>,
    pub sessions: Arc<SessionStore>,
}

impl AppState {
    pub fn new(pipeline: Pipeline) -> Self {
        Self {
            pipeline: Arc::new(pipeline),
            sessions: Arc::default(),
        }
    }
}

impl Default for AppState {
    fn default() -> Self {
        Self::new(Pipeline::default())
    }
}

pub fn router(state: AppState) -> Router {
    use handlers::*;
    Router::new()
        .route("/v1/health", get(health))
        .route("/v1/deconstruct", post(deconstruct))
        .route("/v1/insights", post(insights))
        .route("/v1/plan", post(plan))
        .route("/v1/summarize", post(summarize))
        .route("/v1/answer", post(answer))
        .route("/v1/selection/summarize", post(selection_summarize))
        .route("/v1/session", get(session_info))
        .route("/v1/charts", post(register))
        .route("/v1/charts/:id", get(chart))
        .route("/v1/charts/:id/title", get(title))
        .route("/v1/charts/:id/summary", get(chart_summary))
        .route("/v1/charts/:id/point", get(point))
        .route(
            "/v1/charts/:id/selection",
            get(current_selection).delete(clear_selection),
        )
        .route(
            "/v1/charts/:id/selection/summarize",
            post(chart_selection_summarize),
        )
        .route("/v1/charts/:id/answer", post(chart_answer))
        .route_layer(middleware::from_fn(log_request))
        .fallback(fallback)
        .layer(DefaultBodyLimit::max(BODY_LIMIT))
        .with_state(state)
}

/// One line per request: session, operation, chart hash, status, latency.
async fn log_request(req: Request, next: Next) -> Response {
    let start = Instant::now();
    let op = req
        .extensions()
        .get::<MatchedPath>()
        .map(|p| p.as_str().to_string())
        .unwrap_or_else(|| req.uri().path().to_string());
    let method = req.method().clone();
    let resp = next.run(req).await;
    let session = resp
        .headers()
        .get(SESSION_HEADER)
        .and_then(|v| v.to_str().ok())
        .unwrap_or("-")
        .to_string();
    let chart = resp
        .extensions()
        .get::<ChartHash>()
        .map(|h| format!("{:016x}", h.0))
        .unwrap_or_else(|| "-".into());
    tracing::info!(
        target: "seechart::request",
        %method,
        op,
        session,
        chart,
        status = resp.status().as_u16(),
        latency_us = start.elapsed().as_micros() as u64,
    );
    resp
}

pub async fn bind(config: &Config) -> Result<TcpListener, ConfigError> {
    let addr = SocketAddr::new(config.host, config.port);
    TcpListener::bind(addr)
        .await
        .map_err(|source| ConfigError::Bind { addr, source })
}

/// Serves until the process is stopped.
pub async fn serve_on(listener: TcpListener, state: AppState) -> std::io::Result<()> {
    axum::serve(listener, router(state)).await
}

pub async fn serve(config: Config) -> Result<(), Box<dyn std::error::Error + Send + Sync>> {
    let state = AppState::new(config.pipeline()?);
    let listener = bind(&config).await?;
    tracing::info!(addr = %listener.local_addr()?, "listening");
    serve_on(listener, state).await?;
    Ok(())
}
