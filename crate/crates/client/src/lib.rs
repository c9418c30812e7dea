//! Thin async client for the seechart HTTP service.

use reqwest::{Method, RequestBuilder, StatusCode};
use serde::de::DeserializeOwned;
use serde::Serialize;
use thiserror::Error;

use seechart_core::api::*;
use seechart_core::deconstruct::Deconstruction;
use seechart_core::insights::InsightMessage;
use seechart_core::planner::SummaryPlan;
use seechart_core::query::Answer;
use seechart_core::{ChartSpec, LengthLevel, Summary};

#[derive(Debug, Error)]
pub enum ClientError {
    #[error("request failed: {0}")]
    Transport(#[from] reqwest::Error),
    /// The service answered with an error body.
    #[error("{status} {code}: {message}")]
    Api {
        status: u16,
        code: String,
        message: String,
    },
    #[error("no session yet; register a chart first")]
    NoSession,
}

impl ClientError {
    /// True for errors caused by the request content rather than transport.
    pub fn is_input_error(&self) -> bool {
        matches!(self, ClientError::Api { status, .. } if (400..500).contains(status))
    }
}

pub type Result<T> = std::result::Result<T, ClientError>;

#[derive(Debug, Clone)]
pub struct Client {
    base: String,
    http: reqwest::Client,
    session: Option<String>,
}

impl Client {
    pub fn new(base_url: impl Into<String>) -> Self {
        Self {
            base: base_url.into().trim_end_matches('/').to_string(),
            http: reqwest::Client::new(),
            session: None,
        }
    }

    /// Continue an existing session.
    pub fn with_session(mut self, id: impl Into<String>) -> Self {
        self.session = Some(id.into());
        self
    }

    pub fn session_id(&self) -> Option<&str> {
        self.session.as_deref()
    }

    fn request(&self, method: Method, path: &str) -> RequestBuilder {
        let rb = self.http.request(method, format!("{}{path}", self.base));
        match &self.session {
            Some(s) => rb.header(SESSION_HEADER, s),
            None => rb,
        }
    }

    fn in_session(&self, method: Method, path: &str) -> Result<RequestBuilder> {
        if self.session.is_none() {
            return Err(ClientError::NoSession);
        }
        Ok(self.request(method, path))
    }

    async fn send<T: DeserializeOwned>(rb: RequestBuilder) -> Result<T> {
        let resp = rb.send().await?;
        let status = resp.status();
        if status.is_success() {
            return Ok(resp.json().await?);
        }
        let text = resp.text().await.unwrap_or_default();
        Err(match serde_json::from_str::<ErrorResponse>(&text) {
            Ok(e) => ClientError::Api {
                status: status.as_u16(),
                code: e.error.code,
                message: e.error.message,
            },
            Err(_) => ClientError::Api {
                status: status.as_u16(),
                code: reason(status),
                message: text,
            },
        })
    }

    async fn post<B: Serialize, T: DeserializeOwned>(&self, path: &str, body: &B) -> Result<T> {
        Self::send(self.request(Method::POST, path).json(body)).await
    }

    pub async fn health(&self) -> Result<Health> {
        Self::send(self.request(Method::GET, "/v1/health")).await
    }

    /// `source` is SVG, Vega-Lite JSON or chart JSON text.
    pub async fn deconstruct(&self, source: impl Into<String>) -> Result<Deconstruction> {
        Self::send(
            self.request(Method::POST, "/v1/deconstruct")
                .body(source.into()),
        )
        .await
    }

    pub async fn insights(&self, chart: &ChartSpec) -> Result<Vec<InsightMessage>> {
        let body = ChartRequest {
            chart: chart.clone(),
        };
        let r: InsightsResponse = self.post("/v1/insights", &body).await?;
        Ok(r.messages)
    }

    pub async fn plan(&self, chart: &ChartSpec, level: LengthLevel) -> Result<SummaryPlan> {
        let body = PlanRequest {
            chart: chart.clone(),
            level,
        };
        self.post("/v1/plan", &body).await
    }

    pub async fn summarize(&self, req: &SummarizeRequest) -> Result<Summary> {
        self.post("/v1/summarize", req).await
    }

    pub async fn summarize_selection(&self, req: &SelectionRequest) -> Result<SelectionSummary> {
        self.post("/v1/selection/summarize", req).await
    }

    pub async fn answer(&self, chart: &ChartSpec, query: &str) -> Result<Answer> {
        let body = AnswerRequest {
            chart: chart.clone(),
            query: query.to_string(),
        };
        self.post("/v1/answer", &body).await
    }

    // ---- session endpoints ----------------------------------------------------

    /// Registers a chart, starting a session on first use.
    pub async fn register(&mut self, req: &RegisterRequest) -> Result<Registered> {
        let r: Registered = self.post("/v1/charts", req).await?;
        self.session = Some(r.session_id.clone());
        Ok(r)
    }

    pub async fn session(&self) -> Result<SessionInfo> {
        Self::send(self.in_session(Method::GET, "/v1/session")?).await
    }

    pub async fn chart(&self, id: &str) -> Result<ChartSpec> {
        Self::send(self.in_session(Method::GET, &format!("/v1/charts/{id}"))?).await
    }

    pub async fn title(&self, id: &str) -> Result<String> {
        let r: TextResponse =
            Self::send(self.in_session(Method::GET, &format!("/v1/charts/{id}/title"))?).await?;
        Ok(r.text)
    }

    pub async fn chart_summary(
        &self,
        id: &str,
        level: Option<LengthLevel>,
        seed: Option<u64>,
    ) -> Result<Summary> {
        let mut query: Vec<(&str, String)> = Vec::new();
        if let Some(l) = level {
            query.push(("level", l.to_string()));
        }
        if let Some(s) = seed {
            query.push(("seed", s.to_string()));
        }
        let rb = self
            .in_session(Method::GET, &format!("/v1/charts/{id}/summary"))?
            .query(&query);
        Self::send(rb).await
    }

    pub async fn point(&self, id: &str, series: usize, index: usize) -> Result<String> {
        let rb = self
            .in_session(Method::GET, &format!("/v1/charts/{id}/point"))?
            .query(&[("series", series), ("index", index)]);
        let r: TextResponse = Self::send(rb).await?;
        Ok(r.text)
    }

    pub async fn select(&self, id: &str, req: &ChartSelectionRequest) -> Result<SelectionSummary> {
        let rb = self
            .in_session(
                Method::POST,
                &format!("/v1/charts/{id}/selection/summarize"),
            )?
            .json(req);
        Self::send(rb).await
    }

    pub async fn selection(&self, id: &str) -> Result<CurrentSelection> {
        Self::send(self.in_session(Method::GET, &format!("/v1/charts/{id}/selection"))?).await
    }

    pub async fn clear_selection(&self, id: &str) -> Result<CurrentSelection> {
        Self::send(self.in_session(Method::DELETE, &format!("/v1/charts/{id}/selection"))?).await
    }

    pub async fn ask(&self, id: &str, query: &str) -> Result<Answer> {
        let rb = self
            .in_session(Method::POST, &format!("/v1/charts/{id}/answer"))?
            .json(&serde_json::json!({ "query": query }));
        Self::send(rb).await
    }
}

fn reason(status: StatusCode) -> String {
    status
        .canonical_reason()
        .unwrap_or("error")
        .to_lowercase()
        .replace(' ', "_")
}
