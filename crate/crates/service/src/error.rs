use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use seechart_core::api::{ErrorBody, ErrorResponse};
use seechart_core::error::{DeconstructError, ModelError, QueryError, RealizeError};
use seechart_core::Error;
use thiserror::Error;

/// Everything a handler can fail with, mapped onto a status and a stable
/// machine-readable code.
#[derive(Debug, Error)]
pub enum ApiError {
    #[error("malformed request body: {0}")]
    BadBody(String),
    #[error("bad query parameter: {0}")]
    BadParam(String),
    #[error("missing {0} header")]
    MissingSession(&'static str),
    #[error("unknown session {0:?}")]
    UnknownSession(String),
    #[error("unknown chart {0:?}")]
    UnknownChart(String),
    #[error("no route for {0}")]
    NoRoute(String),
    #[error(transparent)]
    Pipeline(#[from] Error),
}

impl From<DeconstructError> for ApiError {
    fn from(e: DeconstructError) -> Self {
        ApiError::Pipeline(e.into())
    }
}

impl From<QueryError> for ApiError {
    fn from(e: QueryError) -> Self {
        ApiError::Pipeline(e.into())
    }
}

impl From<RealizeError> for ApiError {
    fn from(e: RealizeError) -> Self {
        ApiError::Pipeline(e.into())
    }
}

impl ApiError {
    pub fn status(&self) -> StatusCode {
        match self {
            ApiError::BadBody(_) | ApiError::BadParam(_) | ApiError::MissingSession(_) => {
                StatusCode::BAD_REQUEST
            }
            ApiError::UnknownSession(_) | ApiError::UnknownChart(_) | ApiError::NoRoute(_) => {
                StatusCode::NOT_FOUND
            }
            ApiError::Pipeline(e) => match e {
                Error::Model(ModelError::Parse { .. }) => StatusCode::BAD_REQUEST,
                Error::Deconstruct(
                    DeconstructError::MalformedSvg(_) | DeconstructError::MalformedSpec(_),
                ) => StatusCode::BAD_REQUEST,
                Error::Realize(RealizeError::IndexOutOfBounds { .. }) => StatusCode::NOT_FOUND,
                Error::Template(_) | Error::Realize(_) => StatusCode::INTERNAL_SERVER_ERROR,
                _ => StatusCode::UNPROCESSABLE_ENTITY,
            },
        }
    }

    pub fn code(&self) -> &'static str {
        match self {
            ApiError::BadBody(_) => "malformed_body",
            ApiError::BadParam(_) => "bad_parameter",
            ApiError::MissingSession(_) => "missing_session",
            ApiError::UnknownSession(_) => "unknown_session",
            ApiError::UnknownChart(_) => "unknown_chart",
            ApiError::NoRoute(_) => "no_route",
            ApiError::Pipeline(e) => error_code(e),
        }
    }
}

/// Stable identifiers shared with the CLI's error output.
pub fn error_code(e: &Error) -> &'static str {
    match e {
        Error::Model(ModelError::Parse { .. }) => "malformed_chart",
        Error::Model(ModelError::Invalid(_)) => "invalid_chart",
        Error::Deconstruct(d) => match d {
            DeconstructError::MalformedSvg(_) => "malformed_svg",
            DeconstructError::NoChartFound(_) => "no_chart_found",
            DeconstructError::UnreadableAxis(_) => "unreadable_axis",
            DeconstructError::InconsistentSeries(_) => "inconsistent_series",
            DeconstructError::ScaleMismatch { .. } => "scale_mismatch",
            DeconstructError::UnsupportedMark(_) => "unsupported_mark",
            DeconstructError::MissingData(_) => "missing_data",
            DeconstructError::MalformedSpec(_) => "malformed_spec",
        },
        Error::Insight(_) => "insight_error",
        Error::Plan(_) => "plan_error",
        Error::Template(_) => "template_error",
        Error::Realize(RealizeError::IndexOutOfBounds { .. }) => "index_out_of_bounds",
        Error::Realize(_) => "realize_error",
        Error::Query(q) => match q {
            QueryError::EmptySelection => "empty_selection",
            QueryError::InvalidSelection(_) => "invalid_selection",
            QueryError::LabelNotFound(_) => "label_not_found",
        },
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = ErrorResponse {
            error: ErrorBody {
                code: self.code().to_string(),
                message: self.to_string(),
            },
        };
        (self.status(), Json(body)).into_response()
    }
}
