//! HTTP API for the writing-support front end.
//!
//! | route                    | body                                   |
//! |--------------------------|----------------------------------------|
//! | `GET /api/health`        |                                        |
//! | `POST /api/analyze`      | `{"text", "language"?, "scorer_mode"?}`|
//! | `POST /api/survey`       | `{"responses": [{construct,item,rating}]}` |
//! | `GET /api/survey/summary`|                                        |
//!
//! Errors are `{"code", "message", "detail"}` with 400 for malformed bodies,
//! 413 for oversized reviews, 422 for invalid content and 503 when the
//! survey store cannot be written.

mod analyze;
mod remote;
mod store;

use std::collections::HashMap;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Duration;

use axum::body::Bytes;
use axum::extract::State;
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::Router;
use serde::{Deserialize, Serialize};

pub use analyze::{
    AnalyzeRequest, AnalyzeResponse, Analyzer, Rejection, ScorerMode, ScorerProvenance, MAX_TEXT_CHARS,
};
pub use remote::{RemotePrediction, RemoteScorer, DEFAULT_TIMEOUT_MS};
pub use store::SurveyStore;

use crate::analytics::{survey_summary, Construct, SurveyResponse};
use crate::error::{Error, Result};
use crate::feedback::TemplateTable;
use crate::scorer::{Language, RubricConfig};
use crate::segmenter::SegmenterConfig;

pub const DEFAULT_PORT: u16 = 8080;

#[derive(Debug, Clone, PartialEq)]
pub struct ServiceConfig {
    pub port: u16,
    pub scorer_mode: ScorerMode,
    pub remote_endpoint: Option<String>,
    pub remote_timeout_ms: u64,
    /// Rubric config files; each replaces the built-in rubric of its language.
    pub rubric_configs: Vec<PathBuf>,
    pub segmenter_config: Option<PathBuf>,
    pub templates: HashMap<Language, PathBuf>,
    pub survey_store: PathBuf,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        ServiceConfig {
            port: DEFAULT_PORT,
            scorer_mode: ScorerMode::Rubric,
            remote_endpoint: None,
            remote_timeout_ms: DEFAULT_TIMEOUT_MS,
            rubric_configs: Vec::new(),
            segmenter_config: None,
            templates: HashMap::new(),
            survey_store: PathBuf::from("survey.jsonl"),
        }
    }
}

fn read(path: &PathBuf) -> Result<Vec<u8>> {
    std::fs::read(path).map_err(|e| Error::io(path, e))
}

/// Shared handler state.
#[derive(Debug)]
pub struct AppState {
    pub analyzer: Analyzer,
    pub remote: Option<RemoteScorer>,
    pub default_mode: ScorerMode,
    pub store: SurveyStore,
}

impl AppState {
    pub fn new(analyzer: Analyzer, store: SurveyStore) -> AppState {
        AppState { analyzer, remote: None, default_mode: ScorerMode::Rubric, store }
    }

    pub fn with_remote(mut self, remote: RemoteScorer) -> AppState {
        self.remote = Some(remote);
        self
    }

    pub fn with_default_mode(mut self, mode: ScorerMode) -> AppState {
        self.default_mode = mode;
        self
    }

    /// Loads every configured file. Fails on the first unreadable or invalid one.
    pub fn from_config(config: &ServiceConfig) -> Result<AppState> {
        let segmenter = match &config.segmenter_config {
            Some(p) => SegmenterConfig::from_json(&read(p)?)?,
            None => SegmenterConfig::default(),
        };
        let rubrics = config
            .rubric_configs
            .iter()
            .map(|p| RubricConfig::from_json(&read(p)?))
            .collect::<Result<Vec<_>>>()?;
        let templates = config
            .templates
            .iter()
            .map(|(lang, p)| Ok((*lang, TemplateTable::from_json(&read(p)?)?)))
            .collect::<Result<HashMap<_, _>>>()?;
        let remote = config
            .remote_endpoint
            .as_ref()
            .map(|url| RemoteScorer::new(url.clone(), Duration::from_millis(config.remote_timeout_ms)))
            .transpose()?;
        Ok(AppState {
            analyzer: Analyzer::new(&segmenter, rubrics, templates)?,
            remote,
            default_mode: config.scorer_mode,
            store: SurveyStore::new(&config.survey_store),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApiError {
    #[serde(skip)]
    pub status: u16,
    pub code: String,
    pub message: String,
    pub detail: Option<String>,
}

impl ApiError {
    fn new(status: StatusCode, code: &str, message: impl Into<String>, detail: Option<String>) -> ApiError {
        ApiError { status: status.as_u16(), code: code.into(), message: message.into(), detail }
    }

    fn bad_request(detail: impl ToString) -> ApiError {
        ApiError::new(StatusCode::BAD_REQUEST, "bad_request", "request body is not valid JSON of the expected shape", Some(detail.to_string()))
    }

    fn unprocessable(code: &str, message: impl Into<String>, detail: Option<String>) -> ApiError {
        ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, code, message, detail)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let status = StatusCode::from_u16(self.status).unwrap_or(StatusCode::INTERNAL_SERVER_ERROR);
        json_response(status, &self)
    }
}

fn json_response<T: Serialize>(status: StatusCode, value: &T) -> Response {
    let body = serde_json::to_vec(value).expect("response serializes");
    (status, [(header::CONTENT_TYPE, "application/json")], body).into_response()
}

fn parse_body<T: serde::de::DeserializeOwned>(body: &Bytes) -> std::result::Result<T, ApiError> {
    serde_json::from_slice(body).map_err(ApiError::bad_request)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Health {
    pub status: String,
    pub version: String,
}

async fn health() -> Response {
    json_response(
        StatusCode::OK,
        &Health { status: "ok".into(), version: env!("CARGO_PKG_VERSION").into() },
    )
}

async fn analyze(State(state): State<Arc<AppState>>, body: Bytes) -> std::result::Result<Response, ApiError> {
    let request: AnalyzeRequest = parse_body(&body)?;
    match Analyzer::check(&request.text) {
        Ok(()) => {}
        Err(Rejection::EmptyText) => {
            return Err(ApiError::unprocessable("empty_text", "review text is empty", None));
        }
        Err(Rejection::TooLong(n)) => {
            return Err(ApiError::new(
                StatusCode::PAYLOAD_TOO_LARGE,
                "text_too_long",
                format!("review text exceeds {MAX_TEXT_CHARS} characters"),
                Some(format!("{n} characters")),
            ));
        }
    }
    let response = state
        .analyzer
        .handle(&request, state.remote.as_ref(), state.default_mode)
        .await
        .map_err(|e| ApiError::unprocessable("analysis_failed", "review could not be analyzed", Some(e.to_string())))?;
    Ok(json_response(StatusCode::OK, &response))
}

/// A survey answer before range checking; ratings arrive as arbitrary integers.
#[derive(Debug, Clone, Deserialize)]
struct RawResponse {
    construct: Construct,
    item: String,
    rating: i64,
}

#[derive(Debug, Clone, Deserialize)]
struct SurveyBatch {
    responses: Vec<RawResponse>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurveyAck {
    /// Responses accepted from this batch.
    pub stored: usize,
    /// Responses in the store after this batch.
    pub total: usize,
}

async fn survey(State(state): State<Arc<AppState>>, body: Bytes) -> std::result::Result<Response, ApiError> {
    let batch: SurveyBatch = parse_body(&body)?;
    if batch.responses.is_empty() {
        return Err(ApiError::unprocessable("empty_batch", "no survey responses submitted", None));
    }
    let responses = batch
        .responses
        .into_iter()
        .map(|r| {
            let response =
                SurveyResponse { construct: r.construct, item: r.item, rating: u8::try_from(r.rating).unwrap_or(0) };
            match response.validate() {
                Ok(()) => Ok(response),
                Err(_) => Err(ApiError::unprocessable(
                    "invalid_rating",
                    "ratings must be integers from 1 to 7",
                    Some(format!("item `{}` rated {}", response.item, r.rating)),
                )),
            }
        })
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let total = state.store.append(&responses).map_err(|e| {
        ApiError::new(StatusCode::SERVICE_UNAVAILABLE, "storage_unavailable", "survey responses could not be stored", Some(e.to_string()))
    })?;
    Ok(json_response(StatusCode::OK, &SurveyAck { stored: responses.len(), total }))
}

async fn survey_summary_handler(State(state): State<Arc<AppState>>) -> std::result::Result<Response, ApiError> {
    let responses = state.store.read_all().map_err(|e| {
        ApiError::new(StatusCode::SERVICE_UNAVAILABLE, "storage_unavailable", "survey responses could not be read", Some(e.to_string()))
    })?;
    Ok(json_response(StatusCode::OK, &survey_summary(&responses)))
}

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/api/health", get(health))
        .route("/api/analyze", post(analyze))
        .route("/api/survey", post(survey))
        .route("/api/survey/summary", get(survey_summary_handler))
        .with_state(state)
}

/// Binds `0.0.0.0:port` and serves until the process is stopped.
pub async fn serve(config: &ServiceConfig) -> Result<()> {
    let state = Arc::new(AppState::from_config(config)?);
    let addr = std::net::SocketAddr::from(([0, 0, 0, 0], config.port));
    let listener = tokio::net::TcpListener::bind(addr).await.map_err(|e| Error::io(addr.to_string(), e))?;
    axum::serve(listener, router(state)).await.map_err(|e| Error::io(addr.to_string(), e))
}
