//! HTTP surface over the nl2vis pipeline: dataset upload, metadata edits,
//! and query analysis with optional dialog sessions.

use std::collections::HashMap;
use std::path::Path;
use std::sync::{Arc, Mutex, RwLock};
use std::time::{Duration, Instant};

use axum::extract::{DefaultBodyLimit, FromRequest, Multipart, Path as UrlPath, Query, Request, State};
use axum::http::{header, HeaderMap, HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, patch, post};
use axum::{Json, Router};
use indexmap::IndexMap;
use nl2vis::attr::ResolutionOverrides;
use nl2vis::ingest::{AttrType, SourceFormat};
use nl2vis::{
    infer_metadata, load_dataset, serialize, set_alias_map, set_attribute_type, AnalyzeOptions, Analyzer, Config,
    SessionContext,
};
use serde::Deserialize;
use serde_json::json;
use sha2::{Digest, Sha256};

/// Header carrying the dialog session a response belongs to.
pub const SESSION_HEADER: &str = "x-session-id";

#[derive(Debug, thiserror::Error)]
pub enum ApiError {
    #[error("{0}")]
    BadRequest(String),
    #[error("{0}")]
    NotFound(String),
    #[error("{0}")]
    Conflict(String),
    #[error("{0}")]
    Unprocessable(String),
    #[error("upload exceeds {0} bytes")]
    TooLarge(usize),
    #[error("{0}")]
    Internal(String),
}

impl ApiError {
    pub fn status(&self) -> StatusCode {
        match self {
            Self::BadRequest(_) => StatusCode::BAD_REQUEST,
            Self::NotFound(_) => StatusCode::NOT_FOUND,
            Self::Conflict(_) => StatusCode::CONFLICT,
            Self::Unprocessable(_) => StatusCode::UNPROCESSABLE_ENTITY,
            Self::TooLarge(_) => StatusCode::PAYLOAD_TOO_LARGE,
            Self::Internal(_) => StatusCode::INTERNAL_SERVER_ERROR,
        }
    }
}

impl From<nl2vis::Error> for ApiError {
    fn from(e: nl2vis::Error) -> Self {
        use nl2vis::Error as E;
        let msg = e.to_string();
        match e {
            E::Format { .. } | E::Json(_) | E::Io(_) => Self::BadRequest(msg),
            E::Key(_) => Self::NotFound(msg),
            E::TypeCoercion { .. } | E::AliasConflict { .. } => Self::Conflict(msg),
            E::EmptyQuery | E::InvalidOverride(_) | E::NoVisualization => Self::Unprocessable(msg),
            E::Config(_) | E::Resource { .. } | E::Contract(_) => Self::Internal(msg),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status(), Json(json!({ "error": self.to_string() }))).into_response()
    }
}

type ApiResult<T> = Result<T, ApiError>;

#[derive(Debug, Clone)]
pub struct ServiceConfig {
    pub analyzer: Config,
    pub session_ttl: Duration,
    pub max_upload_bytes: usize,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        Self {
            analyzer: Config::default(),
            session_ttl: Duration::from_secs(30 * 60),
            max_upload_bytes: 25 * 1024 * 1024,
        }
    }
}

struct Session {
    dataset_id: String,
    context: SessionContext,
    last_used: Instant,
}

struct Inner {
    config: ServiceConfig,
    datasets: RwLock<IndexMap<String, Arc<Analyzer>>>,
    sessions: Mutex<HashMap<String, Arc<tokio::sync::Mutex<Session>>>>,
    http: reqwest::Client,
}

/// Shared service state. Cloning is cheap.
#[derive(Clone)]
pub struct AppState(Arc<Inner>);

impl AppState {
    pub fn new(config: ServiceConfig) -> Self {
        Self(Arc::new(Inner {
            config,
            datasets: RwLock::new(IndexMap::new()),
            sessions: Mutex::new(HashMap::new()),
            http: reqwest::Client::new(),
        }))
    }

    /// Register a dataset from raw bytes. The id is derived from the content,
    /// so re-uploading the same file returns the same id.
    pub fn add_dataset(&self, name: &str, bytes: &[u8], format: SourceFormat) -> ApiResult<(String, Arc<Analyzer>)> {
        let id = hex::encode(&Sha256::digest(bytes)[..8]);
        if let Some(existing) = self.dataset(&id) {
            return Ok((id, existing));
        }
        let dataset = load_dataset(bytes, format).map_err(|e| ApiError::BadRequest(e.to_string()))?;
        let profile = infer_metadata(dataset).map_err(|e| ApiError::BadRequest(e.to_string()))?;
        let analyzer = Analyzer::new(profile, self.0.config.analyzer.clone())
            .map_err(ApiError::from)?
            .with_data_name(name);
        let analyzer = Arc::new(analyzer);
        self.0.datasets.write().expect("dataset lock").insert(id.clone(), Arc::clone(&analyzer));
        Ok((id, analyzer))
    }

    pub fn add_dataset_path(&self, name: &str, path: &Path) -> ApiResult<String> {
        let bytes = std::fs::read(path).map_err(|e| ApiError::BadRequest(format!("{}: {e}", path.display())))?;
        let format = SourceFormat::from_path(path).unwrap_or_else(|| sniff_format(&bytes));
        Ok(self.add_dataset(name, &bytes, format)?.0)
    }

    pub fn dataset(&self, id: &str) -> Option<Arc<Analyzer>> {
        self.0.datasets.read().expect("dataset lock").get(id).cloned()
    }

    fn require(&self, id: &str) -> ApiResult<Arc<Analyzer>> {
        self.dataset(id).ok_or_else(|| ApiError::NotFound(format!("unknown dataset `{id}`")))
    }

    fn replace_dataset(&self, id: &str, analyzer: Analyzer) {
        self.0.datasets.write().expect("dataset lock").insert(id.to_string(), Arc::new(analyzer));
        // Dialog lineage built on the old metadata no longer applies.
        self.0
            .sessions
            .lock()
            .expect("session lock")
            .retain(|_, s| s.try_lock().map_or(true, |s| s.dataset_id != id));
    }

    /// Drop sessions idle for longer than the configured time.
    pub fn prune_sessions(&self) {
        let ttl = self.0.config.session_ttl;
        self.0
            .sessions
            .lock()
            .expect("session lock")
            .retain(|_, s| s.try_lock().map_or(true, |s| s.last_used.elapsed() <= ttl));
    }

    pub fn session_count(&self) -> usize {
        self.0.sessions.lock().expect("session lock").len()
    }

    fn session(&self, id: &str, dataset_id: &str) -> Arc<tokio::sync::Mutex<Session>> {
        self.prune_sessions();
        let mut sessions = self.0.sessions.lock().expect("session lock");
        Arc::clone(sessions.entry(id.to_string()).or_insert_with(|| {
            Arc::new(tokio::sync::Mutex::new(Session {
                dataset_id: dataset_id.to_string(),
                context: SessionContext::new(dataset_id),
                last_used: Instant::now(),
            }))
        }))
    }
}

/// Guess a format from content when no name or explicit format is given.
fn sniff_format(bytes: &[u8]) -> SourceFormat {
    let text = String::from_utf8_lossy(&bytes[..bytes.len().min(4096)]);
    let trimmed = text.trim_start();
    if trimmed.starts_with('[') || trimmed.starts_with('{') {
        SourceFormat::Json
    } else if trimmed.lines().next().is_some_and(|l| l.contains('\t')) {
        SourceFormat::Tsv
    } else {
        SourceFormat::Csv
    }
}

fn name_and_format(file_name: Option<&str>, format: Option<&str>, bytes: &[u8]) -> ApiResult<(String, SourceFormat)> {
    let path = Path::new(file_name.unwrap_or("data"));
    let name = path
        .file_stem()
        .and_then(|s| s.to_str())
        .filter(|s| !s.is_empty())
        .unwrap_or("data")
        .to_string();
    let format = match format {
        Some(f) => f.parse().map_err(|e: nl2vis::Error| ApiError::BadRequest(e.to_string()))?,
        None => SourceFormat::from_path(path).unwrap_or_else(|| sniff_format(bytes)),
    };
    Ok((name, format))
}

pub fn router(state: AppState) -> Router {
    let limit = state.0.config.max_upload_bytes;
    Router::new()
        .route("/datasets", post(upload_dataset).get(list_datasets))
        .route("/datasets/{id}/metadata", get(dataset_metadata))
        .route("/datasets/{id}/attributes/{name}", patch(patch_attribute))
        .route("/datasets/{id}/rows", get(dataset_rows))
        .route("/analyzeQuery", post(analyze_query))
        // Multipart framing needs a little room above the file itself.
        .layer(DefaultBodyLimit::max(limit + 64 * 1024))
        .with_state(state)
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "camelCase")]
struct UrlUpload {
    url: String,
    format: Option<String>,
    name: Option<String>,
}

async fn upload_dataset(State(state): State<AppState>, request: Request) -> ApiResult<Response> {
    let limit = state.0.config.max_upload_bytes;
    let content_type = request
        .headers()
        .get(header::CONTENT_TYPE)
        .and_then(|v| v.to_str().ok())
        .unwrap_or("")
        .to_string();

    let (file_name, format, bytes) = if content_type.starts_with("multipart/form-data") {
        let mut multipart = Multipart::from_request(request, &state)
            .await
            .map_err(|e| ApiError::BadRequest(e.to_string()))?;
        let mut file: Option<(Option<String>, Vec<u8>)> = None;
        let mut format = None;
        let mut url = None;
        while let Some(field) = multipart.next_field().await.map_err(multipart_error)? {
            match field.name().unwrap_or("") {
                "file" => {
                    let name = field.file_name().map(str::to_string);
                    let data = field.bytes().await.map_err(multipart_error)?;
                    file = Some((name, data.to_vec()));
                }
                "format" => format = Some(field.text().await.map_err(multipart_error)?),
                "url" => url = Some(field.text().await.map_err(multipart_error)?),
                _ => {}
            }
        }
        match (file, url) {
            (Some((name, data)), _) => (name, format, data),
            (None, Some(url)) => {
                let data = fetch(&state, &url, limit).await?;
                (url_file_name(&url), format, data)
            }
            (None, None) => return Err(ApiError::BadRequest("expected a `file` or `url` field".into())),
        }
    } else {
        let Json(body) = Json::<UrlUpload>::from_request(request, &state)
            .await
            .map_err(|e| ApiError::BadRequest(e.body_text()))?;
        let data = fetch(&state, &body.url, limit).await?;
        let name = body.name.or_else(|| url_file_name(&body.url));
        (name, body.format, data)
    };

    if bytes.len() > limit {
        return Err(ApiError::TooLarge(limit));
    }
    let (name, format) = name_and_format(file_name.as_deref(), format.as_deref(), &bytes)?;
    let (id, analyzer) = tokio::task::spawn_blocking({
        let state = state.clone();
        move || state.add_dataset(&name, &bytes, format)
    })
    .await
    .map_err(|e| ApiError::Internal(e.to_string()))??;
    let body = json!({
        "datasetId": id,
        "name": analyzer.data_name(),
        "metadata": analyzer.profile(),
    });
    Ok((StatusCode::CREATED, Json(body)).into_response())
}

fn multipart_error(e: axum::extract::multipart::MultipartError) -> ApiError {
    if e.status() == StatusCode::PAYLOAD_TOO_LARGE {
        ApiError::BadRequest(format!("upload too large: {}", e.body_text()))
    } else {
        ApiError::BadRequest(e.body_text())
    }
}

fn url_file_name(url: &str) -> Option<String> {
    let path = url.split(['?', '#']).next()?;
    path.rsplit('/').next().filter(|s| !s.is_empty()).map(str::to_string)
}

async fn fetch(state: &AppState, url: &str, limit: usize) -> ApiResult<Vec<u8>> {
    let mut response = state
        .0
        .http
        .get(url)
        .send()
        .await
        .and_then(reqwest::Response::error_for_status)
        .map_err(|e| ApiError::BadRequest(format!("cannot fetch {url}: {e}")))?;
    let mut data = Vec::new();
    while let Some(chunk) = response
        .chunk()
        .await
        .map_err(|e| ApiError::BadRequest(format!("cannot fetch {url}: {e}")))?
    {
        data.extend_from_slice(&chunk);
        if data.len() > limit {
            return Err(ApiError::TooLarge(limit));
        }
    }
    Ok(data)
}

async fn list_datasets(State(state): State<AppState>) -> Json<serde_json::Value> {
    let datasets = state.0.datasets.read().expect("dataset lock");
    let list: Vec<_> = datasets
        .iter()
        .map(|(id, a)| json!({ "datasetId": id, "name": a.data_name(), "rowCount": a.profile().row_count() }))
        .collect();
    Json(json!(list))
}

async fn dataset_metadata(State(state): State<AppState>, UrlPath(id): UrlPath<String>) -> ApiResult<Response> {
    let analyzer = state.require(&id)?;
    Ok(Json(analyzer.profile()).into_response())
}

#[derive(Debug, Deserialize)]
struct AttributePatch {
    #[serde(rename = "type")]
    attr_type: Option<AttrType>,
    aliases: Option<Vec<String>>,
}

async fn patch_attribute(
    State(state): State<AppState>,
    UrlPath((id, name)): UrlPath<(String, String)>,
    body: Result<Json<AttributePatch>, axum::extract::rejection::JsonRejection>,
) -> ApiResult<Response> {
    let analyzer = state.require(&id)?;
    let Json(patch) = body.map_err(|e| ApiError::BadRequest(e.body_text()))?;
    if patch.attr_type.is_none() && patch.aliases.is_none() {
        return Err(ApiError::BadRequest("expected `type` or `aliases`".into()));
    }
    let mut profile = analyzer.profile().clone();
    if profile.attribute(&name).is_none() {
        return Err(ApiError::NotFound(format!("unknown attribute `{name}`")));
    }
    if let Some(t) = patch.attr_type {
        profile = set_attribute_type(&profile, &name, t)?;
    }
    if let Some(aliases) = patch.aliases {
        let mut map = IndexMap::new();
        map.insert(name.clone(), aliases);
        profile = set_alias_map(&profile, &map)?;
    }
    let config = analyzer.config().clone();
    let data_name = analyzer.data_name().to_string();
    let updated = tokio::task::spawn_blocking(move || Analyzer::new(profile, config).map(|a| a.with_data_name(data_name)))
        .await
        .map_err(|e| ApiError::Internal(e.to_string()))??;
    let body = serde_json::to_value(updated.profile()).map_err(|e| ApiError::Internal(e.to_string()))?;
    state.replace_dataset(&id, updated);
    Ok(Json(body).into_response())
}

#[derive(Debug, Deserialize)]
struct RowsQuery {
    limit: Option<usize>,
}

async fn dataset_rows(
    State(state): State<AppState>,
    UrlPath(id): UrlPath<String>,
    Query(q): Query<RowsQuery>,
) -> ApiResult<Response> {
    let analyzer = state.require(&id)?;
    Ok(Json(analyzer.profile().records_json(q.limit)).into_response())
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct AnalyzeRequest {
    pub dataset_id: String,
    pub query: String,
    #[serde(default)]
    pub dialog: bool,
    #[serde(default)]
    pub debug: bool,
    #[serde(default)]
    pub overrides: Option<ResolutionOverrides>,
    #[serde(default)]
    pub session_id: Option<String>,
}

async fn analyze_query(
    State(state): State<AppState>,
    body: Result<Json<AnalyzeRequest>, axum::extract::rejection::JsonRejection>,
) -> ApiResult<Response> {
    let Json(req) = body.map_err(|e| ApiError::BadRequest(e.body_text()))?;
    let analyzer = state.require(&req.dataset_id)?;
    if req.query.trim().is_empty() {
        return Err(nl2vis::Error::EmptyQuery.into());
    }
    let opts = AnalyzeOptions {
        dialog: req.dialog,
        debug: req.debug,
        overrides: req.overrides,
    };

    // A dialog request without a session starts one.
    let session_id = req
        .session_id
        .or_else(|| req.dialog.then(|| uuid::Uuid::new_v4().to_string()));
    let text = match &session_id {
        None => tokio::task::spawn_blocking(move || {
            let mut ctx = SessionContext::new(&req.dataset_id);
            analyzer.analyze(&req.query, &opts, &mut ctx).map(|s| serialize(&s))
        })
        .await
        .map_err(|e| ApiError::Internal(e.to_string()))??,
        Some(sid) => {
            let mut session = state.session(sid, &req.dataset_id).lock_owned().await;
            tokio::task::spawn_blocking(move || {
                if session.dataset_id != req.dataset_id {
                    session.dataset_id = req.dataset_id.clone();
                    session.context = SessionContext::new(&req.dataset_id);
                }
                session.last_used = Instant::now();
                analyzer.analyze(&req.query, &opts, &mut session.context).map(|s| serialize(&s))
            })
            .await
            .map_err(|e| ApiError::Internal(e.to_string()))??
        }
    };

    let mut headers = HeaderMap::new();
    headers.insert(header::CONTENT_TYPE, HeaderValue::from_static("application/json"));
    if let Some(sid) = session_id.and_then(|s| HeaderValue::from_str(&s).ok()) {
        headers.insert(SESSION_HEADER, sid);
    }
    Ok((headers, text).into_response())
}
