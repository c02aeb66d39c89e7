//! HTTP facade serving one loaded model to the configurator UI.
//!
//! | method | path | body | response |
//! |---|---|---|---|
//! | GET | `/api/model` | | document |
//! | POST | `/api/model` | document | `{revision, diagnostics}` |
//! | GET | `/api/fp/analysis` | | `{count, dead, void}` |
//! | GET | `/api/fp/decisions` | | `{revision, decisions, forcedIn, forcedOut, remaining, conflict?}` |
//! | POST | `/api/fp/decisions` | `{id, state}` or `{id, clear: true}` or `{clear: true}` | as GET |
//! | POST | `/api/sp/resolve` | `{blockId, selections}` | effective block |
//! | GET | `/api/trace/report` | | trace report |
//!
//! Every response carries the session revision in `ETag`. POST requests may
//! send `If-Match: <revision>`; a stale revision is answered with 409.

use std::collections::{BTreeMap, BTreeSet};
use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::{Arc, RwLock};

use axum::body::Bytes;
use axum::extract::State;
use axum::http::header::{ETAG, IF_MATCH};
use axum::http::{HeaderMap, HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use imog_core::fp::{self, Decision, EnumerationCap, FpError, PropagationResult};
use imog_core::sp::{resolve_effective_block, SelectionState, SpError};
use imog_core::trace::build_trace_report;
use imog_core::*;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use tower_http::cors::{Any, CorsLayer};
use tower_http::services::ServeDir;

use crate::io::{document_value, parse_document, serialize_document};

#[derive(Debug, Clone, Default)]
pub struct ServiceConfig {
    /// File written by `POST /api/model`. Nothing is saved without it.
    pub path: Option<PathBuf>,
    /// Abstraction levels the functional analyses run on; empty means all.
    pub levels: BTreeSet<AbstractionLevel>,
    pub groups: bool,
    pub cap: EnumerationCap,
    pub ui_dir: Option<PathBuf>,
}

/// Immutable snapshot; every write installs a new one.
#[derive(Debug, Clone)]
pub struct Session {
    pub model: Arc<Model>,
    pub decisions: BTreeMap<ElementId, Decision>,
    pub selections: SelectionState,
    pub revision: u64,
}

#[derive(Clone)]
pub struct AppState {
    shared: Arc<Shared>,
}

struct Shared {
    config: ServiceConfig,
    session: RwLock<Arc<Session>>,
    writes: tokio::sync::Mutex<()>,
}

impl AppState {
    pub fn new(model: Model, config: ServiceConfig) -> Self {
        let session = Session {
            model: Arc::new(model),
            decisions: BTreeMap::new(),
            selections: SelectionState::default(),
            revision: 0,
        };
        AppState {
            shared: Arc::new(Shared {
                config,
                session: RwLock::new(Arc::new(session)),
                writes: tokio::sync::Mutex::new(()),
            }),
        }
    }

    pub fn snapshot(&self) -> Arc<Session> {
        self.shared.session.read().expect("session lock").clone()
    }

    fn install(&self, session: Session) {
        *self.shared.session.write().expect("session lock") = Arc::new(session);
    }

    fn config(&self) -> &ServiceConfig {
        &self.shared.config
    }
}

pub fn router(state: AppState) -> Router {
    let cors = CorsLayer::new()
        .allow_origin(Any)
        .allow_methods(Any)
        .allow_headers(Any)
        .expose_headers([ETAG]);
    let api = Router::new()
        .route("/api/model", get(get_model).post(post_model))
        .route("/api/fp/analysis", get(get_analysis))
        .route("/api/fp/decisions", get(get_decisions).post(post_decision))
        .route("/api/sp/resolve", post(post_resolve))
        .route("/api/trace/report", get(get_trace));
    let app = match &state.config().ui_dir {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api,
    };
    app.layer(cors).with_state(state)
}

pub async fn serve(model: Model, config: ServiceConfig, bind: SocketAddr) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(bind).await?;
    eprintln!("imog: serving on http://{}", listener.local_addr()?);
    axum::serve(listener, router(AppState::new(model, config))).await
}

#[derive(Debug, Serialize)]
struct ApiError {
    #[serde(skip)]
    status: StatusCode,
    error: &'static str,
    message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    detail: Option<serde_json::Value>,
}

impl ApiError {
    fn new(status: StatusCode, error: &'static str, message: impl Into<String>) -> Self {
        ApiError { status, error, message: message.into(), detail: None }
    }

    fn with_detail(mut self, detail: impl Serialize) -> Self {
        self.detail = serde_json::to_value(detail).ok();
        self
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(&self)).into_response()
    }
}

type ApiResult = Result<Response, ApiError>;

fn reply(revision: u64, body: impl Serialize) -> Response {
    let mut response = Json(body).into_response();
    if let Ok(v) = HeaderValue::from_str(&format!("\"{revision}\"")) {
        response.headers_mut().insert(ETAG, v);
    }
    response
}

fn body<T: DeserializeOwned>(bytes: &Bytes) -> Result<T, ApiError> {
    let de = &mut serde_json::Deserializer::from_slice(bytes);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        ApiError::new(StatusCode::BAD_REQUEST, "schema", format!("at `{path}`: {}", e.inner()))
    })
}

fn check_revision(headers: &HeaderMap, current: u64) -> Result<(), ApiError> {
    let Some(value) = headers.get(IF_MATCH) else { return Ok(()) };
    let text = value.to_str().unwrap_or("").trim();
    if text == "*" {
        return Ok(());
    }
    let wanted: u64 = text
        .trim_start_matches("W/")
        .trim_matches('"')
        .parse()
        .map_err(|_| ApiError::new(StatusCode::BAD_REQUEST, "schema", format!("If-Match `{text}` is not a revision")))?;
    if wanted == current {
        Ok(())
    } else {
        Err(ApiError::new(
            StatusCode::CONFLICT,
            "revisionMismatch",
            format!("revision {wanted} is stale; current revision is {current}"),
        ))
    }
}

fn fp_error(e: FpError) -> ApiError {
    match e {
        FpError::UnknownId(id) => ApiError::new(StatusCode::NOT_FOUND, "unknownId", format!("unknown functional block `{id}`")),
        e @ FpError::CapExceeded { .. } => ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, "capExceeded", e.to_string()),
    }
}

fn analysis_tree(state: &AppState, model: &Model) -> fp::BasicFeatureTree {
    let config = state.config();
    match filter_by_abstraction_level(model, &config.levels) {
        Ok(view) => fp::normalize(&view.to_model(), config.groups),
        Err(_) => fp::normalize(model, config.groups),
    }
}

async fn get_model(State(state): State<AppState>) -> Response {
    let s = state.snapshot();
    reply(s.revision, document_value(&s.model))
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ModelReplaced {
    pub revision: u64,
    pub diagnostics: Vec<Diagnostic>,
}

async fn post_model(State(state): State<AppState>, headers: HeaderMap, bytes: Bytes) -> ApiResult {
    let text = std::str::from_utf8(&bytes)
        .map_err(|_| ApiError::new(StatusCode::BAD_REQUEST, "syntax", "body is not UTF-8"))?;
    let model = parse_document(text)
        .map_err(|e| ApiError::new(StatusCode::BAD_REQUEST, "parse", e.to_string()).with_detail(&e))?;
    let diagnostics = validate_model(&model);
    if diagnostics.iter().any(Diagnostic::is_error) {
        return Err(ApiError::new(StatusCode::BAD_REQUEST, "invalidModel", "the document has error diagnostics")
            .with_detail(&diagnostics));
    }
    let _guard = state.shared.writes.lock().await;
    let current = state.snapshot();
    check_revision(&headers, current.revision)?;
    if let Some(path) = &state.config().path {
        let text = serialize_document(&model).map_err(|e| {
            ApiError::new(StatusCode::BAD_REQUEST, "invalidModel", e.to_string())
        })?;
        std::fs::write(path, text).map_err(|e| {
            ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "io", format!("{}: {e}", path.display()))
        })?;
    }
    let revision = current.revision + 1;
    state.install(Session {
        model: Arc::new(model),
        decisions: BTreeMap::new(),
        selections: SelectionState::default(),
        revision,
    });
    Ok(reply(revision, ModelReplaced { revision, diagnostics }))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Analysis {
    pub count: u64,
    pub dead: BTreeSet<ElementId>,
    pub void: bool,
}

async fn get_analysis(State(state): State<AppState>) -> ApiResult {
    let s = state.snapshot();
    let tree = analysis_tree(&state, &s.model);
    let cap = state.config().cap;
    let void = fp::is_void(&tree);
    let count = fp::count_configurations(&tree, &cap).map_err(fp_error)?.count;
    let dead = fp::dead_blocks(&tree, &cap).map_err(fp_error)?;
    Ok(reply(s.revision, Analysis { count, dead, void }))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DecisionState {
    pub revision: u64,
    /// Decisions in force after the request. A conflicting request leaves
    /// them unchanged.
    pub decisions: BTreeMap<ElementId, Decision>,
    #[serde(flatten)]
    pub result: PropagationResult,
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct DecisionRequest {
    #[serde(default)]
    id: Option<ElementId>,
    #[serde(default)]
    state: Option<Decision>,
    #[serde(default)]
    clear: bool,
}

async fn get_decisions(State(state): State<AppState>) -> ApiResult {
    let s = state.snapshot();
    let tree = analysis_tree(&state, &s.model);
    let result = fp::propagate(&tree, &s.decisions, &state.config().cap).map_err(fp_error)?;
    Ok(reply(s.revision, DecisionState { revision: s.revision, decisions: s.decisions.clone(), result }))
}

async fn post_decision(State(state): State<AppState>, headers: HeaderMap, bytes: Bytes) -> ApiResult {
    let req: DecisionRequest = body(&bytes)?;
    let _guard = state.shared.writes.lock().await;
    let s = state.snapshot();
    check_revision(&headers, s.revision)?;
    let tree = analysis_tree(&state, &s.model);
    let mut decisions = s.decisions.clone();
    match (req.id, req.state, req.clear) {
        (Some(id), Some(d), false) => {
            if tree.index_of(id.as_str()).is_none() {
                return Err(fp_error(FpError::UnknownId(id)));
            }
            decisions.insert(id, d);
        }
        (Some(id), None, true) => {
            if tree.index_of(id.as_str()).is_none() {
                return Err(fp_error(FpError::UnknownId(id)));
            }
            decisions.remove(&id);
        }
        (None, None, true) => decisions.clear(),
        _ => {
            return Err(ApiError::new(
                StatusCode::BAD_REQUEST,
                "schema",
                "expected {id, state}, {id, clear: true} or {clear: true}",
            ))
        }
    }
    let result = fp::propagate(&tree, &decisions, &state.config().cap).map_err(fp_error)?;
    if result.conflict.is_some() {
        return Ok(reply(s.revision, DecisionState { revision: s.revision, decisions: s.decisions.clone(), result }));
    }
    let revision = if decisions == s.decisions { s.revision } else { s.revision + 1 };
    state.install(Session { decisions: decisions.clone(), revision, ..(*s).clone() });
    Ok(reply(revision, DecisionState { revision, decisions, result }))
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct ResolveRequest {
    block_id: ElementId,
    #[serde(default)]
    selections: SelectionState,
}

async fn post_resolve(State(state): State<AppState>, headers: HeaderMap, bytes: Bytes) -> ApiResult {
    let req: ResolveRequest = body(&bytes)?;
    let _guard = state.shared.writes.lock().await;
    let s = state.snapshot();
    check_revision(&headers, s.revision)?;
    let effective = resolve_effective_block(&s.model, req.block_id.as_str(), &req.selections).map_err(|e| match &e {
        SpError::UnknownId(_) => ApiError::new(StatusCode::NOT_FOUND, "unknownId", e.to_string()),
        _ => ApiError::new(StatusCode::BAD_REQUEST, "illegalSelection", e.to_string()).with_detail(&e),
    })?;
    let mut revision = s.revision;
    if req.selections != s.selections {
        revision += 1;
        state.install(Session { selections: req.selections, revision, ..(*s).clone() });
    }
    Ok(reply(revision, effective))
}

async fn get_trace(State(state): State<AppState>) -> Response {
    let s = state.snapshot();
    reply(s.revision, build_trace_report(&s.model))
}
