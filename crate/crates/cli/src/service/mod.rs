//! Session-based HTTP API for the iterative elicitation loop.

pub mod session;
pub mod store;

use std::collections::HashMap;
use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::{Arc, Mutex, RwLock};
use std::time::Duration;

use anyhow::Context;
use axum::body::Bytes;
use axum::extract::{Path, State};
use axum::http::{header, HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{delete, get, post};
use axum::{Json, Router};
use serde::Deserialize;
use serde_json::{json, Value};
use tower_http::services::ServeDir;

use biprom_core::lp::DEFAULT_EPS_THRESHOLD;
use biprom_core::{DecisionProblem, PreferenceStatement, RorOptions};

use crate::args::ServeArgs;
use session::{compute_proposal, compute_snapshot, Proposal, Rejection, Session};
use store::{FileStore, MemoryStore, SessionStore};

/// Computations longer than this answer 202 and finish in the background.
pub const INLINE_BUDGET: Duration = Duration::from_secs(2);

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    message: String,
    detail: Value,
}

impl ApiError {
    fn new(status: StatusCode, message: impl Into<String>) -> Self {
        Self { status, message: message.into(), detail: json!({}) }
    }

    fn with_detail(mut self, detail: Value) -> Self {
        self.detail = detail;
        self
    }

    fn not_found(what: impl Into<String>) -> Self {
        Self::new(StatusCode::NOT_FOUND, what)
    }
}

impl From<Rejection> for ApiError {
    fn from(r: Rejection) -> Self {
        match r {
            Rejection::Invalid(m) => ApiError::new(StatusCode::BAD_REQUEST, m),
            Rejection::Inconsistent(detail) => {
                ApiError::new(StatusCode::CONFLICT, "the statements admit no compatible bicapacity").with_detail(detail)
            }
            Rejection::Internal(m) => ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, m),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(json!({ "error": self.message, "detail": self.detail }))).into_response()
    }
}

type ApiResult<T> = Result<T, ApiError>;

/// State of a background computation.
#[derive(Debug, Clone)]
enum Job {
    Pending(usize),
    Failed(usize, Arc<ApiError>),
}

struct SessionHandle {
    session: Mutex<Session>,
    /// Serializes mutations; held by a computation until it commits.
    writer: Arc<tokio::sync::Mutex<()>>,
    job: Mutex<Option<Job>>,
}

impl SessionHandle {
    fn new(session: Session) -> Arc<Self> {
        Arc::new(Self { session: Mutex::new(session), writer: Arc::default(), job: Mutex::new(None) })
    }

    fn read(&self) -> Session {
        self.session.lock().expect("session lock").clone()
    }
}

pub struct AppState {
    sessions: RwLock<HashMap<String, Arc<SessionHandle>>>,
    store: Box<dyn SessionStore>,
    options: RorOptions,
    inline_budget: Duration,
}

impl AppState {
    /// Loads every stored session.
    pub fn new(store: Box<dyn SessionStore>, options: RorOptions, inline_budget: Duration) -> std::io::Result<Self> {
        let sessions = store.load_all()?.into_iter().map(|s| (s.id.clone(), SessionHandle::new(s))).collect();
        Ok(Self { sessions: RwLock::new(sessions), store, options, inline_budget })
    }

    pub fn ephemeral() -> Self {
        Self::new(Box::new(MemoryStore), RorOptions::default(), INLINE_BUDGET).expect("memory store never fails")
    }

    fn handle(&self, id: &str) -> ApiResult<Arc<SessionHandle>> {
        self.sessions
            .read()
            .expect("session map lock")
            .get(id)
            .cloned()
            .ok_or_else(|| ApiError::not_found(format!("unknown session `{id}`")))
    }

    fn persist(&self, session: &Session) -> ApiResult<()> {
        self.store
            .save(session)
            .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, format!("cannot persist session: {e}")))
    }
}

pub fn router(state: Arc<AppState>, assets: Option<PathBuf>) -> Router {
    let api = Router::new()
        .route("/healthz", get(healthz))
        .route("/sessions", post(create_session))
        .route("/sessions/{id}", get(get_session))
        .route("/sessions/{id}/statements", post(add_statements))
        .route("/sessions/{id}/statements/last", delete(retract_last))
        .route("/sessions/{id}/snapshots/{k}", get(get_snapshot))
        .with_state(state);
    match assets {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api,
    }
}

pub fn serve(args: ServeArgs) -> anyhow::Result<()> {
    let options = RorOptions { eps_threshold: args.eps_threshold.unwrap_or(DEFAULT_EPS_THRESHOLD) };
    let store: Box<dyn SessionStore> = if args.ephemeral {
        Box::new(MemoryStore)
    } else {
        Box::new(FileStore::open(&args.store).with_context(|| format!("opening store {}", args.store.display()))?)
    };
    let state = Arc::new(AppState::new(store, options, INLINE_BUDGET).context("loading sessions")?);
    let app = router(state, args.assets);
    let addr = SocketAddr::new(args.bind, args.port);
    let runtime = tokio::runtime::Runtime::new()?;
    runtime.block_on(async move {
        let listener = tokio::net::TcpListener::bind(addr).await.with_context(|| format!("binding {addr}"))?;
        eprintln!("listening on http://{}", listener.local_addr()?);
        axum::serve(listener, app).await?;
        Ok(())
    })
}

async fn healthz() -> Json<Value> {
    Json(json!({ "status": "ok" }))
}

fn parse_json<T: serde::de::DeserializeOwned>(body: &Bytes, what: &str) -> ApiResult<T> {
    serde_json::from_slice(body).map_err(|e| ApiError::new(StatusCode::BAD_REQUEST, format!("invalid {what}: {e}")))
}

async fn create_session(State(state): State<Arc<AppState>>, body: Bytes) -> ApiResult<Response> {
    let problem: DecisionProblem = parse_json(&body, "problem")?;
    let id = uuid::Uuid::new_v4().to_string();
    let threshold = state.options.eps_threshold;
    let session = tokio::task::spawn_blocking(move || Session::new(id, problem, threshold))
        .await
        .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))??;
    state.persist(&session)?;
    let body = json!({ "id": session.id, "iteration": 0 });
    let location = format!("/sessions/{}", session.id);
    state.sessions.write().expect("session map lock").insert(session.id.clone(), SessionHandle::new(session));
    Ok((StatusCode::CREATED, [(header::LOCATION, location)], Json(body)).into_response())
}

async fn get_session(State(state): State<Arc<AppState>>, Path(id): Path<String>) -> ApiResult<Json<Value>> {
    let handle = state.handle(&id)?;
    let s = handle.read();
    let pending = match &*handle.job.lock().expect("job lock") {
        Some(Job::Pending(k)) => Some(*k),
        _ => None,
    };
    let iterations: Vec<Value> = s
        .iterations
        .iter()
        .map(|it| {
            json!({
                "iteration": it.iteration,
                "statements": it.statements.len(),
                "level": it.elicitation["level"],
                "epsilon": it.elicitation["epsilon"],
                "snapshot_ready": it.snapshot.is_some(),
            })
        })
        .collect();
    Ok(Json(json!({
        "id": s.id,
        "problem": s.problem,
        "statements": s.current().statements,
        "statement_log": s.statement_log,
        "iterations": iterations,
        "pending_iteration": pending,
        "created_at": s.created_at,
        "updated_at": s.updated_at,
    })))
}

#[derive(Deserialize)]
#[serde(untagged)]
enum StatementBody {
    List(Vec<PreferenceStatement>),
    Wrapped { statements: Vec<PreferenceStatement> },
}

async fn add_statements(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    body: Bytes,
) -> ApiResult<Response> {
    let handle = state.handle(&id)?;
    let batch = match parse_json::<StatementBody>(&body, "statements")? {
        StatementBody::List(v) | StatementBody::Wrapped { statements: v } => v,
    };
    let threshold = state.options.eps_threshold;
    run_iteration(state, handle, move |s| s.propose_add(batch, threshold).map(Some)).await
}

async fn retract_last(State(state): State<Arc<AppState>>, Path(id): Path<String>) -> ApiResult<Response> {
    let handle = state.handle(&id)?;
    let threshold = state.options.eps_threshold;
    run_iteration(state, handle, move |s| s.propose_retract(threshold)).await
}

/// Elicits the proposed statement set inline, then computes its snapshot,
/// answering 202 if that takes longer than the inline budget.
async fn run_iteration<F>(state: Arc<AppState>, handle: Arc<SessionHandle>, propose: F) -> ApiResult<Response>
where
    F: FnOnce(&Session) -> Result<Option<Proposal>, Rejection> + Send + 'static,
{
    let guard = handle.writer.clone().lock_owned().await;
    let session = handle.read();
    let (session, proposal) = tokio::task::spawn_blocking(move || propose(&session).map(|p| (session, p)))
        .await
        .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))??;
    let Some(proposal) = proposal else {
        return Err(ApiError::new(StatusCode::CONFLICT, "no statements to retract"));
    };
    let k = proposal.iteration;
    *handle.job.lock().expect("job lock") = Some(Job::Pending(k));

    let (task_state, task_handle) = (state.clone(), handle.clone());
    let task = tokio::spawn(async move {
        let _guard = guard;
        let options = task_state.options;
        let computed = tokio::task::spawn_blocking(move || {
            compute_proposal(&session, &proposal, options).map(|(snap, prev)| (proposal, snap, prev))
        })
        .await
        .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))
        .and_then(|r| r.map_err(ApiError::from));
        let outcome = computed.and_then(|(proposal, snap, prev)| {
            let mut s = task_handle.session.lock().expect("session lock");
            s.commit(proposal, snap, prev);
            task_state.persist(&s)?;
            Ok(iteration_body(&s, k))
        });
        let mut job = task_handle.job.lock().expect("job lock");
        match &outcome {
            Ok(_) => *job = None,
            Err(e) => {
                let copy = ApiError::new(e.status, e.message.clone()).with_detail(e.detail.clone());
                *job = Some(Job::Failed(k, Arc::new(copy)));
            }
        }
        outcome
    });

    match tokio::time::timeout(state.inline_budget, task).await {
        Ok(joined) => {
            let body = joined.map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))??;
            Ok((StatusCode::OK, Json(body)).into_response())
        }
        Err(_) => {
            let location = format!("/sessions/{}/snapshots/{k}", handle.read().id);
            let body = json!({ "status": "pending", "iteration": k, "location": location });
            Ok((StatusCode::ACCEPTED, [(header::LOCATION, location)], Json(body)).into_response())
        }
    }
}

fn iteration_body(s: &Session, k: usize) -> Value {
    let it = &s.iterations[k];
    let snapshot: Value = it
        .snapshot
        .as_deref()
        .map(|t| serde_json::from_str(t).expect("stored snapshots are valid JSON"))
        .unwrap_or(Value::Null);
    json!({ "iteration": k, "elicitation": it.elicitation, "snapshot": snapshot })
}

async fn get_snapshot(
    State(state): State<Arc<AppState>>,
    Path((id, k)): Path<(String, String)>,
) -> ApiResult<Response> {
    let handle = state.handle(&id)?;
    let k: usize = k.parse().map_err(|_| ApiError::not_found(format!("no iteration `{k}`")))?;
    if let Some(text) = stored_snapshot(&handle, k)? {
        return Ok(json_text(text));
    }
    // only iteration 0 is computed lazily
    let guard = handle.writer.clone().lock_owned().await;
    if let Some(text) = stored_snapshot(&handle, k)? {
        return Ok(json_text(text));
    }
    let session = handle.read();
    let options = state.options;
    let text = tokio::task::spawn_blocking(move || {
        let it = &session.iterations[0];
        compute_snapshot(&session.problem, &it.statements, 0, None, options)
    })
    .await
    .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))??;
    let mut s = handle.session.lock().expect("session lock");
    s.iterations[0].snapshot = Some(text.clone());
    state.persist(&s)?;
    drop(guard);
    Ok(json_text(text))
}

/// `Ok(None)` means iteration `k` exists but needs its lazy computation.
fn stored_snapshot(handle: &SessionHandle, k: usize) -> ApiResult<Option<String>> {
    let s = handle.session.lock().expect("session lock");
    if let Some(it) = s.iterations.get(k) {
        return match &it.snapshot {
            Some(text) => Ok(Some(text.clone())),
            None => Ok(None),
        };
    }
    match &*handle.job.lock().expect("job lock") {
        Some(Job::Pending(p)) if *p == k => Err(ApiError::new(StatusCode::ACCEPTED, "computation in progress")
            .with_detail(json!({ "status": "pending", "iteration": k }))),
        Some(Job::Failed(p, e)) if *p == k => {
            Err(ApiError::new(e.status, e.message.clone()).with_detail(e.detail.clone()))
        }
        _ => Err(ApiError::not_found(format!("no iteration {k}"))),
    }
}

fn json_text(text: String) -> Response {
    ([(header::CONTENT_TYPE, HeaderValue::from_static("application/json"))], text).into_response()
}
