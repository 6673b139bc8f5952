//! HTTP facade: one network per session, with what-if, commit and undo.
//!
//! Every float in a response goes through the same 12-digit rounding the
//! CLI prints with, so the two agree for the same inputs.

use axum::extract::rejection::{JsonRejection, QueryRejection};
use axum::extract::{Path, Query, Request, State};
use axum::http::{header, StatusCode};
use axum::middleware::{self, Next};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use saidi::io::{to_report_json, NetworkDocument};
use saidi::planner::{design_rule_audit, evaluate_candidate, suggest_edges, CandidateEdge, EvalMode};
use saidi::report::{analyze, risks};
use saidi::{Error, Network};
use serde::Deserialize;
use serde_json::{json, Value};
use std::collections::HashMap;
use std::path::PathBuf;
use std::sync::{Arc, Mutex, RwLock};

#[derive(Clone, Debug)]
pub struct Config {
    pub session_cap: usize,
    pub undo_depth: usize,
    /// exact runs on networks with more edges than this answer 202
    pub async_edges: usize,
    /// required bearer token, if any
    pub token: Option<String>,
    /// where session snapshots are written, if anywhere
    pub persist_dir: Option<PathBuf>,
}

impl Default for Config {
    fn default() -> Self {
        Config { session_cap: 256, undo_depth: 32, async_edges: 60, token: None, persist_dir: None }
    }
}

struct Session {
    doc: NetworkDocument,
    net: Arc<Network>,
    undo: Vec<(NetworkDocument, Arc<Network>)>,
}

enum Job {
    Pending,
    Done(Value),
    Failed(ApiError),
}

pub struct AppState {
    config: Config,
    sessions: RwLock<HashMap<String, Arc<Mutex<Session>>>>,
    jobs: Mutex<HashMap<String, Job>>,
}

#[derive(Clone, Debug)]
pub struct ApiError {
    status: StatusCode,
    msg: String,
    path: Option<String>,
}

impl ApiError {
    fn new(status: StatusCode, msg: impl Into<String>) -> Self {
        ApiError { status, msg: msg.into(), path: None }
    }
}

impl From<Error> for ApiError {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::SizeGuard { .. } => StatusCode::PAYLOAD_TOO_LARGE,
            Error::Io(_) => StatusCode::INTERNAL_SERVER_ERROR,
            _ => StatusCode::UNPROCESSABLE_ENTITY,
        };
        let path = match &e {
            Error::Document { path, .. } => Some(path.clone()),
            _ => None,
        };
        ApiError { status, msg: e.to_string(), path }
    }
}

impl From<QueryRejection> for ApiError {
    fn from(e: QueryRejection) -> Self {
        ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, e.body_text())
    }
}

impl From<JsonRejection> for ApiError {
    fn from(e: JsonRejection) -> Self {
        ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, e.body_text())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let mut body = json!({ "error": self.msg });
        if let Some(p) = self.path {
            body["path"] = p.into();
        }
        (self.status, Json(body)).into_response()
    }
}

type ApiResult = Result<Response, ApiError>;

fn ok(v: &impl serde::Serialize) -> ApiResult {
    Ok(Json(to_report_json(v)).into_response())
}

pub fn app(config: Config) -> Router {
    let state = Arc::new(AppState { config, sessions: RwLock::default(), jobs: Mutex::default() });
    Router::new()
        .route("/sessions", post(create))
        .route("/sessions/{id}", get(document).delete(remove))
        .route("/sessions/{id}/saidi", get(saidi_of))
        .route("/sessions/{id}/risks", get(risks_of))
        .route("/sessions/{id}/whatif", post(whatif))
        .route("/sessions/{id}/commit", post(commit))
        .route("/sessions/{id}/undo", post(undo))
        .route("/sessions/{id}/audit", get(audit))
        .route("/sessions/{id}/suggest", get(suggest))
        .route("/jobs/{token}", get(poll))
        .layer(middleware::from_fn_with_state(state.clone(), auth))
        .with_state(state)
}

async fn auth(State(st): State<Arc<AppState>>, req: Request, next: Next) -> Response {
    if let Some(token) = &st.config.token {
        let given = req.headers().get(header::AUTHORIZATION).and_then(|v| v.to_str().ok());
        if given != Some(format!("Bearer {token}").as_str()) {
            return ApiError::new(StatusCode::UNAUTHORIZED, "missing or wrong bearer token").into_response();
        }
    }
    next.run(req).await
}

impl AppState {
    fn session(&self, id: &str) -> Result<Arc<Mutex<Session>>, ApiError> {
        self.sessions
            .read()
            .unwrap()
            .get(id)
            .cloned()
            .ok_or_else(|| ApiError::new(StatusCode::NOT_FOUND, format!("no session `{id}`")))
    }

    fn snapshot(&self, id: &str) -> Result<Arc<Network>, ApiError> {
        Ok(self.session(id)?.lock().unwrap().net.clone())
    }

    fn persist(&self, id: &str, doc: &NetworkDocument) -> Result<(), ApiError> {
        if let Some(dir) = &self.config.persist_dir {
            saidi::io::save_document(doc, dir.join(format!("{id}.json")))?;
        }
        Ok(())
    }

    /// Run `f` off the async workers. Long exact runs are parked as jobs
    /// and answered with 202 and a poll token.
    async fn compute<F>(self: &Arc<Self>, net: &Network, mode: EvalMode, f: F) -> ApiResult
    where
        F: FnOnce() -> Result<Value, ApiError> + Send + 'static,
    {
        if mode == EvalMode::Exact && net.m() > self.config.async_edges {
            let token = uuid::Uuid::new_v4().to_string();
            self.jobs.lock().unwrap().insert(token.clone(), Job::Pending);
            let st = self.clone();
            let t = token.clone();
            tokio::task::spawn_blocking(move || {
                let job = match f() {
                    Ok(v) => Job::Done(v),
                    Err(e) => Job::Failed(e),
                };
                st.jobs.lock().unwrap().insert(t, job);
            });
            let body = json!({ "status": "pending", "token": token, "poll": format!("/jobs/{token}") });
            return Ok((StatusCode::ACCEPTED, Json(body)).into_response());
        }
        let v = tokio::task::spawn_blocking(f)
            .await
            .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))??;
        Ok(Json(v).into_response())
    }
}

async fn create(State(st): State<Arc<AppState>>, body: String) -> ApiResult {
    let doc = NetworkDocument::from_json(&body)?;
    let net = Arc::new(doc.to_network()?);
    let id = uuid::Uuid::new_v4().to_string();
    {
        let mut sessions = st.sessions.write().unwrap();
        if sessions.len() >= st.config.session_cap {
            return Err(ApiError::new(StatusCode::SERVICE_UNAVAILABLE, "session cap reached"));
        }
        st.persist(&id, &doc)?;
        let body = json!({ "id": id, "nodes": net.nodes().len(), "edges": net.m() });
        sessions.insert(id, Arc::new(Mutex::new(Session { doc, net, undo: Vec::new() })));
        Ok((StatusCode::CREATED, Json(body)).into_response())
    }
}

async fn document(State(st): State<Arc<AppState>>, Path(id): Path<String>) -> ApiResult {
    let s = st.session(&id)?;
    let s = s.lock().unwrap();
    Ok(Json(serde_json::to_value(&s.doc).unwrap()).into_response())
}

async fn remove(State(st): State<Arc<AppState>>, Path(id): Path<String>) -> ApiResult {
    match st.sessions.write().unwrap().remove(&id) {
        Some(_) => Ok(StatusCode::NO_CONTENT.into_response()),
        None => Err(ApiError::new(StatusCode::NOT_FOUND, format!("no session `{id}`"))),
    }
}

#[derive(Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
enum ModeParam {
    #[default]
    Exact,
    KOrder,
}

#[derive(Deserialize)]
struct EvalQuery {
    p: Option<f64>,
    #[serde(default)]
    mode: ModeParam,
    k: Option<usize>,
}

impl EvalQuery {
    fn mode(&self) -> EvalMode {
        match self.mode {
            ModeParam::Exact => EvalMode::Exact,
            ModeParam::KOrder => EvalMode::KOrder(self.k.unwrap_or(saidi::exact::DEFAULT_K)),
        }
    }
}

async fn saidi_of(
    State(st): State<Arc<AppState>>,
    Path(id): Path<String>,
    q: Result<Query<EvalQuery>, QueryRejection>,
) -> ApiResult {
    let Query(q) = q?;
    let net = st.snapshot(&id)?;
    let (p, mode) = (q.p, q.mode());
    if let Some(p) = p {
        saidi::report::check_p(p)?;
    }
    let n = net.clone();
    st.compute(&net, mode, move || Ok(to_report_json(&analyze(&n, p, mode)?))).await
}

#[derive(Deserialize)]
struct RiskQuery {
    p: Option<f64>,
    #[serde(default = "five")]
    top: usize,
    #[serde(default = "three")]
    order: usize,
}

fn five() -> usize {
    5
}

fn three() -> usize {
    3
}

async fn risks_of(
    State(st): State<Arc<AppState>>,
    Path(id): Path<String>,
    q: Result<Query<RiskQuery>, QueryRejection>,
) -> ApiResult {
    let Query(q) = q?;
    let net = st.snapshot(&id)?;
    let rows = tokio::task::spawn_blocking(move || risks(&net, q.p, q.top, q.order))
        .await
        .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))??;
    ok(&rows)
}

/// A proposed edge; the id is made up when absent.
#[derive(Deserialize)]
struct EdgeBody {
    id: Option<String>,
    u: String,
    v: String,
    p_fail: f64,
    #[serde(default = "unit")]
    cost: f64,
}

fn unit() -> f64 {
    1.0
}

impl EdgeBody {
    fn candidate(self, net: &Network) -> CandidateEdge {
        let id = self.id.unwrap_or_else(|| net.fresh_edge_id("new").0);
        CandidateEdge::new(id, self.u, self.v, self.p_fail, self.cost)
    }
}

#[derive(Deserialize)]
struct WhatIfBody {
    #[serde(flatten)]
    edge: EdgeBody,
    #[serde(flatten)]
    eval: EvalQuery,
    #[serde(default = "five")]
    top: usize,
}

async fn whatif(
    State(st): State<Arc<AppState>>,
    Path(id): Path<String>,
    body: Result<Json<WhatIfBody>, JsonRejection>,
) -> ApiResult {
    let Json(b) = body?;
    let net = st.snapshot(&id)?;
    let (p, mode, top) = (b.eval.p, b.eval.mode(), b.top);
    let cand = b.edge.candidate(&net);
    let n = net.clone();
    st.compute(&net, mode, move || {
        let d = evaluate_candidate(&n, &cand, p, mode)?;
        let after = cand.add_to(&n)?;
        let updated = risks(&after, p, top, 3)?;
        Ok(to_report_json(&json!({
            "delta": d.total,
            "new_saidi": d.saidi_after,
            "saidi_before": d.saidi_before,
            "kind": d.kind,
            "effectiveness": d.effectiveness,
            "updated_top_risks": updated,
            "detail": d,
        })))
    })
    .await
}

#[derive(Deserialize)]
struct CommitBody {
    edge: EdgeBody,
}

async fn commit(
    State(st): State<Arc<AppState>>,
    Path(id): Path<String>,
    body: Result<Json<CommitBody>, JsonRejection>,
) -> ApiResult {
    let Json(b) = body?;
    let s = st.session(&id)?;
    let mut s = s.lock().unwrap();
    let cand = b.edge.candidate(&s.net);
    let edge = cand.as_edge(&s.net);
    let net = Arc::new(cand.add_to(&s.net)?);
    let doc = s.doc.with_network(&net);
    st.persist(&id, &doc)?;
    let prev = (std::mem::replace(&mut s.doc, doc), std::mem::replace(&mut s.net, net));
    s.undo.push(prev);
    if s.undo.len() > st.config.undo_depth {
        s.undo.remove(0);
    }
    ok(&json!({ "edge": edge.id, "edges": s.net.m(), "undo_depth": s.undo.len() }))
}

async fn undo(State(st): State<Arc<AppState>>, Path(id): Path<String>) -> ApiResult {
    let s = st.session(&id)?;
    let mut s = s.lock().unwrap();
    let Some((doc, net)) = s.undo.pop() else {
        return Err(ApiError::new(StatusCode::CONFLICT, "nothing to undo"));
    };
    st.persist(&id, &doc)?;
    s.doc = doc;
    s.net = net;
    ok(&json!({ "edges": s.net.m(), "undo_depth": s.undo.len() }))
}

async fn audit(State(st): State<Arc<AppState>>, Path(id): Path<String>) -> ApiResult {
    let net = st.snapshot(&id)?;
    ok(&design_rule_audit(&net)?)
}

#[derive(Deserialize)]
struct SuggestQuery {
    budget: f64,
    #[serde(flatten)]
    eval: EvalQuery,
}

/// Candidates come from the document's top-level `candidates` array.
async fn suggest(
    State(st): State<Arc<AppState>>,
    Path(id): Path<String>,
    q: Result<Query<SuggestQuery>, QueryRejection>,
) -> ApiResult {
    let Query(q) = q?;
    let (net, cands) = {
        let s = st.session(&id)?;
        let s = s.lock().unwrap();
        let cands: Vec<CandidateEdge> = match s.doc.extra.get("candidates") {
            Some(v) => serde_json::from_value(v.clone())
                .map_err(|e| ApiError::from(Error::Document { path: "candidates".into(), msg: e.to_string() }))?,
            None => Vec::new(),
        };
        (s.net.clone(), cands)
    };
    let (p, mode, budget) = (q.eval.p, q.eval.mode(), q.budget);
    let n = net.clone();
    st.compute(&net, mode, move || Ok(to_report_json(&suggest_edges(&n, &cands, budget, p, mode)?))).await
}

async fn poll(State(st): State<Arc<AppState>>, Path(token): Path<String>) -> ApiResult {
    let jobs = st.jobs.lock().unwrap();
    match jobs.get(&token) {
        None => Err(ApiError::new(StatusCode::NOT_FOUND, format!("no job `{token}`"))),
        Some(Job::Pending) => Ok((StatusCode::ACCEPTED, Json(json!({ "status": "pending" }))).into_response()),
        Some(Job::Done(v)) => Ok(Json(v.clone()).into_response()),
        Some(Job::Failed(e)) => Err(e.clone()),
    }
}
