//! JSON-over-HTTP service. Every endpoint is stateless except the repair
//! sessions, which live in memory and expire after an idle period.

use std::collections::HashMap;
use std::net::SocketAddr;
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use axum::extract::rejection::{JsonRejection, QueryRejection};
use axum::extract::{Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use ovaltrack::repair::{BuilderMode, BuilderSnapshot, CycleBuilder, Placement, Verdict};
use serde::{Deserialize, Serialize};
use uuid::Uuid;

use crate::ops;
use crate::wire::{spec, ApiError, ArrangementRequest};

pub const DEFAULT_SESSION_TTL: Duration = Duration::from_secs(3600);

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let status = StatusCode::from_u16(self.code.status()).unwrap_or(StatusCode::INTERNAL_SERVER_ERROR);
        (status, Json(self.body())).into_response()
    }
}

struct Session {
    builder: CycleBuilder,
    last_used: Instant,
}

#[derive(Clone)]
pub struct AppState {
    sessions: Arc<Mutex<HashMap<Uuid, Session>>>,
    ttl: Duration,
}

impl AppState {
    pub fn new(ttl: Duration) -> AppState {
        AppState {
            sessions: Arc::new(Mutex::new(HashMap::new())),
            ttl,
        }
    }
}

impl Default for AppState {
    fn default() -> Self {
        AppState::new(DEFAULT_SESSION_TTL)
    }
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/api/classify", get(classify))
        .route("/api/member", post(member))
        .route("/api/solve", post(solve))
        .route("/api/scramble", post(scramble))
        .route("/api/repair/validate", post(repair_validate))
        .route("/api/repair/generate", post(repair_generate))
        .route("/api/repair/session", post(repair_session))
        .route("/api/apply", post(apply))
        .fallback(|| async { ApiError::not_found("no such endpoint") })
        .with_state(state)
}

pub async fn serve(addr: SocketAddr, state: AppState) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(state)).await
}

fn body<T>(payload: Result<Json<T>, JsonRejection>) -> Result<T, ApiError> {
    payload.map(|Json(value)| value).map_err(|e| ApiError::invalid(e.body_text()))
}

#[derive(Debug, Deserialize)]
struct SpecQuery {
    n: usize,
    k: usize,
}

async fn classify(query: Result<Query<SpecQuery>, QueryRejection>) -> Result<impl IntoResponse, ApiError> {
    let Query(q) = query.map_err(|e| ApiError::invalid(e.body_text()))?;
    Ok(Json(ops::classify(q.n, q.k)?))
}

async fn member(payload: Result<Json<ArrangementRequest>, JsonRejection>) -> Result<impl IntoResponse, ApiError> {
    Ok(Json(ops::member(&body(payload)?)?))
}

#[derive(Debug, Deserialize)]
struct SolveRequest {
    #[serde(flatten)]
    target: ArrangementRequest,
    #[serde(default)]
    shortest: bool,
}

async fn solve(payload: Result<Json<SolveRequest>, JsonRejection>) -> Result<impl IntoResponse, ApiError> {
    let request = body(payload)?;
    let response = ops::solve(&request.target, request.shortest)?;
    if !response.verified {
        return Err(ApiError::internal("solution failed verification"));
    }
    Ok(Json(response))
}

#[derive(Debug, Deserialize)]
struct SeededRequest {
    n: usize,
    k: usize,
    #[serde(default)]
    seed: Option<u64>,
}

async fn scramble(payload: Result<Json<SeededRequest>, JsonRejection>) -> Result<impl IntoResponse, ApiError> {
    let request = body(payload)?;
    Ok(Json(ops::scramble(request.n, request.k, request.seed)?))
}

async fn repair_validate(
    payload: Result<Json<ArrangementRequest>, JsonRejection>,
) -> Result<impl IntoResponse, ApiError> {
    Ok(Json(ops::validate(&body(payload)?)?))
}

async fn repair_generate(payload: Result<Json<SeededRequest>, JsonRejection>) -> Result<impl IntoResponse, ApiError> {
    let request = body(payload)?;
    Ok(Json(ops::generate(request.n, request.k, request.seed)?))
}

async fn apply(payload: Result<Json<ops::ApplyRequest>, JsonRejection>) -> Result<impl IntoResponse, ApiError> {
    Ok(Json(ops::apply(&body(payload)?)?))
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "lowercase")]
enum ModeName {
    Flat,
    Piles,
}

#[derive(Debug, Deserialize)]
struct CreateSession {
    n: usize,
    k: usize,
    #[serde(default)]
    mode: Option<ModeName>,
    #[serde(default)]
    swapped_colors: bool,
}

/// Either `{"create": {...}}`, optionally with a first `place`, or
/// `{"session": id}` with an optional `place` step.
#[derive(Debug, Deserialize)]
struct SessionRequest {
    #[serde(default)]
    session: Option<Uuid>,
    #[serde(default)]
    create: Option<CreateSession>,
    #[serde(default)]
    place: Option<Placement>,
}

#[derive(Debug, Serialize)]
struct SessionResponse {
    session: Uuid,
    expires_in_seconds: u64,
    state: BuilderSnapshot,
    #[serde(skip_serializing_if = "Option::is_none")]
    verdict: Option<Verdict>,
}

async fn repair_session(
    State(state): State<AppState>,
    payload: Result<Json<SessionRequest>, JsonRejection>,
) -> Result<impl IntoResponse, ApiError> {
    let request = body(payload)?;
    let mut sessions = state
        .sessions
        .lock()
        .map_err(|_| ApiError::internal("session store poisoned"))?;
    let now = Instant::now();
    sessions.retain(|_, s| now.duration_since(s.last_used) < state.ttl);

    let id = match (request.create, request.session) {
        (Some(create), None) => {
            let s = spec(create.n, create.k)?;
            let mode = match create.mode {
                None if !create.swapped_colors => BuilderMode::default_for(s),
                Some(ModeName::Flat) if !create.swapped_colors => BuilderMode::Flat,
                Some(ModeName::Flat) => return Err(ApiError::invalid("swapped colours need pile mode")),
                _ => {
                    if s.n() % 2 == 1 {
                        return Err(ApiError::invalid("pile mode needs an even number of tiles"));
                    }
                    BuilderMode::Piles {
                        swapped_colors: create.swapped_colors,
                    }
                }
            };
            let id = Uuid::new_v4();
            sessions.insert(
                id,
                Session {
                    builder: CycleBuilder::new(s, mode),
                    last_used: now,
                },
            );
            id
        }
        (None, Some(id)) => id,
        (Some(_), Some(_)) => return Err(ApiError::invalid("give either \"create\" or \"session\", not both")),
        (None, None) => return Err(ApiError::invalid("give \"create\" to start a session or \"session\" to continue one")),
    };
    let session = sessions
        .get_mut(&id)
        .ok_or_else(|| ApiError::not_found(format!("no live session {id}")))?;
    session.last_used = now;
    let snapshot = match request.place {
        Some(step) => session.builder.place(step).map_err(ApiError::invalid)?,
        None => session.builder.snapshot(),
    };
    Ok(Json(SessionResponse {
        session: id,
        expires_in_seconds: state.ttl.as_secs(),
        verdict: session.builder.verdict(),
        state: snapshot,
    }))
}
