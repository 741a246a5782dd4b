//! HTTP/JSON API.
//!
//! | method | path | body | response |
//! |---|---|---|---|
//! | GET | `/exercises` | | student views of every exercise |
//! | POST | `/exercises/generate` | generator config | instructor view of the new exercise |
//! | POST | `/sessions` | `{exercise_id, student_id}` | session |
//! | GET | `/sessions/{id}` | | session with events |
//! | POST | `/sessions/{id}/commands` | `{command}` | event |
//! | POST | `/sessions/{id}/undo` | | event |
//! | GET | `/sessions/{id}/replay` | | replay log |
//! | GET | `/sessions/{id}/export?form=script\|tree\|movie` | | document |
//! | GET | `/health` | | `ok` |
//!
//! Errors are `{"error": {"kind", "message", "retriable"}}`. A command the
//! engine rejects is not an error: it is appended and returned as an event.

use std::sync::Arc;

use axum::extract::{Path, Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use ndlab_core::exercise::View;
use ndlab_core::generate::GeneratorConfig;
use serde::Deserialize;
use serde_json::json;

use crate::error::ServiceError;
use crate::store::{Export, ExportForm, Store};

impl IntoResponse for ServiceError {
    fn into_response(self) -> Response {
        let status = match &self {
            ServiceError::NoSuchExercise(_) | ServiceError::NoSuchSession(_) => StatusCode::NOT_FOUND,
            ServiceError::SessionClosed(_) | ServiceError::ProofIncomplete => StatusCode::CONFLICT,
            ServiceError::CorruptLog { .. } => StatusCode::INTERNAL_SERVER_ERROR,
            ServiceError::Persistence(_) => StatusCode::SERVICE_UNAVAILABLE,
            ServiceError::Generate(ndlab_core::generate::GenerateError::GenerationExhausted(_)) => {
                StatusCode::UNPROCESSABLE_ENTITY
            }
            ServiceError::BadRequest(_) | ServiceError::Exercise(_) | ServiceError::Generate(_) => {
                StatusCode::BAD_REQUEST
            }
        };
        let body = json!({"error": {"kind": self.kind(), "message": self.to_string(), "retriable": self.retriable()}});
        (status, Json(body)).into_response()
    }
}

type AppState = Arc<Store>;

async fn blocking<T: Send + 'static>(
    f: impl FnOnce() -> Result<T, ServiceError> + Send + 'static,
) -> Result<T, ServiceError> {
    tokio::task::spawn_blocking(f)
        .await
        .map_err(|e| ServiceError::Persistence(format!("worker failed: {e}")))?
}

async fn list_exercises(State(store): State<AppState>) -> Json<serde_json::Value> {
    Json(store.exercises().iter().map(|e| e.to_json(View::Student)).collect())
}

async fn generate_exercise(
    State(store): State<AppState>,
    Json(config): Json<GeneratorConfig>,
) -> Result<Json<serde_json::Value>, ServiceError> {
    let spec = blocking(move || store.generate(&config)).await?;
    Ok(Json(spec.to_json(View::Instructor)))
}

#[derive(Deserialize)]
struct CreateSession {
    exercise_id: String,
    student_id: String,
}

async fn create_session(State(store): State<AppState>, Json(req): Json<CreateSession>) -> Result<Response, ServiceError> {
    let view = blocking(move || store.create_session(&req.exercise_id, &req.student_id)).await?;
    Ok((StatusCode::CREATED, Json(view)).into_response())
}

async fn get_session(State(store): State<AppState>, Path(id): Path<String>) -> Result<Response, ServiceError> {
    let view = blocking(move || store.session(&id)).await?;
    Ok(Json(view).into_response())
}

#[derive(Deserialize)]
struct CommandBody {
    command: String,
}

async fn post_command(
    State(store): State<AppState>,
    Path(id): Path<String>,
    Json(body): Json<CommandBody>,
) -> Result<Response, ServiceError> {
    let event = blocking(move || store.apply_command(&id, &body.command)).await?;
    Ok(Json(event).into_response())
}

async fn post_undo(State(store): State<AppState>, Path(id): Path<String>) -> Result<Response, ServiceError> {
    let event = blocking(move || store.undo(&id)).await?;
    Ok(Json(event).into_response())
}

async fn get_replay(State(store): State<AppState>, Path(id): Path<String>) -> Result<Response, ServiceError> {
    let log = blocking(move || store.replay(&id)).await?;
    Ok(Json(log).into_response())
}

#[derive(Deserialize)]
struct ExportQuery {
    form: Option<String>,
}

async fn get_export(
    State(store): State<AppState>,
    Path(id): Path<String>,
    Query(q): Query<ExportQuery>,
) -> Result<Response, ServiceError> {
    let form: ExportForm = q
        .form
        .ok_or_else(|| ServiceError::BadRequest("missing `form` (script, tree or movie)".into()))?
        .parse()?;
    Ok(match blocking(move || store.export(&id, form)).await? {
        Export::Script(text) => ([(header::CONTENT_TYPE, "text/plain; charset=utf-8")], text).into_response(),
        Export::Tree(v) => Json(v).into_response(),
        Export::Movie(m) => Json(m).into_response(),
    })
}

async fn health() -> &'static str {
    "ok"
}

pub fn router(store: Arc<Store>) -> Router {
    Router::new()
        .route("/exercises", get(list_exercises))
        .route("/exercises/generate", post(generate_exercise))
        .route("/sessions", post(create_session))
        .route("/sessions/{id}", get(get_session))
        .route("/sessions/{id}/commands", post(post_command))
        .route("/sessions/{id}/undo", post(post_undo))
        .route("/sessions/{id}/replay", get(get_replay))
        .route("/sessions/{id}/export", get(get_export))
        .route("/health", get(health))
        .with_state(store)
}

pub async fn serve(store: Arc<Store>, addr: std::net::SocketAddr) -> anyhow::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, router(store)).await?;
    Ok(())
}
