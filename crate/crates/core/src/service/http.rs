use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Duration;

use axum::body::Bytes;
use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::json;

use super::{ServiceError, SessionStore, ShotRequest};
use crate::engine::EngineError;

pub const DEFAULT_PORT: u16 = 8173;

impl IntoResponse for ServiceError {
    fn into_response(self) -> Response {
        let status = match &self {
            ServiceError::UnknownPack(_) | ServiceError::UnknownSession(_) => StatusCode::NOT_FOUND,
            ServiceError::Invalid(_) | ServiceError::Engine(EngineError::InvalidLaunch(_)) => {
                StatusCode::UNPROCESSABLE_ENTITY
            }
            ServiceError::Engine(EngineError::TerminalState(_) | EngineError::NoBirdsLeft) => StatusCode::CONFLICT,
            ServiceError::Engine(_) | ServiceError::Io(_) => StatusCode::INTERNAL_SERVER_ERROR,
        };
        let body = json!({ "error": self.code(), "message": self.to_string() });
        (status, Json(body)).into_response()
    }
}

/// Parses a JSON body; an empty body is treated as `{}`.
fn parse_body<T: DeserializeOwned>(body: &Bytes) -> Result<T, ServiceError> {
    let text = if body.iter().all(u8::is_ascii_whitespace) { &b"{}"[..] } else { &body[..] };
    serde_json::from_slice(text).map_err(|e| ServiceError::Invalid(format!("bad request body: {e}")))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CreateBody {
    #[serde(default)]
    pack: Option<String>,
}

type Shared = Arc<SessionStore>;

async fn create(State(store): State<Shared>, body: Bytes) -> Result<Response, ServiceError> {
    let body: CreateBody = parse_body(&body)?;
    let snapshot = store.create_session(body.pack.as_deref())?;
    Ok((StatusCode::CREATED, Json(snapshot)).into_response())
}

async fn get_session(State(store): State<Shared>, Path(id): Path<String>) -> Result<Response, ServiceError> {
    Ok(Json(store.get_session(&id)?).into_response())
}

async fn shoot(State(store): State<Shared>, Path(id): Path<String>, body: Bytes) -> Result<Response, ServiceError> {
    let request: ShotRequest = parse_body(&body)?;
    Ok(Json(store.submit_shot(&id, request)?).into_response())
}

async fn summary(State(store): State<Shared>, Path(id): Path<String>) -> Result<Response, ServiceError> {
    Ok(Json(store.session_summary(&id)?).into_response())
}

async fn packs(State(store): State<Shared>) -> Response {
    Json(store.packs()).into_response()
}

async fn not_found() -> Response {
    (StatusCode::NOT_FOUND, Json(json!({ "error": "not_found", "message": "no such route" }))).into_response()
}

pub fn router(store: Shared) -> Router {
    Router::new()
        .route("/sessions", post(create))
        .route("/sessions/{id}", get(get_session))
        .route("/sessions/{id}/shots", post(shoot))
        .route("/sessions/{id}/summary", get(summary))
        .route("/packs", get(packs))
        .fallback(not_found)
        .with_state(store)
}

/// Serves until Ctrl-C. When `snapshot` is given, sessions are restored from
/// that file at start, written every `interval`, and once more on shutdown.
pub async fn serve(
    addr: SocketAddr,
    store: Shared,
    snapshot: Option<(PathBuf, Duration)>,
) -> std::io::Result<()> {
    if let Some((path, _)) = &snapshot {
        if let Ok(text) = std::fs::read_to_string(path) {
            store
                .restore(&text)
                .map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidData, e.to_string()))?;
        }
    }
    let saver = snapshot.clone().map(|(path, interval)| {
        let store = store.clone();
        tokio::spawn(async move {
            let mut ticker = tokio::time::interval(interval);
            ticker.tick().await;
            loop {
                ticker.tick().await;
                if let Err(e) = store.save_snapshot(&path) {
                    eprintln!("{e}");
                }
            }
        })
    });
    let listener = tokio::net::TcpListener::bind(addr).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(store.clone()))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await?;
    if let Some(task) = saver {
        task.abort();
    }
    if let Some((path, _)) = snapshot {
        store
            .save_snapshot(&path)
            .map_err(|e| std::io::Error::other(e.to_string()))?;
    }
    Ok(())
}
