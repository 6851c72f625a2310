//! Session service so that people can play the same levels as the agents,
//! plus its HTTP front end.

mod http;
mod session;

use thiserror::Error;

pub use http::{router, serve, DEFAULT_PORT};
pub use session::{PackInfo, ServiceConfig, SessionSnapshot, SessionStore, ShotRequest, ShotResponse};

use crate::engine::EngineError;

#[derive(Debug, Error)]
pub enum ServiceError {
    #[error("unknown pack {0:?}")]
    UnknownPack(String),
    #[error("unknown session {0:?}")]
    UnknownSession(String),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error("snapshot failed: {0}")]
    Io(String),
}

impl ServiceError {
    /// Machine-readable error code used in HTTP bodies.
    pub fn code(&self) -> &'static str {
        match self {
            ServiceError::UnknownPack(_) => "unknown_pack",
            ServiceError::UnknownSession(_) => "unknown_session",
            ServiceError::Invalid(_) => "invalid_request",
            ServiceError::Engine(EngineError::TerminalState(_) | EngineError::NoBirdsLeft) => "terminal_state",
            ServiceError::Engine(EngineError::InvalidLaunch(_)) => "invalid_request",
            ServiceError::Engine(_) => "engine_error",
            ServiceError::Io(_) => "io_error",
        }
    }
}
