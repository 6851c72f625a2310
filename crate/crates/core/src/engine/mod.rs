//! Deterministic turn-based slingshot game.
//!
//! A shot is integrated to quiescence before the next state is returned, so
//! every [`GameState`] is a still frame: positions only, no velocities.

mod action;
mod game;
mod geometry;
mod level;
mod physics;

pub use action::{ActionConfig, ActionId, LaunchParams};
pub use game::{
    resolve_attempt, simulate_launch, simulate_shot, AttemptEnd, Engine, GameState, Resolved, ShotEvent,
    ShotOutcome, Status, BLOCK_POINTS, FAILURE_PENALTY, PIG_POINTS, UNUSED_BIRD_POINTS,
};
pub use geometry::{in_world, Rect, Vec2, WORLD_HEIGHT, WORLD_WIDTH};
pub use level::{
    load_level_pack, serialize_level_pack, Block, BlockKind, LevelPack, LevelSpec, Pig, DEFAULT_PACK,
    DEFAULT_PACK_ID,
};
pub use physics::{
    trajectory_impact, BirdFate, Flight, Impact, BREAK_DAMPING, BREAK_SPEED, GRAVITY, PATH_STRIDE, STOP_SPEED,
    TIME_STEP,
};

#[derive(Debug, thiserror::Error)]
pub enum EngineError {
    #[error("level pack parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("level {level}: {reason}")]
    InvalidLevel { level: usize, reason: String },
    #[error("unknown level {0}")]
    UnknownLevel(usize),
    #[error("invalid action configuration: {0}")]
    InvalidActionConfig(String),
    #[error("action {action} out of range (0..{count})")]
    ActionOutOfRange { action: usize, count: usize },
    #[error("invalid launch: {0}")]
    InvalidLaunch(String),
    #[error("cannot shoot from a terminal state ({0:?})")]
    TerminalState(Status),
    #[error("no birds left")]
    NoBirdsLeft,
    #[error("attempt can only be resolved from a cleared or failed state")]
    NotTerminal,
}
