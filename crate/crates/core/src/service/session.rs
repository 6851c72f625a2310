use std::collections::BTreeMap;
use std::path::Path;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex, RwLock};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::ServiceError;
use crate::engine::{
    ActionConfig, ActionId, Engine, LaunchParams, LevelPack, Resolved, ShotEvent, Status, Vec2, DEFAULT_PACK_ID,
};
use crate::harness::{summarize, AttemptKind, AttemptRecord, Summary};

/// A human's shot: continuous angle in degrees and slingshot extension in (0, 1].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShotRequest {
    pub angle_deg: f64,
    pub extension: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ServiceConfig {
    /// Snap every shot onto the agents' discrete action grid.
    pub discretized: bool,
    pub actions: ActionConfig,
}

/// Bookkeeping for the attempt in progress.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
struct Progress {
    shots: usize,
    levels_cleared: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
struct SessionData {
    id: String,
    pack: String,
    created_at: u64,
    state: crate::engine::GameState,
    attempt_log: Vec<AttemptRecord>,
    progress: Progress,
}

struct Session {
    data: SessionData,
    engine: Engine,
}

/// What clients see of a session.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SessionSnapshot {
    pub id: String,
    pub pack: String,
    pub created_at: u64,
    pub levels: usize,
    pub attempts: usize,
    pub state: crate::engine::GameState,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShotResponse {
    /// The grid action used when the service runs discretized.
    pub action: Option<ActionId>,
    pub angle_deg: f64,
    pub speed: f64,
    pub events: Vec<ShotEvent>,
    pub reward: i64,
    /// Sampled bird positions for drawing.
    pub trajectory: Vec<Vec2>,
    /// State after the shot, with cleared or failed levels already resolved.
    pub state: crate::engine::GameState,
    /// The attempt that this shot ended, if any.
    pub attempt_ended: Option<AttemptRecord>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PackInfo {
    pub id: String,
    pub levels: usize,
}

/// In-memory session registry. Each session has its own lock and its own engine.
pub struct SessionStore {
    config: ServiceConfig,
    packs: BTreeMap<String, LevelPack>,
    sessions: RwLock<BTreeMap<String, Arc<Mutex<Session>>>>,
    counter: AtomicU64,
}

fn now() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs())
}

/// Nearest grid index for each coordinate; ties go to the lower index.
fn nearest_action(cfg: &ActionConfig, angle_deg: f64, extension: f64) -> ActionId {
    let nearest = |n: usize, value_of: &dyn Fn(usize) -> f64, target: f64| {
        (0..n)
            .min_by(|&a, &b| (value_of(a) - target).abs().total_cmp(&(value_of(b) - target).abs()))
            .unwrap_or(0)
    };
    let angle_of = |i: usize| {
        if cfg.n_angles == 1 {
            cfg.angle_min
        } else {
            cfg.angle_min + i as f64 * (cfg.angle_max - cfg.angle_min) / (cfg.n_angles - 1) as f64
        }
    };
    let ext_of = |j: usize| (j + 1) as f64 / cfg.n_extensions as f64;
    let i = nearest(cfg.n_angles, &angle_of, angle_deg);
    let j = nearest(cfg.n_extensions, &ext_of, extension);
    ActionId(i * cfg.n_extensions + j)
}

impl SessionStore {
    /// A store serving the bundled pack under its id plus any extra packs.
    pub fn new(config: ServiceConfig, extra_packs: BTreeMap<String, LevelPack>) -> Result<Self, ServiceError> {
        config.actions.validate()?;
        let mut packs = BTreeMap::from([(DEFAULT_PACK_ID.to_string(), LevelPack::bundled())]);
        packs.extend(extra_packs);
        Ok(SessionStore {
            config,
            packs,
            sessions: RwLock::new(BTreeMap::new()),
            counter: AtomicU64::new(0),
        })
    }

    pub fn with_defaults() -> Self {
        SessionStore::new(ServiceConfig::default(), BTreeMap::new()).expect("default config is valid")
    }

    pub fn config(&self) -> &ServiceConfig {
        &self.config
    }

    pub fn packs(&self) -> Vec<PackInfo> {
        self.packs
            .iter()
            .map(|(id, pack)| PackInfo {
                id: id.clone(),
                levels: pack.len(),
            })
            .collect()
    }

    fn new_id(&self) -> String {
        let n = self.counter.fetch_add(1, Ordering::Relaxed);
        let nanos = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_nanos());
        let digest = Sha256::digest(format!("{n}:{nanos}:{:p}", self));
        let tag: String = digest[..4].iter().map(|b| format!("{b:02x}")).collect();
        format!("s{n}-{tag}")
    }

    fn session(&self, id: &str) -> Result<Arc<Mutex<Session>>, ServiceError> {
        self.sessions
            .read()
            .expect("session map lock")
            .get(id)
            .cloned()
            .ok_or_else(|| ServiceError::UnknownSession(id.to_string()))
    }

    pub fn create_session(&self, pack: Option<&str>) -> Result<SessionSnapshot, ServiceError> {
        let pack_id = pack.unwrap_or(DEFAULT_PACK_ID);
        let levels = self
            .packs
            .get(pack_id)
            .ok_or_else(|| ServiceError::UnknownPack(pack_id.to_string()))?;
        let engine = Engine::new(levels.clone(), self.config.actions.clone())?;
        let data = SessionData {
            id: self.new_id(),
            pack: pack_id.to_string(),
            created_at: now(),
            state: engine.initial_state(),
            attempt_log: Vec::new(),
            progress: Progress::default(),
        };
        let session = Session { data, engine };
        let snapshot = session.snapshot();
        self.sessions
            .write()
            .expect("session map lock")
            .insert(snapshot.id.clone(), Arc::new(Mutex::new(session)));
        Ok(snapshot)
    }

    pub fn get_session(&self, id: &str) -> Result<SessionSnapshot, ServiceError> {
        Ok(self.session(id)?.lock().expect("session lock").snapshot())
    }

    pub fn submit_shot(&self, id: &str, request: ShotRequest) -> Result<ShotResponse, ServiceError> {
        let session = self.session(id)?;
        let mut session = session.lock().expect("session lock");
        session.shoot(request, &self.config)
    }

    pub fn session_summary(&self, id: &str) -> Result<Summary, ServiceError> {
        let session = self.session(id)?;
        let session = session.lock().expect("session lock");
        Ok(summarize(&session.data.attempt_log))
    }

    pub fn attempt_log(&self, id: &str) -> Result<Vec<AttemptRecord>, ServiceError> {
        Ok(self.session(id)?.lock().expect("session lock").data.attempt_log.clone())
    }

    pub fn len(&self) -> usize {
        self.sessions.read().expect("session map lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Serializes every session as JSON.
    pub fn snapshot_json(&self) -> String {
        let sessions = self.sessions.read().expect("session map lock");
        let data: Vec<SessionData> = sessions
            .values()
            .map(|s| s.lock().expect("session lock").data.clone())
            .collect();
        serde_json::to_string(&data).expect("sessions serialize")
    }

    /// Writes [`snapshot_json`](Self::snapshot_json) to `path` via a temporary file.
    pub fn save_snapshot(&self, path: &Path) -> Result<(), ServiceError> {
        let tmp = path.with_extension("tmp");
        std::fs::write(&tmp, self.snapshot_json()).map_err(|e| ServiceError::Io(e.to_string()))?;
        std::fs::rename(&tmp, path).map_err(|e| ServiceError::Io(e.to_string()))
    }

    /// Restores sessions from a snapshot, skipping those whose pack is not served.
    /// Returns the number restored.
    pub fn restore(&self, json: &str) -> Result<usize, ServiceError> {
        let data: Vec<SessionData> =
            serde_json::from_str(json).map_err(|e| ServiceError::Invalid(format!("bad snapshot: {e}")))?;
        let mut sessions = self.sessions.write().expect("session map lock");
        let mut restored = 0;
        for d in data {
            let Some(pack) = self.packs.get(&d.pack) else { continue };
            let engine = Engine::new(pack.clone(), self.config.actions.clone())?;
            self.counter.fetch_add(1, Ordering::Relaxed);
            sessions.insert(d.id.clone(), Arc::new(Mutex::new(Session { data: d, engine })));
            restored += 1;
        }
        Ok(restored)
    }
}

impl Session {
    fn snapshot(&self) -> SessionSnapshot {
        SessionSnapshot {
            id: self.data.id.clone(),
            pack: self.data.pack.clone(),
            created_at: self.data.created_at,
            levels: self.engine.pack().len(),
            attempts: self.data.attempt_log.len(),
            state: self.data.state.clone(),
        }
    }

    fn shoot(&mut self, request: ShotRequest, config: &ServiceConfig) -> Result<ShotResponse, ServiceError> {
        if !(request.angle_deg.is_finite() && request.angle_deg > 0.0 && request.angle_deg < 90.0) {
            return Err(ServiceError::Invalid(format!(
                "angle_deg must lie strictly between 0 and 90, got {}",
                request.angle_deg
            )));
        }
        if !(request.extension.is_finite() && request.extension > 0.0 && request.extension <= 1.0) {
            return Err(ServiceError::Invalid(format!(
                "extension must lie in (0, 1], got {}",
                request.extension
            )));
        }
        let (action, launch) = if config.discretized {
            let a = nearest_action(&config.actions, request.angle_deg, request.extension);
            (Some(a), config.actions.decode(a)?)
        } else {
            let launch = LaunchParams::from_degrees(request.angle_deg, request.extension, config.actions.v_max)?;
            (None, launch)
        };
        let state = &self.data.state;
        let (outcome, flight) = self.engine.launch(state, launch)?;
        let next = if outcome.next_state.status.is_terminal() {
            self.engine.resolve(&outcome.next_state)?
        } else {
            Resolved {
                state: outcome.next_state.clone(),
                attempt_end: None,
            }
        };
        let index = self.data.attempt_log.len();
        self.data.progress.shots += 1;
        if outcome.next_state.status == Status::Cleared {
            self.data.progress.levels_cleared.push((outcome.next_state.level, index + 1));
        }
        let attempt_ended = next.attempt_end.map(|end| {
            let progress = std::mem::take(&mut self.data.progress);
            let record = AttemptRecord {
                index,
                kind: AttemptKind::Eval,
                score: end.score,
                max_level_reached: end.level_reached,
                shots: progress.shots,
                levels_cleared: progress.levels_cleared,
            };
            self.data.attempt_log.push(record.clone());
            record
        });
        self.data.state = next.state;
        Ok(ShotResponse {
            action,
            angle_deg: launch.angle_degrees(),
            speed: launch.speed,
            events: outcome.events,
            reward: outcome.reward,
            trajectory: flight.path,
            state: self.data.state.clone(),
            attempt_ended,
        })
    }
}
