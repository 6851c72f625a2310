use serde::{Deserialize, Serialize};

use super::action::{ActionConfig, ActionId, LaunchParams};
use super::geometry::Vec2;
use super::level::{Block, LevelPack, LevelSpec, Pig};
use super::physics::{trajectory_impact, Flight, Impact};
use super::EngineError;

pub const PIG_POINTS: i64 = 10_000;
pub const BLOCK_POINTS: i64 = 1_000;
/// Bonus per unused bird when a level is cleared.
pub const UNUSED_BIRD_POINTS: i64 = 5_000;
pub const FAILURE_PENALTY: i64 = -10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    InProgress,
    Cleared,
    Failed,
}

impl Status {
    pub fn is_terminal(self) -> bool {
        self != Status::InProgress
    }
}

/// Quiescent game state between shots. Only live pigs and intact blocks are kept.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GameState {
    pub level: usize,
    pub birds_left: u32,
    pub pigs: Vec<Pig>,
    pub blocks: Vec<Block>,
    pub slingshot: Vec2,
    pub attempt_score: i64,
    pub level_reached: usize,
    pub status: Status,
}

impl GameState {
    /// Fresh state at the start of `level` with the given carried score.
    pub fn at_level(spec: &LevelSpec, attempt_score: i64, level_reached: usize) -> Self {
        GameState {
            level: spec.id,
            birds_left: spec.birds,
            pigs: spec.pigs.clone(),
            blocks: spec.blocks.clone(),
            slingshot: spec.slingshot,
            attempt_score,
            level_reached: level_reached.max(spec.id),
            status: Status::InProgress,
        }
    }

    pub fn pig_centers(&self) -> impl Iterator<Item = Vec2> + '_ {
        self.pigs.iter().map(|p| p.center)
    }

    pub fn block_centers(&self) -> impl Iterator<Item = Vec2> + '_ {
        self.blocks.iter().map(|b| b.center())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "event", content = "index", rename_all = "snake_case")]
pub enum ShotEvent {
    PigDestroyed(usize),
    BlockDestroyed(usize),
    BirdSpent,
    LevelCleared,
    LevelFailed,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShotOutcome {
    pub events: Vec<ShotEvent>,
    pub reward: i64,
    pub next_state: GameState,
}

impl ShotOutcome {
    /// Point value of a single event given the birds remaining after the shot.
    pub fn event_points(event: ShotEvent, birds_left: u32) -> i64 {
        match event {
            ShotEvent::PigDestroyed(_) => PIG_POINTS,
            ShotEvent::BlockDestroyed(_) => BLOCK_POINTS,
            ShotEvent::BirdSpent => 0,
            ShotEvent::LevelCleared => UNUSED_BIRD_POINTS * birds_left as i64,
            ShotEvent::LevelFailed => FAILURE_PENALTY,
        }
    }
}

/// Resolves one discrete action against `state`.
pub fn simulate_shot(state: &GameState, action: ActionId, cfg: &ActionConfig) -> Result<ShotOutcome, EngineError> {
    let launch = cfg.decode(action)?;
    simulate_launch(state, launch).map(|(outcome, _)| outcome)
}

/// Resolves a shot with arbitrary forward launch parameters, also returning the flight.
pub fn simulate_launch(state: &GameState, launch: LaunchParams) -> Result<(ShotOutcome, Flight), EngineError> {
    if state.status.is_terminal() {
        return Err(EngineError::TerminalState(state.status));
    }
    if state.birds_left == 0 {
        return Err(EngineError::NoBirdsLeft);
    }
    if !launch.is_forward() || !launch.speed.is_finite() {
        return Err(EngineError::InvalidLaunch("launch must point forward with positive speed".into()));
    }

    let flight = trajectory_impact(launch, &state.pigs, &state.blocks, state.slingshot);
    let mut events: Vec<ShotEvent> = flight
        .impacts
        .iter()
        .map(|impact| match *impact {
            Impact::Pig(i) => ShotEvent::PigDestroyed(i),
            Impact::Block(i) => ShotEvent::BlockDestroyed(i),
        })
        .collect();
    events.push(ShotEvent::BirdSpent);

    let mut next = state.clone();
    next.birds_left -= 1;
    let mut dead_pigs = vec![false; state.pigs.len()];
    let mut broken_blocks = vec![false; state.blocks.len()];
    for impact in &flight.impacts {
        match *impact {
            Impact::Pig(i) => dead_pigs[i] = true,
            Impact::Block(i) => broken_blocks[i] = true,
        }
    }
    next.pigs = retain_unmarked(&state.pigs, &dead_pigs);
    next.blocks = retain_unmarked(&state.blocks, &broken_blocks);

    if next.pigs.is_empty() {
        next.status = Status::Cleared;
        events.push(ShotEvent::LevelCleared);
    } else if next.birds_left == 0 {
        next.status = Status::Failed;
        events.push(ShotEvent::LevelFailed);
    }

    let reward = events
        .iter()
        .map(|&e| ShotOutcome::event_points(e, next.birds_left))
        .sum::<i64>();
    next.attempt_score += reward;

    Ok((
        ShotOutcome {
            events,
            reward,
            next_state: next,
        },
        flight,
    ))
}

fn retain_unmarked<T: Clone>(items: &[T], marked: &[bool]) -> Vec<T> {
    items
        .iter()
        .zip(marked)
        .filter(|(_, &m)| !m)
        .map(|(item, _)| item.clone())
        .collect()
}

/// Summary of a finished attempt.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttemptEnd {
    pub score: i64,
    pub level_reached: usize,
    /// True when the last level of the pack was cleared.
    pub completed_pack: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Resolved {
    /// State to continue from: the next level, or level 0 of a new attempt.
    pub state: GameState,
    pub attempt_end: Option<AttemptEnd>,
}

/// Moves past a cleared or failed level.
pub fn resolve_attempt(state: &GameState, pack: &LevelPack) -> Result<Resolved, EngineError> {
    let first = pack.get(0).expect("packs are nonempty");
    match state.status {
        Status::InProgress => Err(EngineError::NotTerminal),
        Status::Cleared if state.level < pack.last_index() => {
            let spec = pack
                .get(state.level + 1)
                .ok_or(EngineError::UnknownLevel(state.level + 1))?;
            Ok(Resolved {
                state: GameState::at_level(spec, state.attempt_score, state.level_reached),
                attempt_end: None,
            })
        }
        Status::Cleared | Status::Failed => Ok(Resolved {
            state: GameState::at_level(first, 0, 0),
            attempt_end: Some(AttemptEnd {
                score: state.attempt_score,
                level_reached: state.level_reached,
                completed_pack: state.status == Status::Cleared,
            }),
        }),
    }
}

/// A level pack paired with an action discretisation.
#[derive(Clone, Debug)]
pub struct Engine {
    pack: LevelPack,
    actions: ActionConfig,
}

impl Engine {
    pub fn new(pack: LevelPack, actions: ActionConfig) -> Result<Self, EngineError> {
        actions.validate()?;
        Ok(Engine { pack, actions })
    }

    pub fn bundled() -> Self {
        Engine::new(LevelPack::bundled(), ActionConfig::default()).expect("default action config is valid")
    }

    pub fn pack(&self) -> &LevelPack {
        &self.pack
    }

    pub fn actions(&self) -> &ActionConfig {
        &self.actions
    }

    pub fn action_count(&self) -> usize {
        self.actions.count()
    }

    /// Start of a new attempt.
    pub fn initial_state(&self) -> GameState {
        GameState::at_level(&self.pack.levels()[0], 0, 0)
    }

    pub fn level_state(&self, level: usize) -> Result<GameState, EngineError> {
        let spec = self.pack.get(level).ok_or(EngineError::UnknownLevel(level))?;
        Ok(GameState::at_level(spec, 0, level))
    }

    pub fn shoot(&self, state: &GameState, action: ActionId) -> Result<ShotOutcome, EngineError> {
        simulate_shot(state, action, &self.actions)
    }

    pub fn launch(&self, state: &GameState, launch: LaunchParams) -> Result<(ShotOutcome, Flight), EngineError> {
        simulate_launch(state, launch)
    }

    pub fn resolve(&self, state: &GameState) -> Result<Resolved, EngineError> {
        resolve_attempt(state, &self.pack)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::level::BlockKind;
    use crate::engine::physics::GRAVITY;

    fn single_level(pigs: Vec<Pig>, blocks: Vec<Block>, birds: u32) -> LevelSpec {
        LevelSpec {
            id: 0,
            birds,
            pigs,
            blocks,
            slingshot: Vec2::new(140.0, 120.0),
        }
    }

    fn state_for(level: &LevelSpec) -> GameState {
        GameState::at_level(level, 0, 0)
    }

    #[test]
    fn pig_at_maximum_range_point_clears_level() {
        // 45 degrees at full speed; the parabola returns to launch height after 2 v sin / g.
        let cfg = ActionConfig {
            n_angles: 3,
            n_extensions: 1,
            angle_min: 15.0,
            angle_max: 75.0,
            v_max: 60.0,
        };
        let a = ActionId(1);
        let launch = cfg.decode(a).unwrap();
        assert!((launch.angle_degrees() - 45.0).abs() < 1e-12);
        let origin = Vec2::new(140.0, 120.0);
        let range = launch.speed * launch.speed / GRAVITY;
        let impact_point = Vec2::new(origin.x + range, origin.y);
        let level = single_level(vec![Pig::new(impact_point, 12.0)], vec![], 2);
        let outcome = simulate_shot(&state_for(&level), a, &cfg).unwrap();
        assert_eq!(
            outcome.events,
            vec![ShotEvent::PigDestroyed(0), ShotEvent::BirdSpent, ShotEvent::LevelCleared]
        );
        assert_eq!(outcome.reward, PIG_POINTS + UNUSED_BIRD_POINTS);
        assert_eq!(outcome.next_state.status, Status::Cleared);
        assert_eq!(outcome.next_state.birds_left, 1);
    }

    #[test]
    fn weakest_shot_falls_short() {
        let cfg = ActionConfig::default();
        let launch = cfg.decode(ActionId(0)).unwrap();
        // same-height range of the weakest shot
        let range = launch.speed.powi(2) * (2.0 * launch.angle).sin() / GRAVITY;
        assert!((range - 25.87).abs() < 0.01, "{range}");
        let level = single_level(
            vec![Pig::new(Vec2::new(700.0, 15.0), 15.0)],
            vec![Block::new(BlockKind::Column, Vec2::new(650.0, 0.0), 10.0, 60.0)],
            3,
        );
        let state = state_for(&level);
        let outcome = simulate_shot(&state, ActionId(0), &cfg).unwrap();
        assert_eq!(outcome.events, vec![ShotEvent::BirdSpent]);
        assert_eq!(outcome.reward, 0);
        assert_eq!(outcome.next_state.pigs, state.pigs);
        assert_eq!(outcome.next_state.status, Status::InProgress);
    }

    #[test]
    fn last_bird_miss_fails_with_penalty() {
        let cfg = ActionConfig::default();
        let level = single_level(vec![Pig::new(Vec2::new(1100.0, 15.0), 15.0)], vec![], 1);
        let outcome = simulate_shot(&state_for(&level), ActionId(0), &cfg).unwrap();
        assert_eq!(outcome.events, vec![ShotEvent::BirdSpent, ShotEvent::LevelFailed]);
        assert_eq!(outcome.reward, FAILURE_PENALTY);
        assert_eq!(outcome.next_state.status, Status::Failed);
        assert_eq!(outcome.next_state.attempt_score, FAILURE_PENALTY);
    }

    #[test]
    fn terminal_and_empty_states_rejected() {
        let cfg = ActionConfig::default();
        let level = single_level(vec![Pig::new(Vec2::new(1100.0, 15.0), 15.0)], vec![], 1);
        let mut state = state_for(&level);
        state.status = Status::Failed;
        assert!(matches!(
            simulate_shot(&state, ActionId(0), &cfg),
            Err(EngineError::TerminalState(Status::Failed))
        ));
        let mut state = state_for(&level);
        state.birds_left = 0;
        assert!(matches!(simulate_shot(&state, ActionId(0), &cfg), Err(EngineError::NoBirdsLeft)));
    }

    #[test]
    fn resolve_advances_fails_and_completes() {
        let engine = Engine::bundled();
        let pack = engine.pack();

        let mut cleared = engine.level_state(3).unwrap();
        cleared.attempt_score = 42_000;
        cleared.level_reached = 3;
        cleared.pigs.clear();
        cleared.status = Status::Cleared;
        let r = resolve_attempt(&cleared, pack).unwrap();
        assert!(r.attempt_end.is_none());
        assert_eq!(r.state.level, 4);
        assert_eq!(r.state.level_reached, 4);
        assert_eq!(r.state.attempt_score, 42_000);
        assert_eq!(r.state.status, Status::InProgress);

        let mut failed = engine.level_state(5).unwrap();
        failed.attempt_score = 7_000;
        failed.birds_left = 0;
        failed.status = Status::Failed;
        let r = resolve_attempt(&failed, pack).unwrap();
        assert_eq!(r.state, engine.initial_state());
        assert_eq!(r.state.attempt_score, 0);
        let end = r.attempt_end.unwrap();
        assert_eq!(end.score, 7_000);
        assert_eq!(end.level_reached, 5);
        assert!(!end.completed_pack);

        let mut done = engine.level_state(10).unwrap();
        done.pigs.clear();
        done.status = Status::Cleared;
        let r = resolve_attempt(&done, pack).unwrap();
        assert!(r.attempt_end.unwrap().completed_pack);
        assert_eq!(r.state.level, 0);

        assert!(matches!(
            resolve_attempt(&engine.initial_state(), pack),
            Err(EngineError::NotTerminal)
        ));
    }

    #[test]
    fn reward_is_sum_of_event_points() {
        let engine = Engine::bundled();
        let mut state = engine.initial_state();
        for a in engine.actions().actions().cycle().step_by(7).take(200) {
            let outcome = engine.shoot(&state, a).unwrap();
            let total: i64 = outcome
                .events
                .iter()
                .map(|&e| ShotOutcome::event_points(e, outcome.next_state.birds_left))
                .sum();
            assert_eq!(total, outcome.reward);
            assert_eq!(outcome.next_state.attempt_score, state.attempt_score + outcome.reward);
            state = if outcome.next_state.status.is_terminal() {
                engine.resolve(&outcome.next_state).unwrap().state
            } else {
                outcome.next_state
            };
        }
    }
}
