mod common;

use slingshot::engine::{
    load_level_pack, serialize_level_pack, ActionConfig, ActionId, Engine, EngineError, LevelPack, ShotEvent, Status,
    DEFAULT_PACK,
};

#[test]
fn every_bundled_level_can_be_cleared() {
    let engine = Engine::bundled();
    assert_eq!(engine.pack().len(), 11);
    for level in 0..engine.pack().len() {
        let start = engine.level_state(level).unwrap();
        let solution = common::solve_level(&engine, &start)
            .unwrap_or_else(|| panic!("level {level} has no clearing sequence"));
        assert!(solution.len() <= start.birds_left as usize);

        // replay the solution and check the bookkeeping along the way
        let mut state = start.clone();
        for &a in &solution {
            let outcome = engine.shoot(&state, a).unwrap();
            assert_eq!(outcome.next_state.attempt_score, state.attempt_score + outcome.reward);
            state = outcome.next_state;
        }
        assert_eq!(state.status, Status::Cleared);
    }
}

#[test]
fn playing_through_the_pack_completes_the_attempt() {
    let engine = Engine::bundled();
    let mut state = engine.initial_state();
    let mut total = 0;
    loop {
        let solution = common::solve_level(&engine, &state).unwrap();
        for a in solution {
            let outcome = engine.shoot(&state, a).unwrap();
            total += outcome.reward;
            state = outcome.next_state;
        }
        let resolved = engine.resolve(&state).unwrap();
        match resolved.attempt_end {
            Some(e) => {
                assert!(e.completed_pack);
                assert_eq!(e.level_reached, 10);
                assert_eq!(e.score, total);
                break;
            }
            None => state = resolved.state,
        }
    }
}

#[test]
fn failing_any_level_returns_to_level_zero() {
    let engine = Engine::bundled();
    let mut state = engine.level_state(5).unwrap();
    state.attempt_score = 123_000;
    // the weakest, flattest shot lands short of every level's structures
    while state.status == Status::InProgress {
        state = engine.shoot(&state, ActionId(0)).unwrap().next_state;
    }
    assert_eq!(state.status, Status::Failed);
    let resolved = engine.resolve(&state).unwrap();
    let end = resolved.attempt_end.unwrap();
    assert!(!end.completed_pack);
    assert_eq!(end.level_reached, 5);
    assert_eq!(resolved.state.level, 0);
    assert_eq!(resolved.state.attempt_score, 0);
}

#[test]
fn pack_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("copy.pack");
    let pack = LevelPack::bundled();
    std::fs::write(&path, serialize_level_pack(&pack)).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text, DEFAULT_PACK);
    assert_eq!(load_level_pack(&text).unwrap(), pack);
}

#[test]
fn broken_pack_reports_where() {
    let text = DEFAULT_PACK.replacen("\"birds\": 3", "\"birds\": \"three\"", 1);
    match load_level_pack(&text) {
        Err(EngineError::Parse { line, .. }) => assert!(line > 1),
        other => panic!("expected a parse error, got {other:?}"),
    }
}

#[test]
fn custom_action_grid() {
    let cfg = ActionConfig {
        n_angles: 3,
        n_extensions: 2,
        angle_min: 20.0,
        angle_max: 60.0,
        v_max: 100.0,
    };
    let engine = Engine::new(LevelPack::bundled(), cfg).unwrap();
    assert_eq!(engine.action_count(), 6);
    let s = engine.initial_state();
    assert!(engine.shoot(&s, ActionId(5)).is_ok());
    assert!(matches!(engine.shoot(&s, ActionId(6)), Err(EngineError::ActionOutOfRange { .. })));
}

#[test]
fn events_account_for_reward() {
    let engine = Engine::bundled();
    let state = engine.initial_state();
    for a in engine.actions().actions() {
        let outcome = engine.shoot(&state, a).unwrap();
        let destroyed = outcome
            .events
            .iter()
            .filter(|e| matches!(e, ShotEvent::PigDestroyed(_) | ShotEvent::BlockDestroyed(_)))
            .count();
        assert_eq!(
            state.pigs.len() + state.blocks.len() - destroyed,
            outcome.next_state.pigs.len() + outcome.next_state.blocks.len()
        );
        assert_eq!(outcome.next_state.birds_left + 1, state.birds_left);
    }
}
