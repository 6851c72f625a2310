//! Train an epsilon-greedy linear Q-learner by hand with the Agent API.
//!
//! cargo run --release --example q_learning

use slingshot::engine::{Engine, Resolved};
use slingshot::features::{ExtractorKind, FeatureExtractor};
use slingshot::learners::{Agent, Mode, QLearner, QLearnerConfig, TransitionRecord};

fn main() {
    let engine = Engine::bundled();
    let extractor = FeatureExtractor::new(ExtractorKind::npp(), engine.action_count()).unwrap();
    let mut agent = QLearner::new(extractor, QLearnerConfig::default(), 42).unwrap();

    for attempt in 0..200 {
        let mut state = engine.initial_state();
        let end = loop {
            let a = agent.act(&state, Mode::Explore).unwrap();
            let outcome = engine.shoot(&state, a).unwrap();
            let next = if outcome.next_state.status.is_terminal() {
                engine.resolve(&outcome.next_state).unwrap()
            } else {
                Resolved {
                    state: outcome.next_state.clone(),
                    attempt_end: None,
                }
            };
            let successor = next.attempt_end.is_none().then_some(&next.state);
            let record =
                TransitionRecord::from_states(agent.extractor(), &state, a, outcome.reward as f64, successor).unwrap();
            agent.observe(record).unwrap();
            match next.attempt_end {
                Some(end) => break end,
                None => state = next.state,
            }
        };
        if attempt % 20 == 0 {
            println!("attempt {attempt:>3}: score {:>7}, reached level {}", end.score, end.level_reached);
        }
    }
    let w = agent.weights();
    let nonzero = w.0.iter().filter(|v| **v != 0.0).count();
    println!("{} updates, {nonzero} of {} weights nonzero", agent.updates(), w.len());
}
