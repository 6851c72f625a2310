//! Save a trained Q-learner and restore its weights into a fresh one.
//!
//! cargo run --release --example checkpoint

use slingshot::engine::Engine;
use slingshot::features::{ExtractorKind, FeatureExtractor};
use slingshot::harness::{Algorithm, ExperimentConfig, Runner};
use slingshot::learners::{best_action, Checkpoint, QLearner, QLearnerConfig};

fn main() {
    let cfg = ExperimentConfig::new(ExtractorKind::npp(), Algorithm::qlearning(), 100, 9);
    let mut runner = Runner::from_config(&cfg).unwrap();
    runner.run_remaining(&cfg).unwrap();

    let path = std::env::temp_dir().join("q-npp.checkpoint.json");
    runner.agent().checkpoint().save(&path).unwrap();
    println!("saved {}", path.display());

    let cp = Checkpoint::load(&path).unwrap();
    let extractor = FeatureExtractor::new(ExtractorKind::npp(), 32).unwrap();
    cp.check_extractor(&extractor).unwrap();
    let mut fresh = QLearner::new(extractor, QLearnerConfig::default(), 0).unwrap();
    fresh.set_weights(cp.weights).unwrap();

    let state = Engine::bundled().initial_state();
    let (a, q) = best_action(&fresh.weights().0, &state, runner.agent().extractor()).unwrap();
    println!("restored greedy action at level 0: {} (Q = {q:.0})", a.0);

    // a checkpoint refuses an extractor it was not trained with
    let other = FeatureExtractor::new(ExtractorKind::npps(), 32).unwrap();
    println!("{}", Checkpoint::load(&path).unwrap().check_extractor(&other).unwrap_err());
}
