//! Run RLSVI through the experiment runner and look at its posterior.
//!
//! cargo run --release --example rlsvi

use slingshot::features::ExtractorKind;
use slingshot::harness::{Algorithm, AttemptKind, ExperimentConfig, Runner};
use slingshot::learners::RlsviHyper;

fn main() {
    let hyper = RlsviHyper {
        refit_period: 1,
        ..RlsviHyper::default()
    };
    let cfg = ExperimentConfig::new(ExtractorKind::npp(), Algorithm::Rlsvi(hyper), 60, 3);
    let mut runner = Runner::from_config(&cfg).unwrap();
    for _ in 0..cfg.total_attempts {
        let kind = runner.next_kind();
        let r = runner.run_attempt(kind).unwrap().clone();
        if kind == AttemptKind::Eval && r.index % 10 == 9 {
            println!("eval attempt {:>2}: score {:>7}, level {}", r.index, r.score, r.max_level_reached);
        }
    }

    // the checkpoint carries the posterior
    let cp = runner.agent().checkpoint();
    let posterior = cp.posterior.unwrap();
    let touched = posterior.variance.iter().filter(|&&v| v < 100.0).count();
    let tightest = posterior.variance.iter().cloned().fold(f64::INFINITY, f64::min);
    println!(
        "{} transitions; {touched} of {} weights moved off the prior, smallest variance {tightest:.4}",
        cp.memory_len, cp.dim
    );
}
