//! Q-learning against RLSVI over several seeds, printed as summary tables.
//!
//! cargo run --release --example compare_algorithms -- [seeds]

use slingshot::features::ExtractorKind;
use slingshot::harness::{run_seeds, Algorithm, ExperimentConfig, Report};

fn main() {
    let n: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(4);
    let seeds: Vec<u64> = (0..n).collect();
    let mut report = Report::new();
    for algorithm in [Algorithm::qlearning(), Algorithm::rlsvi()] {
        for kind in [ExtractorKind::npp(), ExtractorKind::npps()] {
            let cfg = ExperimentConfig::new(kind, algorithm.clone(), 200, 0);
            for bundle in run_seeds(&cfg, &seeds) {
                let bundle = bundle.unwrap();
                println!(
                    "{:<10} {:<4} seed {}: final eval MA {:>8.0}",
                    cfg.algorithm.label(),
                    cfg.extractor.label(),
                    bundle.config.seed,
                    bundle.moving_average.last().unwrap()
                );
                report.add_config(&bundle.config, bundle.summary);
            }
        }
    }
    println!("\n{}", report.table1());
    println!("{}", report.table2());
}
