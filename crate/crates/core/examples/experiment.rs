//! Run one configured experiment and export CSV results.
//!
//! cargo run --release --example experiment -- [out-dir]

use std::path::PathBuf;

use slingshot::features::ExtractorKind;
use slingshot::harness::{export, run_experiment, Algorithm, ExperimentConfig, ExportFormat};

fn main() {
    let out = std::env::args().nth(1).map_or_else(|| std::env::temp_dir().join("slingshot-run"), PathBuf::from);
    let cfg = ExperimentConfig::new(ExtractorKind::npp(), Algorithm::qlearning(), 300, 0);
    println!("{}", cfg.to_json());

    let bundle = run_experiment(&cfg).unwrap();
    for path in export(&bundle, &out, ExportFormat::Csv).unwrap() {
        println!("wrote {}", path.display());
    }
    let ma = &bundle.moving_average;
    println!(
        "eval moving average: first {:.0}, middle {:.0}, last {:.0}",
        ma[0],
        ma[ma.len() / 2],
        ma[ma.len() - 1]
    );
    println!("summary: {:?}", bundle.summary);
}
