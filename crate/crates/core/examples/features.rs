//! Compare the five feature extractors on the start of level 3.
//!
//! cargo run --example features

use slingshot::engine::{ActionId, Engine};
use slingshot::features::{ExtractorKind, FeatureExtractor};

fn main() {
    let engine = Engine::bundled();
    let state = engine.level_state(3).unwrap();
    let pigs: Vec<_> = state.pig_centers().map(|c| (c.x, c.y)).collect();
    println!("pigs at {pigs:?}");

    for kind in [
        ExtractorKind::pv(),
        ExtractorKind::pp(),
        ExtractorKind::npp(),
        ExtractorKind::npps(),
        ExtractorKind::nppo(),
    ] {
        let ex = FeatureExtractor::new(kind, engine.action_count()).unwrap();
        let phi = ex.extract(&state, ActionId(2)).unwrap();
        let shown: Vec<String> = phi.iter().take(6).map(|(i, v)| format!("{i}:{v}")).collect();
        println!(
            "{:<5} dim {:>5}, block {:>4}, {:>2} active: {}",
            ex.kind().label(),
            ex.dimension(),
            ex.block_dim(),
            phi.nnz(),
            shown.join(" ")
        );
    }
}
