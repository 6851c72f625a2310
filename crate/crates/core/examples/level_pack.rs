//! Build a one-level pack by hand, save it, and load it back.
//!
//! cargo run --example level_pack

use slingshot::engine::{
    load_level_pack, serialize_level_pack, Block, BlockKind, Engine, LevelPack, LevelSpec, Pig, Vec2,
};

fn main() {
    let level = LevelSpec {
        id: 0,
        birds: 2,
        slingshot: Vec2::new(140.0, 120.0),
        pigs: vec![Pig::new(Vec2::new(700.0, 118.0), 18.0)],
        blocks: vec![
            Block::new(BlockKind::Column, Vec2::new(660.0, 0.0), 20.0, 100.0),
            Block::new(BlockKind::Column, Vec2::new(720.0, 0.0), 20.0, 100.0),
            Block::new(BlockKind::Beam, Vec2::new(650.0, 100.0), 100.0, 20.0),
        ],
    };
    let pack = LevelPack::new(vec![level]).unwrap();
    let text = serialize_level_pack(&pack);
    let path = std::env::temp_dir().join("tower.pack");
    std::fs::write(&path, &text).unwrap();
    println!("wrote {} ({} bytes)", path.display(), text.len());

    let loaded = load_level_pack(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(loaded, pack);

    // which of the 32 grid actions hit the pig?
    let engine = Engine::new(loaded, Default::default()).unwrap();
    let state = engine.initial_state();
    let hits: Vec<usize> = engine
        .actions()
        .actions()
        .filter(|&a| engine.shoot(&state, a).unwrap().next_state.pigs.is_empty())
        .map(|a| a.0)
        .collect();
    println!("actions that clear the level in one shot: {hits:?}");

    // errors point at the problem
    let broken = text.replacen("\"birds\": 2", "\"birds\": 0", 1);
    println!("{}", load_level_pack(&broken).unwrap_err());
}
