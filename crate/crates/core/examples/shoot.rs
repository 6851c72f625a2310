//! Fire a few shots at the first bundled level and print what happened.
//!
//! cargo run --example shoot

use slingshot::engine::{Engine, LaunchParams};

fn main() {
    let engine = Engine::bundled();
    let mut state = engine.initial_state();
    println!(
        "level {} with {} birds, {} pigs, {} blocks",
        state.level,
        state.birds_left,
        state.pigs.len(),
        state.blocks.len()
    );

    for (angle, extension) in [(20.0, 0.6), (35.0, 0.85), (50.0, 0.9)] {
        let launch = LaunchParams::from_degrees(angle, extension, engine.actions().v_max).unwrap();
        let (outcome, flight) = engine.launch(&state, launch).unwrap();
        println!(
            "{angle:>4}° x {extension:.2}: {:?}, reward {:>6}, bird {:?} at ({:.0}, {:.0})",
            outcome.events, outcome.reward, flight.fate, flight.final_position.x, flight.final_position.y
        );
        state = outcome.next_state;
        if state.status.is_terminal() {
            let resolved = engine.resolve(&state).unwrap();
            println!("level over: {:?}, next level {}", state.status, resolved.state.level);
            break;
        }
    }

    // the discrete action grid the agents use
    let a = slingshot::engine::ActionId(13);
    let launch = engine.actions().decode(a).unwrap();
    println!("action {} = {:.0}° at speed {:.1}", a.0, launch.angle_degrees(), launch.speed);
}
