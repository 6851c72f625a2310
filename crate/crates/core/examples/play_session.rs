//! Play through the session service in-process, the way the web client does,
//! and print the summary row a human would export.
//!
//! cargo run --example play_session

use slingshot::harness::summary_row;
use slingshot::service::{SessionStore, ShotRequest};

fn main() {
    let store = SessionStore::with_defaults();
    let session = store.create_session(Some("default")).unwrap();
    println!("session {} on pack {} ({} levels)", session.id, session.pack, session.levels);

    let shots = [(38.0, 0.82), (52.0, 0.9), (30.0, 0.7), (45.0, 0.95), (25.0, 1.0), (60.0, 0.8)];
    for (angle_deg, extension) in shots {
        let r = store.submit_shot(&session.id, ShotRequest { angle_deg, extension }).unwrap();
        println!(
            "{angle_deg:>4}° x {extension:.2}: reward {:>6}, {} trajectory points, now level {} with {} birds",
            r.reward,
            r.trajectory.len(),
            r.state.level,
            r.state.birds_left
        );
        if let Some(attempt) = r.attempt_ended {
            println!("attempt over: score {}, reached level {}", attempt.score, attempt.max_level_reached);
        }
    }
    let summary = store.session_summary(&session.id).unwrap();
    println!("{}", summary_row("Human", "----", &summary));
}
