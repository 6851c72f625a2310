//! Fixed-step ballistic flight of a point bird through pigs and blocks.
//!
//! Position and velocity advance with the exact constant-gravity update, so
//! between impacts the sampled points lie on the analytic parabola. Each step
//! resolves at most one contact.

use serde::{Deserialize, Serialize};

use super::action::LaunchParams;
use super::geometry::{Vec2, WORLD_HEIGHT, WORLD_WIDTH};
use super::level::{Block, Pig};

pub const GRAVITY: f64 = 10.0;
pub const TIME_STEP: f64 = 0.01;
/// Minimum bird speed for a block to break on contact.
pub const BREAK_SPEED: f64 = 30.0;
/// Flight ends once the bird is slower than this.
pub const STOP_SPEED: f64 = 5.0;
/// Speed multiplier applied after breaking through a block.
pub const BREAK_DAMPING: f64 = 0.5;
/// Every n-th integration point is kept in the returned path.
pub const PATH_STRIDE: usize = 10;
const MAX_STEPS: usize = 200_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", content = "index")]
pub enum Impact {
    Pig(usize),
    Block(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BirdFate {
    Grounded,
    ExitedWorld,
    /// Blocked by an unbreakable contact or slowed below the stop speed.
    Stopped,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Flight {
    /// Destroyed objects in time order; indices refer to the input slices.
    pub impacts: Vec<Impact>,
    pub fate: BirdFate,
    pub final_position: Vec2,
    pub steps: usize,
    /// Sampled bird positions, including launch and final point.
    pub path: Vec<Vec2>,
}

#[derive(Clone, Copy)]
enum Contact {
    Pig(usize),
    Block(usize),
}

/// Integrates a shot from `origin` until the bird lands, leaves the world or stops.
///
/// Pigs are always destroyed on contact. A block breaks when the bird meets
/// it at [`BREAK_SPEED`] or faster, after which the bird continues at
/// [`BREAK_DAMPING`] times its speed; slower contact stops the bird.
pub fn trajectory_impact(launch: LaunchParams, pigs: &[Pig], blocks: &[Block], origin: Vec2) -> Flight {
    let mut pos = origin;
    let mut vel = Vec2::new(launch.speed * launch.angle.cos(), launch.speed * launch.angle.sin());
    let mut pig_live: Vec<bool> = pigs.iter().map(|p| p.alive).collect();
    let mut block_live: Vec<bool> = blocks.iter().map(|b| b.intact).collect();
    let mut impacts = Vec::new();
    let mut path = vec![pos];
    let half_g_dt2 = 0.5 * GRAVITY * TIME_STEP * TIME_STEP;

    let mut steps = 0;
    let fate = loop {
        if steps >= MAX_STEPS {
            break BirdFate::Stopped;
        }
        steps += 1;
        let prev = pos;
        pos = Vec2::new(pos.x + vel.x * TIME_STEP, pos.y + vel.y * TIME_STEP - half_g_dt2);
        vel = Vec2::new(vel.x, vel.y - GRAVITY * TIME_STEP);
        if steps % PATH_STRIDE == 0 {
            path.push(pos);
        }

        if let Some(contact) = nearest_contact(prev, pos, pigs, &pig_live, blocks, &block_live) {
            match contact {
                Contact::Pig(i) => {
                    pig_live[i] = false;
                    impacts.push(Impact::Pig(i));
                }
                Contact::Block(i) => {
                    if vel.length() >= BREAK_SPEED {
                        block_live[i] = false;
                        impacts.push(Impact::Block(i));
                        vel = vel * BREAK_DAMPING;
                    } else {
                        break BirdFate::Stopped;
                    }
                }
            }
        }

        if pos.y <= 0.0 {
            break BirdFate::Grounded;
        }
        if pos.x < 0.0 || pos.x > WORLD_WIDTH || pos.y > WORLD_HEIGHT {
            break BirdFate::ExitedWorld;
        }
        if vel.length() < STOP_SPEED {
            break BirdFate::Stopped;
        }
    };
    if path.last() != Some(&pos) {
        path.push(pos);
    }

    Flight {
        impacts,
        fate,
        final_position: pos,
        steps,
        path,
    }
}

/// Picks the overlapping object nearest to the previous position; pigs
/// precede blocks in index order for exact ties.
fn nearest_contact(
    prev: Vec2,
    pos: Vec2,
    pigs: &[Pig],
    pig_live: &[bool],
    blocks: &[Block],
    block_live: &[bool],
) -> Option<Contact> {
    let mut best: Option<(f64, Contact)> = None;
    let mut consider = |d: f64, c: Contact| {
        if best.is_none_or(|(bd, _)| d < bd) {
            best = Some((d, c));
        }
    };
    for (i, pig) in pigs.iter().enumerate() {
        if pig_live[i] && pig.contains(pos) {
            consider(pig.distance_to(prev), Contact::Pig(i));
        }
    }
    for (i, block) in blocks.iter().enumerate() {
        if block_live[i] && block.rect.contains(pos) {
            consider(block.rect.distance_to(prev), Contact::Block(i));
        }
    }
    best.map(|(_, c)| c)
}
