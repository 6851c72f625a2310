//! Slingshot game MDP and a small reinforcement-learning workbench.
//!
//! - [`engine`]: deterministic turn-based game with eleven bundled levels.
//! - [`features`]: sparse per-action feature extractors (PV, PP, NPP, NPPS, NPPO).
//! - [`learners`]: epsilon-greedy linear Q-learning and RLSVI with diagonal posterior sampling.
//! - [`harness`]: explore/eval experiment protocol, moving averages, summaries and exports.
//! - [`service`]: session store and HTTP API so a human can play the same game.

pub mod engine;
pub mod features;
pub mod harness;
pub mod learners;
pub mod service;
pub mod sparse;
