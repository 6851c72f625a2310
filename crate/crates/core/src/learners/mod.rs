//! Linear value-function learners over sparse per-action features.
//!
//! Both learners score an action with `Q_w(s, a) = wᵀ φ(s, a)` and act
//! greedily with ties broken towards the lowest action index. They differ in
//! how they explore and how they fit `w`:
//!
//! - [`QLearner`]: epsilon-greedy exploration, one semi-gradient TD step per transition.
//! - [`RlsviAgent`]: keeps every transition, fits a Gaussian posterior over
//!   `w` by Bayesian least squares and acts greedily under a weight vector
//!   sampled from it (per-weight variances only).

mod bayes;
mod checkpoint;
mod qlearning;
mod rlsvi;

use rand::Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::engine::{ActionId, GameState};
use crate::features::{FeatureError, FeatureExtractor, StateFeatures};
use crate::sparse::{SparseError, SparseVector};

pub use bayes::{rlsvi_fit, sample_policy, Posterior, SparseBayesLs};
pub use checkpoint::{Checkpoint, CHECKPOINT_FORMAT, CHECKPOINT_VERSION};
pub use qlearning::{q_update, q_update_in_place, QLearner, QLearnerConfig};
pub use rlsvi::{RlsviAgent, RlsviHyper};

#[derive(Debug, thiserror::Error)]
pub enum LearnerError {
    #[error("dimension mismatch: weights have {weights}, features have {features}")]
    DimensionMismatch { weights: usize, features: usize },
    #[error("non-finite weights after update; learning diverged")]
    Diverged,
    #[error("posterior solve failed: {0}")]
    Numerical(String),
    #[error("invalid learner configuration: {0}")]
    InvalidConfig(String),
    #[error("checkpoint error: {0}")]
    Checkpoint(String),
    #[error(transparent)]
    Feature(#[from] FeatureError),
    #[error(transparent)]
    Sparse(#[from] SparseError),
}

/// Dense weight vector `w`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WeightVector(pub Vec<f64>);

impl WeightVector {
    pub fn zeros(dim: usize) -> Self {
        WeightVector(vec![0.0; dim])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }

    pub fn scaled(&self, c: f64) -> Self {
        WeightVector(self.0.iter().map(|v| v * c).collect())
    }
}

/// One remembered step: φ(s, a), reward, φ(s', a') for every a', terminal flag.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransitionRecord {
    pub phi: SparseVector,
    pub reward: f64,
    /// Empty exactly when `terminal`.
    pub successor_phis: Vec<SparseVector>,
    pub terminal: bool,
}

impl TransitionRecord {
    pub fn terminal(phi: SparseVector, reward: f64) -> Self {
        TransitionRecord {
            phi,
            reward,
            successor_phis: Vec::new(),
            terminal: true,
        }
    }

    pub fn new(phi: SparseVector, reward: f64, successor_phis: Vec<SparseVector>) -> Self {
        let terminal = successor_phis.is_empty();
        TransitionRecord {
            phi,
            reward,
            successor_phis,
            terminal,
        }
    }

    /// Builds a record from engine states via `extractor`; `successor` is `None` at attempt end.
    pub fn from_states(
        extractor: &FeatureExtractor,
        state: &GameState,
        action: ActionId,
        reward: f64,
        successor: Option<&GameState>,
    ) -> Result<Self, LearnerError> {
        let phi = extractor.extract(state, action)?;
        Ok(match successor {
            Some(next) => TransitionRecord::new(phi, reward, extractor.extract_all(next)?),
            None => TransitionRecord::terminal(phi, reward),
        })
    }

    /// `r + γ max_a' wᵀφ(s', a')`, with the bootstrap term zero when terminal.
    pub fn target(&self, w: &[f64], gamma: f64) -> Result<f64, LearnerError> {
        if self.terminal {
            return Ok(self.reward);
        }
        let mut best = f64::NEG_INFINITY;
        for phi in &self.successor_phis {
            best = best.max(q_value(w, phi)?);
        }
        Ok(self.reward + gamma * best)
    }
}

/// `wᵀφ`.
pub fn q_value(w: &[f64], phi: &SparseVector) -> Result<f64, LearnerError> {
    phi.dot_dense(w).map_err(|_| LearnerError::DimensionMismatch {
        weights: w.len(),
        features: phi.dim(),
    })
}

/// Q-values of every action from the action-independent feature block.
pub fn action_values(w: &[f64], block: &StateFeatures, actions: usize) -> Result<Vec<f64>, LearnerError> {
    let b = block.block_dim();
    if w.len() != b * actions {
        return Err(LearnerError::DimensionMismatch {
            weights: w.len(),
            features: b * actions,
        });
    }
    Ok((0..actions)
        .map(|a| {
            let base = a * b;
            block.entries().iter().map(|&(i, v)| w[base + i] * v).sum()
        })
        .collect())
}

/// Index and value of the maximum; exact ties go to the lowest index.
pub fn argmax_lowest(values: &[f64]) -> (ActionId, f64) {
    let mut best = (0, values[0]);
    for (a, &v) in values.iter().enumerate().skip(1) {
        if v > best.1 {
            best = (a, v);
        }
    }
    (ActionId(best.0), best.1)
}

/// Greedy action under `w` in state `s`.
pub fn best_action(
    w: &[f64],
    s: &GameState,
    extractor: &FeatureExtractor,
) -> Result<(ActionId, f64), LearnerError> {
    let block = extractor.state_features(s)?;
    let values = action_values(w, &block, extractor.actions())?;
    Ok(argmax_lowest(&values))
}

/// Uniform random action with probability `epsilon`, greedy otherwise.
pub fn epsilon_greedy<R: Rng + ?Sized>(
    w: &[f64],
    s: &GameState,
    extractor: &FeatureExtractor,
    epsilon: f64,
    rng: &mut R,
) -> Result<ActionId, LearnerError> {
    let explore = rng.random::<f64>() < epsilon;
    if explore {
        Ok(ActionId(rng.random_range(0..extractor.actions())))
    } else {
        best_action(w, s, extractor).map(|(a, _)| a)
    }
}

/// Whether the current attempt may explore and learn.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Explore,
    Eval,
}

/// Common interface the experiment harness drives.
pub trait Agent {
    fn name(&self) -> &'static str;

    fn extractor(&self) -> &FeatureExtractor;

    /// Chooses an action. `Eval` mode never explores.
    fn act(&mut self, s: &GameState, mode: Mode) -> Result<ActionId, LearnerError>;

    /// Learns from a transition. Only called for `Explore` attempts.
    fn observe(&mut self, record: TransitionRecord) -> Result<(), LearnerError>;

    /// Bytes that fully describe the learned state and random stream.
    fn state_bytes(&self) -> Vec<u8>;

    /// SHA-256 of [`Agent::state_bytes`], hex encoded.
    fn state_hash(&self) -> String {
        hex_digest(&self.state_bytes())
    }

    fn checkpoint(&self) -> Checkpoint;
}

pub(crate) fn hex_digest(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

pub(crate) fn push_f64s(out: &mut Vec<u8>, values: &[f64]) {
    out.extend_from_slice(&(values.len() as u64).to_le_bytes());
    for v in values {
        out.extend_from_slice(&v.to_bits().to_le_bytes());
    }
}
