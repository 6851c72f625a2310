use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{
    best_action, epsilon_greedy, push_f64s, q_value, Agent, Checkpoint, LearnerError, Mode, TransitionRecord,
    WeightVector,
};
use crate::engine::{ActionId, GameState};
use crate::features::FeatureExtractor;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QLearnerConfig {
    /// Probability of a uniformly random action during explore attempts.
    pub epsilon: f64,
    /// Learning rate.
    pub eta: f64,
    pub gamma: f64,
}

impl Default for QLearnerConfig {
    fn default() -> Self {
        QLearnerConfig {
            epsilon: 0.3,
            eta: 0.01,
            gamma: 0.95,
        }
    }
}

impl QLearnerConfig {
    pub fn validate(&self) -> Result<(), LearnerError> {
        if !(0.0..=1.0).contains(&self.epsilon) {
            return Err(LearnerError::InvalidConfig("epsilon must lie in [0, 1]".into()));
        }
        if !(self.eta > 0.0 && self.eta.is_finite()) {
            return Err(LearnerError::InvalidConfig("eta must be positive".into()));
        }
        if !(0.0..1.0).contains(&self.gamma) {
            return Err(LearnerError::InvalidConfig("gamma must lie in [0, 1)".into()));
        }
        Ok(())
    }
}

/// Semi-gradient TD step: `w += η (target − wᵀφ) φ`.
///
/// Only the coordinates present in `t.phi` change. Returns
/// [`LearnerError::Diverged`] and leaves `w` untouched if the step would
/// produce a non-finite weight.
pub fn q_update_in_place(w: &mut [f64], t: &TransitionRecord, cfg: &QLearnerConfig) -> Result<(), LearnerError> {
    let prediction = q_value(w, &t.phi)?;
    let td_error = t.target(w, cfg.gamma)? - prediction;
    let step = cfg.eta * td_error;
    if t.phi.iter().any(|(i, v)| !(w[i] + step * v).is_finite()) {
        return Err(LearnerError::Diverged);
    }
    for (i, v) in t.phi.iter() {
        w[i] += step * v;
    }
    Ok(())
}

pub fn q_update(w: &WeightVector, t: &TransitionRecord, cfg: &QLearnerConfig) -> Result<WeightVector, LearnerError> {
    let mut next = w.clone();
    q_update_in_place(&mut next.0, t, cfg)?;
    Ok(next)
}

/// Epsilon-greedy linear Q-learner.
#[derive(Clone, Debug)]
pub struct QLearner {
    extractor: FeatureExtractor,
    cfg: QLearnerConfig,
    weights: WeightVector,
    rng: ChaCha8Rng,
    updates: u64,
}

impl QLearner {
    pub fn new(extractor: FeatureExtractor, cfg: QLearnerConfig, seed: u64) -> Result<Self, LearnerError> {
        cfg.validate()?;
        let weights = WeightVector::zeros(extractor.dimension());
        Ok(QLearner {
            extractor,
            cfg,
            weights,
            rng: ChaCha8Rng::seed_from_u64(seed),
            updates: 0,
        })
    }

    pub fn weights(&self) -> &WeightVector {
        &self.weights
    }

    pub fn config(&self) -> &QLearnerConfig {
        &self.cfg
    }

    pub fn updates(&self) -> u64 {
        self.updates
    }

    /// Replaces the weights, e.g. from a checkpoint.
    pub fn set_weights(&mut self, weights: WeightVector) -> Result<(), LearnerError> {
        if weights.len() != self.extractor.dimension() {
            return Err(LearnerError::DimensionMismatch {
                weights: weights.len(),
                features: self.extractor.dimension(),
            });
        }
        self.weights = weights;
        Ok(())
    }
}

impl Agent for QLearner {
    fn name(&self) -> &'static str {
        "Q-Learning"
    }

    fn extractor(&self) -> &FeatureExtractor {
        &self.extractor
    }

    fn act(&mut self, s: &GameState, mode: Mode) -> Result<ActionId, LearnerError> {
        match mode {
            Mode::Explore => epsilon_greedy(&self.weights.0, s, &self.extractor, self.cfg.epsilon, &mut self.rng),
            Mode::Eval => best_action(&self.weights.0, s, &self.extractor).map(|(a, _)| a),
        }
    }

    fn observe(&mut self, record: TransitionRecord) -> Result<(), LearnerError> {
        q_update_in_place(&mut self.weights.0, &record, &self.cfg)?;
        self.updates += 1;
        Ok(())
    }

    fn state_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        push_f64s(&mut out, &self.weights.0);
        out.extend_from_slice(&self.updates.to_le_bytes());
        out.extend_from_slice(&self.rng.get_word_pos().to_le_bytes());
        out
    }

    fn checkpoint(&self) -> Checkpoint {
        Checkpoint::new(&self.extractor, self.name(), self.weights.clone(), None, self.updates as usize)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sparse::SparseVector;
    use rand::Rng;

    fn scalar(v: f64) -> SparseVector {
        SparseVector::from_dense(&[v])
    }

    #[test]
    fn zero_eta_config_is_rejected() {
        let cfg = QLearnerConfig {
            eta: 0.0,
            ..QLearnerConfig::default()
        };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn zero_eta_update_leaves_weights() {
        // q_update itself accepts eta = 0; only agent construction validates
        let cfg = QLearnerConfig {
            epsilon: 0.0,
            eta: 0.0,
            gamma: 0.9,
        };
        let w = WeightVector(vec![0.5, -1.0]);
        let t = TransitionRecord::terminal(SparseVector::from_dense(&[1.0, 2.0]), 10.0);
        assert_eq!(q_update(&w, &t, &cfg).unwrap(), w);
    }

    #[test]
    fn scalar_terminal_update() {
        let cfg = QLearnerConfig {
            epsilon: 0.0,
            eta: 0.1,
            gamma: 0.9,
        };
        let t = TransitionRecord::terminal(scalar(1.0), 10.0);
        let w = q_update(&WeightVector(vec![0.0]), &t, &cfg).unwrap();
        assert!((w.0[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn only_active_coordinates_change() {
        let cfg = QLearnerConfig::default();
        let phi = SparseVector::from_sorted(6, [(1, 1.0), (4, 2.0)]).unwrap();
        let succ = vec![SparseVector::from_sorted(6, [(0, 1.0)]).unwrap()];
        let t = TransitionRecord::new(phi, 3.0, succ);
        let w = WeightVector(vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        let next = q_update(&w, &t, &cfg).unwrap();
        for i in [0, 2, 3, 5] {
            assert_eq!(next.0[i], w.0[i]);
        }
        assert_ne!(next.0[1], w.0[1]);
    }

    #[test]
    fn fixed_point_is_stationary() {
        // w·φ = r + γ max w·φ' : 2*1 = 1 + 0.5 * 2
        let cfg = QLearnerConfig {
            epsilon: 0.0,
            eta: 0.5,
            gamma: 0.5,
        };
        let phi = SparseVector::from_sorted(3, [(0, 1.0)]).unwrap();
        let succ = vec![
            SparseVector::from_sorted(3, [(1, 1.0)]).unwrap(),
            SparseVector::from_sorted(3, [(2, 1.0)]).unwrap(),
        ];
        let t = TransitionRecord::new(phi, 1.0, succ);
        let w = WeightVector(vec![2.0, 2.0, -7.0]);
        assert_eq!(q_update(&w, &t, &cfg).unwrap(), w);
    }

    #[test]
    fn divergence_is_reported() {
        let cfg = QLearnerConfig {
            epsilon: 0.0,
            eta: 1e300,
            gamma: 0.9,
        };
        let t = TransitionRecord::terminal(scalar(1e10), 1e10);
        let mut w = vec![0.0];
        assert!(matches!(q_update_in_place(&mut w, &t, &cfg), Err(LearnerError::Diverged)));
        assert_eq!(w, vec![0.0]);
    }

    #[test]
    fn dimension_mismatch() {
        let cfg = QLearnerConfig::default();
        let t = TransitionRecord::terminal(SparseVector::from_dense(&[1.0, 1.0]), 1.0);
        assert!(matches!(
            q_update(&WeightVector(vec![0.0]), &t, &cfg),
            Err(LearnerError::DimensionMismatch { .. })
        ));
    }

    /// Reference TD step written against dense vectors.
    fn dense_reference(w: &[f64], phi: &[f64], r: f64, succ: &[Vec<f64>], cfg: &QLearnerConfig) -> Vec<f64> {
        let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
        let boot = if succ.is_empty() {
            0.0
        } else {
            succ.iter().map(|s| dot(w, s)).fold(f64::NEG_INFINITY, f64::max)
        };
        let delta = r + cfg.gamma * boot - dot(w, phi);
        w.iter().zip(phi).map(|(wi, pi)| wi + cfg.eta * delta * pi).collect()
    }

    #[test]
    fn matches_dense_reference() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let cfg = QLearnerConfig {
            epsilon: 0.0,
            eta: 0.05,
            gamma: 0.9,
        };
        let sparse_dense = |rng: &mut ChaCha8Rng, dim: usize| -> Vec<f64> {
            (0..dim)
                .map(|_| if rng.random::<f64>() < 0.25 { rng.random_range(-2.0..2.0) } else { 0.0 })
                .collect()
        };
        for _ in 0..300 {
            let dim = rng.random_range(1..30);
            let w: Vec<f64> = (0..dim).map(|_| rng.random_range(-3.0..3.0)).collect();
            let phi = sparse_dense(&mut rng, dim);
            let n_succ = rng.random_range(0..4);
            let succ: Vec<Vec<f64>> = (0..n_succ).map(|_| sparse_dense(&mut rng, dim)).collect();
            let r = rng.random_range(-10.0..10.0);
            let t = TransitionRecord::new(
                SparseVector::from_dense(&phi),
                r,
                succ.iter().map(|s| SparseVector::from_dense(s)).collect(),
            );
            let got = q_update(&WeightVector(w.clone()), &t, &cfg).unwrap();
            let expected = dense_reference(&w, &phi, r, &succ, &cfg);
            for (g, e) in got.0.iter().zip(&expected) {
                assert!((g - e).abs() <= 1e-12, "{g} vs {e}");
            }
        }
    }
}
