use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{
    best_action, push_f64s, sample_policy, Agent, Checkpoint, LearnerError, Mode, Posterior, SparseBayesLs,
    TransitionRecord, WeightVector,
};
use crate::engine::{ActionId, GameState};
use crate::features::FeatureExtractor;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RlsviHyper {
    pub gamma: f64,
    /// Noise standard deviation of the linear model.
    pub sigma: f64,
    /// Variance of the isotropic zero-mean prior.
    pub prior_variance: f64,
    /// Recorded transitions between posterior refits.
    pub refit_period: usize,
}

impl Default for RlsviHyper {
    fn default() -> Self {
        RlsviHyper {
            gamma: 0.95,
            sigma: 1.0,
            prior_variance: 100.0,
            refit_period: 1,
        }
    }
}

impl RlsviHyper {
    pub fn validate(&self) -> Result<(), LearnerError> {
        if !(0.0..1.0).contains(&self.gamma) {
            return Err(LearnerError::InvalidConfig("gamma must lie in [0, 1)".into()));
        }
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return Err(LearnerError::InvalidConfig("sigma must be positive".into()));
        }
        if !(self.prior_variance > 0.0 && self.prior_variance.is_finite()) {
            return Err(LearnerError::InvalidConfig("prior_variance must be positive".into()));
        }
        if self.refit_period == 0 {
            return Err(LearnerError::InvalidConfig("refit_period must be at least 1".into()));
        }
        Ok(())
    }
}

/// Continuous-mode RLSVI: every `refit_period` transitions the posterior is
/// refit against targets bootstrapped from the current sampled weights, and a
/// fresh policy is drawn from it.
pub struct RlsviAgent {
    extractor: FeatureExtractor,
    hyper: RlsviHyper,
    memory: Vec<TransitionRecord>,
    solver: SparseBayesLs,
    posterior: Posterior,
    sampled: WeightVector,
    rng: ChaCha8Rng,
    since_refit: usize,
    fits: usize,
    failed_fits: usize,
}

impl RlsviAgent {
    pub fn new(extractor: FeatureExtractor, hyper: RlsviHyper, seed: u64) -> Result<Self, LearnerError> {
        hyper.validate()?;
        let dim = extractor.dimension();
        let solver = SparseBayesLs::new(dim, hyper.sigma, hyper.prior_variance)?;
        let posterior = Posterior::prior(dim, hyper.prior_variance);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sampled = sample_policy(&posterior, &mut rng);
        Ok(RlsviAgent {
            extractor,
            hyper,
            memory: Vec::new(),
            solver,
            posterior,
            sampled,
            rng,
            since_refit: 0,
            fits: 0,
            failed_fits: 0,
        })
    }

    pub fn hyper(&self) -> &RlsviHyper {
        &self.hyper
    }

    pub fn posterior(&self) -> &Posterior {
        &self.posterior
    }

    pub fn sampled_weights(&self) -> &WeightVector {
        &self.sampled
    }

    pub fn memory(&self) -> &[TransitionRecord] {
        &self.memory
    }

    /// Successful posterior refits so far.
    pub fn fits(&self) -> usize {
        self.fits
    }

    /// Refits that failed numerically and kept the previous posterior.
    pub fn failed_fits(&self) -> usize {
        self.failed_fits
    }

    fn refit(&mut self) -> Result<(), LearnerError> {
        let targets = self
            .memory
            .iter()
            .map(|t| t.target(&self.sampled.0, self.hyper.gamma))
            .collect::<Result<Vec<f64>, _>>()?;
        match self.solver.solve(&targets) {
            Ok(posterior) => {
                self.posterior = posterior;
                self.fits += 1;
            }
            Err(LearnerError::Numerical(_)) => self.failed_fits += 1,
            Err(e) => return Err(e),
        }
        self.sampled = sample_policy(&self.posterior, &mut self.rng);
        Ok(())
    }
}

impl Agent for RlsviAgent {
    fn name(&self) -> &'static str {
        "RLSVI"
    }

    fn extractor(&self) -> &FeatureExtractor {
        &self.extractor
    }

    fn act(&mut self, s: &GameState, mode: Mode) -> Result<ActionId, LearnerError> {
        let w = match mode {
            Mode::Explore => &self.sampled,
            Mode::Eval => &self.posterior.mean,
        };
        best_action(&w.0, s, &self.extractor).map(|(a, _)| a)
    }

    fn observe(&mut self, record: TransitionRecord) -> Result<(), LearnerError> {
        self.solver.push(&record.phi)?;
        self.memory.push(record);
        self.since_refit += 1;
        if self.since_refit >= self.hyper.refit_period {
            self.since_refit = 0;
            self.refit()?;
        }
        Ok(())
    }

    fn state_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        push_f64s(&mut out, &self.posterior.mean.0);
        push_f64s(&mut out, &self.posterior.variance);
        push_f64s(&mut out, &self.sampled.0);
        for counter in [self.memory.len(), self.since_refit, self.fits, self.failed_fits] {
            out.extend_from_slice(&(counter as u64).to_le_bytes());
        }
        out.extend_from_slice(&self.rng.get_word_pos().to_le_bytes());
        for record in &self.memory {
            out.extend_from_slice(&record.reward.to_bits().to_le_bytes());
            out.push(record.terminal as u8);
            for phi in std::iter::once(&record.phi).chain(&record.successor_phis) {
                out.extend_from_slice(&(phi.nnz() as u64).to_le_bytes());
                for (i, v) in phi.iter() {
                    out.extend_from_slice(&(i as u64).to_le_bytes());
                    out.extend_from_slice(&v.to_bits().to_le_bytes());
                }
            }
        }
        out
    }

    fn checkpoint(&self) -> Checkpoint {
        Checkpoint::new(
            &self.extractor,
            self.name(),
            self.sampled.clone(),
            Some(self.posterior.clone()),
            self.memory.len(),
        )
    }
}
