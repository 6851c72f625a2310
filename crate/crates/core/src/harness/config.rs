use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::HarnessError;
use crate::engine::{load_level_pack, ActionConfig, Engine, LevelPack};
use crate::features::{ExtractorKind, FeatureExtractor};
use crate::learners::{Agent, QLearner, QLearnerConfig, RlsviAgent, RlsviHyper};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Algorithm {
    #[serde(rename = "qlearning")]
    QLearning(QLearnerConfig),
    Rlsvi(RlsviHyper),
}

impl Algorithm {
    pub fn qlearning() -> Self {
        Algorithm::QLearning(QLearnerConfig::default())
    }

    pub fn rlsvi() -> Self {
        Algorithm::Rlsvi(RlsviHyper::default())
    }

    /// Default hyperparameters for `qlearning`/`q` or `rlsvi`.
    pub fn from_name(name: &str) -> Option<Self> {
        match name.to_ascii_lowercase().as_str() {
            "q" | "qlearning" | "q-learning" => Some(Self::qlearning()),
            "rlsvi" => Some(Self::rlsvi()),
            _ => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Algorithm::QLearning(_) => "Q-Learning",
            Algorithm::Rlsvi(_) => "RLSVI",
        }
    }
}

/// Everything that determines one experiment run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Level-pack file; the bundled pack when absent.
    #[serde(default)]
    pub levels: Option<PathBuf>,
    pub extractor: ExtractorKind,
    pub algorithm: Algorithm,
    #[serde(default)]
    pub actions: ActionConfig,
    /// Attempts in total, alternating explore and eval, starting with explore.
    pub total_attempts: usize,
    pub seed: u64,
    #[serde(default = "default_window")]
    pub ma_window: usize,
}

fn default_window() -> usize {
    10
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            levels: None,
            extractor: ExtractorKind::npp(),
            algorithm: Algorithm::qlearning(),
            actions: ActionConfig::default(),
            total_attempts: 300,
            seed: 0,
            ma_window: 10,
        }
    }
}

impl ExperimentConfig {
    pub fn new(extractor: ExtractorKind, algorithm: Algorithm, total_attempts: usize, seed: u64) -> Self {
        ExperimentConfig {
            extractor,
            algorithm,
            total_attempts,
            seed,
            ..ExperimentConfig::default()
        }
    }

    pub fn from_json(text: &str) -> Result<Self, HarnessError> {
        let cfg: ExperimentConfig = serde_json::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::Io(path.display().to_string(), e))?;
        ExperimentConfig::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if !self.total_attempts.is_multiple_of(2) {
            return Err(HarnessError::Config(
                "total_attempts must be even (explore/eval pairs)".into(),
            ));
        }
        if self.ma_window == 0 {
            return Err(HarnessError::Config("ma_window must be at least 1".into()));
        }
        self.extractor.validate()?;
        self.actions.validate()?;
        match &self.algorithm {
            Algorithm::QLearning(c) => c.validate()?,
            Algorithm::Rlsvi(h) => h.validate()?,
        }
        Ok(())
    }

    pub fn load_pack(&self) -> Result<LevelPack, HarnessError> {
        match &self.levels {
            None => Ok(LevelPack::bundled()),
            Some(path) => {
                let text =
                    std::fs::read_to_string(path).map_err(|e| HarnessError::Io(path.display().to_string(), e))?;
                Ok(load_level_pack(&text)?)
            }
        }
    }

    pub fn build_engine(&self) -> Result<Engine, HarnessError> {
        Ok(Engine::new(self.load_pack()?, self.actions.clone())?)
    }

    pub fn build_agent(&self) -> Result<Box<dyn Agent + Send>, HarnessError> {
        let extractor = FeatureExtractor::new(self.extractor.clone(), self.actions.count())?;
        Ok(match &self.algorithm {
            Algorithm::QLearning(c) => Box::new(QLearner::new(extractor, c.clone(), self.seed)?),
            Algorithm::Rlsvi(h) => Box::new(RlsviAgent::new(extractor, h.clone(), self.seed)?),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip_and_defaults() {
        let cfg = ExperimentConfig::new(ExtractorKind::npps(), Algorithm::rlsvi(), 20, 7);
        let back = ExperimentConfig::from_json(&cfg.to_json()).unwrap();
        assert_eq!(back, cfg);

        let minimal = r#"{
            "extractor": {"kind": "npp", "cell_sizes": [200, 100, 50], "world_width": 1200, "world_height": 600},
            "algorithm": {"kind": "qlearning", "epsilon": 0.2, "eta": 0.01, "gamma": 0.9},
            "total_attempts": 4,
            "seed": 3
        }"#;
        let cfg = ExperimentConfig::from_json(minimal).unwrap();
        assert_eq!(cfg.ma_window, 10);
        assert_eq!(cfg.actions, ActionConfig::default());
        assert!(cfg.levels.is_none());
    }

    #[test]
    fn odd_attempts_and_zero_window_rejected() {
        let mut cfg = ExperimentConfig::default();
        cfg.total_attempts = 3;
        assert!(cfg.validate().is_err());
        cfg.total_attempts = 4;
        cfg.ma_window = 0;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn names() {
        assert_eq!(Algorithm::from_name("RLSVI").unwrap().label(), "RLSVI");
        assert_eq!(Algorithm::from_name("q").unwrap().label(), "Q-Learning");
        assert!(Algorithm::from_name("sarsa").is_none());
    }
}
