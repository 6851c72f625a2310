use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{LearnerError, Posterior, WeightVector};
use crate::features::FeatureExtractor;

pub const CHECKPOINT_FORMAT: &str = "slingshot-checkpoint";
pub const CHECKPOINT_VERSION: u32 = 1;

/// Saved learner state: weights, optional posterior, and the extractor they belong to.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub format: String,
    pub version: u32,
    pub algorithm: String,
    pub extractor: String,
    pub config_hash: String,
    pub dim: usize,
    pub weights: WeightVector,
    pub posterior: Option<Posterior>,
    pub memory_len: usize,
}

impl Checkpoint {
    pub fn new(
        extractor: &FeatureExtractor,
        algorithm: &str,
        weights: WeightVector,
        posterior: Option<Posterior>,
        memory_len: usize,
    ) -> Self {
        Checkpoint {
            format: CHECKPOINT_FORMAT.to_string(),
            version: CHECKPOINT_VERSION,
            algorithm: algorithm.to_string(),
            extractor: extractor.kind().name().to_string(),
            config_hash: extractor.config_hash(),
            dim: extractor.dimension(),
            weights,
            posterior,
            memory_len,
        }
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string(self).expect("checkpoint serializes");
        text.push('\n');
        text
    }

    pub fn from_json(text: &str) -> Result<Self, LearnerError> {
        let cp: Checkpoint = serde_json::from_str(text).map_err(|e| LearnerError::Checkpoint(e.to_string()))?;
        if cp.format != CHECKPOINT_FORMAT {
            return Err(LearnerError::Checkpoint(format!("unknown format {:?}", cp.format)));
        }
        if cp.version != CHECKPOINT_VERSION {
            return Err(LearnerError::Checkpoint(format!("unsupported version {}", cp.version)));
        }
        if cp.weights.len() != cp.dim || cp.posterior.as_ref().is_some_and(|p| p.dim() != cp.dim) {
            return Err(LearnerError::Checkpoint("vector lengths disagree with dim".into()));
        }
        Ok(cp)
    }

    pub fn save(&self, path: &Path) -> Result<(), LearnerError> {
        std::fs::write(path, self.to_json()).map_err(|e| LearnerError::Checkpoint(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, LearnerError> {
        let text = std::fs::read_to_string(path).map_err(|e| LearnerError::Checkpoint(e.to_string()))?;
        Checkpoint::from_json(&text)
    }

    /// Checks that the checkpoint was produced with an identically configured extractor.
    pub fn check_extractor(&self, extractor: &FeatureExtractor) -> Result<(), LearnerError> {
        if self.config_hash != extractor.config_hash() {
            return Err(LearnerError::Checkpoint(format!(
                "checkpoint was written for extractor {} with a different configuration",
                self.extractor
            )));
        }
        Ok(())
    }
}
