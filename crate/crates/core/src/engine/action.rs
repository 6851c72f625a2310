use serde::{Deserialize, Serialize};

use super::EngineError;

/// Index into the discrete action grid, `angle_index * n_extensions + extension_index`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ActionId(pub usize);

impl std::fmt::Display for ActionId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Discretisation of the forward-only (angle, extension) launch space.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionConfig {
    pub n_angles: usize,
    pub n_extensions: usize,
    /// Degrees.
    pub angle_min: f64,
    /// Degrees.
    pub angle_max: f64,
    pub v_max: f64,
}

impl Default for ActionConfig {
    fn default() -> Self {
        ActionConfig {
            n_angles: 8,
            n_extensions: 4,
            angle_min: 10.0,
            angle_max: 80.0,
            v_max: 110.0,
        }
    }
}

impl ActionConfig {
    pub fn validate(&self) -> Result<(), EngineError> {
        let bad = |reason: &str| Err(EngineError::InvalidActionConfig(reason.to_string()));
        if self.n_angles == 0 || self.n_extensions == 0 {
            return bad("action grid must have at least one angle and one extension");
        }
        if !(self.angle_min > 0.0 && self.angle_min < self.angle_max && self.angle_max < 90.0) {
            return bad("angles must satisfy 0 < angle_min < angle_max < 90");
        }
        if !(self.v_max > 0.0 && self.v_max.is_finite()) {
            return bad("v_max must be positive and finite");
        }
        Ok(())
    }

    pub fn count(&self) -> usize {
        self.n_angles * self.n_extensions
    }

    pub fn actions(&self) -> impl Iterator<Item = ActionId> + Clone {
        (0..self.count()).map(ActionId)
    }

    /// Maps an action index onto its launch parameters.
    pub fn decode(&self, a: ActionId) -> Result<LaunchParams, EngineError> {
        if a.0 >= self.count() {
            return Err(EngineError::ActionOutOfRange {
                action: a.0,
                count: self.count(),
            });
        }
        let i = a.0 / self.n_extensions;
        let j = a.0 % self.n_extensions;
        let angle_deg = if self.n_angles == 1 {
            self.angle_min
        } else {
            self.angle_min + i as f64 * (self.angle_max - self.angle_min) / (self.n_angles - 1) as f64
        };
        let speed = self.v_max * (j + 1) as f64 / self.n_extensions as f64;
        Ok(LaunchParams {
            angle: angle_deg.to_radians(),
            speed,
        })
    }
}

/// Launch angle (radians) and speed of one shot.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LaunchParams {
    pub angle: f64,
    pub speed: f64,
}

impl LaunchParams {
    /// Builds launch parameters from a continuous (degrees, extension fraction) pair.
    pub fn from_degrees(angle_deg: f64, extension: f64, v_max: f64) -> Result<Self, EngineError> {
        if !(angle_deg > 0.0 && angle_deg < 90.0) {
            return Err(EngineError::InvalidLaunch(format!(
                "angle {angle_deg} must lie strictly between 0 and 90 degrees"
            )));
        }
        if !(extension > 0.0 && extension <= 1.0) {
            return Err(EngineError::InvalidLaunch(format!(
                "extension {extension} must lie in (0, 1]"
            )));
        }
        Ok(LaunchParams {
            angle: angle_deg.to_radians(),
            speed: extension * v_max,
        })
    }

    pub fn is_forward(&self) -> bool {
        self.angle.cos() > 0.0 && self.angle.sin() > 0.0 && self.speed > 0.0
    }

    pub fn angle_degrees(&self) -> f64 {
        self.angle.to_degrees()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_action_is_lowest_weakest() {
        let cfg = ActionConfig::default();
        let l = cfg.decode(ActionId(0)).unwrap();
        assert!((l.angle_degrees() - 10.0).abs() < 1e-12);
        assert!((l.speed - 27.5).abs() < 1e-12);
    }

    #[test]
    fn last_action_hits_both_maxima() {
        let cfg = ActionConfig::default();
        let l = cfg.decode(ActionId(31)).unwrap();
        assert!((l.angle_degrees() - 80.0).abs() < 1e-12);
        assert_eq!(l.speed, 110.0);
    }

    #[test]
    fn out_of_range_rejected() {
        let cfg = ActionConfig::default();
        assert!(matches!(
            cfg.decode(ActionId(32)),
            Err(EngineError::ActionOutOfRange { action: 32, count: 32 })
        ));
    }

    #[test]
    fn decode_is_injective_and_forward() {
        let cfg = ActionConfig::default();
        let mut seen = Vec::new();
        for a in cfg.actions() {
            let l = cfg.decode(a).unwrap();
            assert!(l.is_forward());
            assert!(l.speed <= cfg.v_max);
            let key = (l.angle.to_bits(), l.speed.to_bits());
            assert!(!seen.contains(&key));
            seen.push(key);
        }
        assert_eq!(seen.len(), 32);
    }

    #[test]
    fn grids_are_evenly_spaced() {
        let cfg = ActionConfig::default();
        // a = i * 4 + j
        let a13 = cfg.decode(ActionId(13)).unwrap();
        assert!((a13.angle_degrees() - 40.0).abs() < 1e-12);
        assert!((a13.speed - 55.0).abs() < 1e-12);
    }

    #[test]
    fn continuous_launch_validation() {
        assert!(LaunchParams::from_degrees(95.0, 0.5, 110.0).is_err());
        assert!(LaunchParams::from_degrees(0.0, 0.5, 110.0).is_err());
        assert!(LaunchParams::from_degrees(45.0, 0.0, 110.0).is_err());
        let l = LaunchParams::from_degrees(45.0, 1.0, 110.0).unwrap();
        assert_eq!(l.speed, 110.0);
    }

    #[test]
    fn invalid_configs() {
        let mut cfg = ActionConfig::default();
        cfg.angle_max = 95.0;
        assert!(cfg.validate().is_err());
        cfg = ActionConfig::default();
        cfg.n_extensions = 0;
        assert!(cfg.validate().is_err());
        assert!(ActionConfig::default().validate().is_ok());
    }
}
