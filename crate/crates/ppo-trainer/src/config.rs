//! Training hyperparameters.

use crate::error::TrainError;
use logic_core::MilLimits;
use std::path::PathBuf;

/// Step budget for induction during desk-scale training; generous enough
/// for informed subsets on full-size instances, small enough that bloated
/// selections time out and feed the reward signal.
pub const TRAIN_MIL_STEPS: u64 = 300_000;

#[derive(Clone, Debug)]
pub struct TrainConfig {
    pub iterations: usize,
    /// Instances sampled per iteration; the whole batch is one PPO batch.
    pub batch_size: usize,
    pub clip_eps: f64,
    pub lr: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub ppo_epochs: usize,
    pub seed: u64,
    pub mil: MilLimits,
    /// Save a checkpoint every this many iterations; 0 disables.
    pub checkpoint_every: usize,
    pub checkpoint_dir: Option<PathBuf>,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            iterations: 100,
            batch_size: 32,
            clip_eps: 0.2,
            lr: 1e-3,
            beta1: 0.9,
            beta2: 0.999,
            ppo_epochs: 4,
            seed: 0,
            mil: MilLimits {
                max_steps: TRAIN_MIL_STEPS,
                timeout: None,
                ..MilLimits::default()
            },
            checkpoint_every: 0,
            checkpoint_dir: None,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<(), TrainError> {
        let bad = |m: String| Err(TrainError::InvalidConfig(m));
        if self.iterations == 0 || self.batch_size == 0 || self.ppo_epochs == 0 {
            return bad("iterations, batch_size, and ppo_epochs must be positive".into());
        }
        if !(self.clip_eps > 0.0) {
            return bad(format!("clip_eps {} must be positive", self.clip_eps));
        }
        if !(self.lr > 0.0) {
            return bad(format!("lr {} must be positive", self.lr));
        }
        if !(0.0..1.0).contains(&self.beta1) || !(0.0..1.0).contains(&self.beta2) {
            return bad(format!(
                "moment coefficients ({}, {}) must lie in [0, 1)",
                self.beta1, self.beta2
            ));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate_and_bad_values_do_not() {
        TrainConfig::default().validate().unwrap();
        let cfg = TrainConfig {
            clip_eps: 0.0,
            ..TrainConfig::default()
        };
        assert!(cfg.validate().is_err());
        let cfg = TrainConfig {
            lr: -1.0,
            ..TrainConfig::default()
        };
        assert!(cfg.validate().is_err());
    }
}
