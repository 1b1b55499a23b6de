//! The clipped-surrogate update: per-record probability ratios against the
//! stored selections, clipped advantage objective, exact gradients through
//! the policy, and a first/second-moment adaptive step.

use crate::config::TrainConfig;
use crate::error::TrainError;
use crate::trajectory::TrajectoryRecord;
use policy_net::{backward, forward, grad_log_prob_of, log_prob_of, PolicyParams};

/// Adaptive-moment optimizer state over the flat parameter vector.
#[derive(Clone, Debug)]
pub struct AdamState {
    m: Vec<f64>,
    v: Vec<f64>,
    t: u64,
}

impl AdamState {
    pub fn new(n_params: usize) -> Self {
        AdamState {
            m: vec![0.0; n_params],
            v: vec![0.0; n_params],
            t: 0,
        }
    }

    pub fn step(&mut self, data: &mut [f64], grads: &[f64], lr: f64, beta1: f64, beta2: f64) {
        assert_eq!(data.len(), grads.len());
        assert_eq!(data.len(), self.m.len());
        self.t += 1;
        let bc1 = 1.0 - beta1.powi(self.t as i32);
        let bc2 = 1.0 - beta2.powi(self.t as i32);
        for i in 0..data.len() {
            self.m[i] = beta1 * self.m[i] + (1.0 - beta1) * grads[i];
            self.v[i] = beta2 * self.v[i] + (1.0 - beta2) * grads[i] * grads[i];
            let mhat = self.m[i] / bc1;
            let vhat = self.v[i] / bc2;
            data[i] -= lr * mhat / (vhat.sqrt() + 1e-8);
        }
    }
}

/// Per-epoch loss values from one update call.
#[derive(Clone, Debug, Default)]
pub struct UpdateStats {
    pub losses: Vec<f64>,
    /// True when every advantage was zero and no step was taken.
    pub skipped: bool,
}

/// The surrogate term and its derivative with respect to the ratio. The
/// gradient vanishes exactly when the clipped bound is the active minimum.
pub(crate) fn surrogate(ratio: f64, advantage: f64, eps: f64) -> (f64, f64) {
    let clipped = ratio.clamp(1.0 - eps, 1.0 + eps);
    let value = (ratio * advantage).min(clipped * advantage);
    let active = if advantage >= 0.0 {
        ratio <= 1.0 + eps
    } else {
        ratio >= 1.0 - eps
    };
    (value, if active { advantage } else { 0.0 })
}

/// Run `ppo_epochs` full-batch passes. On a non-finite loss or gradient the
/// parameters and optimizer roll back to their state at entry.
pub fn ppo_update(
    params: &mut PolicyParams,
    records: &[TrajectoryRecord],
    cfg: &TrainConfig,
    adam: &mut AdamState,
) -> Result<UpdateStats, TrainError> {
    if records.is_empty() {
        return Err(TrainError::InvalidConfig("empty record batch".into()));
    }
    if records.iter().all(|r| r.advantage == 0.0) {
        return Ok(UpdateStats {
            losses: Vec::new(),
            skipped: true,
        });
    }
    let params_snapshot = params.data.clone();
    let adam_snapshot = adam.clone();
    let n = records.len() as f64;
    let mut stats = UpdateStats::default();
    for _ in 0..cfg.ppo_epochs {
        let mut grads = params.zero_grad();
        let mut loss = 0.0;
        for rec in records {
            let probs = forward(&rec.encoding, params)?;
            let new_lp = log_prob_of(&probs, &rec.selection);
            let ratio = (new_lp - rec.old_log_prob).exp();
            let (value, dvalue_dratio) = surrogate(ratio, rec.advantage, cfg.clip_eps);
            loss -= value / n;
            if dvalue_dratio == 0.0 {
                continue;
            }
            // dLoss/d new_lp = −(1/n) · ds/dr · r, then through the
            // Bernoulli log-likelihood to the probabilities.
            let coef = -dvalue_dratio * ratio / n;
            let upstream: Vec<f64> = grad_log_prob_of(&probs, &rec.selection)
                .iter()
                .map(|g| coef * g)
                .collect();
            let g = backward(&rec.encoding, params, &upstream)?;
            for (acc, gi) in grads.iter_mut().zip(&g) {
                *acc += gi;
            }
        }
        if !loss.is_finite() || grads.iter().any(|g| !g.is_finite()) {
            params.data = params_snapshot;
            *adam = adam_snapshot;
            return Err(TrainError::NonFiniteLoss);
        }
        adam.step(&mut params.data, &grads, cfg.lr, cfg.beta1, cfg.beta2);
        stats.losses.push(loss);
    }
    Ok(stats)
}
