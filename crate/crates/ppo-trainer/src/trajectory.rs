//! Batch collection: draw instances from the mixture, run the policy,
//! induce with the sampled selection, and score with the reward.

use crate::config::TrainConfig;
use crate::data::{mixture_domain, TaskBank};
use crate::error::TrainError;
use crate::reward::{compute_reward, run_mil, selected_ids};
use policy_net::{forward, sample_selection, PolicyParams};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use task_corpus::{encode_instance, EncodeConfig, InstanceEncoding};

/// One decision the batch preserves for the clipped-surrogate update.
#[derive(Clone, Debug)]
pub struct TrajectoryRecord {
    pub task_id: String,
    pub encoding: InstanceEncoding,
    pub old_probs: Vec<f64>,
    pub selection: Vec<bool>,
    pub old_log_prob: f64,
    /// "success", "timeout", or "norule".
    pub outcome: &'static str,
    pub reward: f64,
    pub advantage: f64,
}

/// Sample `batch_size` decisions: task uniform over the mixture, instance
/// uniform within the task's bank.
pub fn collect_trajectory(
    params: &PolicyParams,
    banks: &[TaskBank],
    cfg: &TrainConfig,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<TrajectoryRecord>, TrainError> {
    let domain = mixture_domain(banks)?;
    let enc_cfg = EncodeConfig::for_domain(domain);
    let mut records = Vec::with_capacity(cfg.batch_size);
    for _ in 0..cfg.batch_size {
        let bank = &banks[rng.gen_range(0..banks.len())];
        let inst = &bank.instances[rng.gen_range(0..bank.instances.len())];
        let encoding = encode_instance(inst, &enc_cfg)?;
        let probs = forward(&encoding, params)?;
        let action = sample_selection(&probs, rng);
        let res = run_mil(inst, &bank.task, &action.selection, &cfg.mil);
        let n_selected = selected_ids(&action.selection).len();
        let reward = compute_reward(&res.outcome, n_selected, probs.len());
        debug_assert!(reward <= 32.0, "success requires at least one rule");
        records.push(TrajectoryRecord {
            task_id: bank.task.id.to_string(),
            encoding,
            old_probs: action.probs,
            selection: action.selection,
            old_log_prob: action.log_prob,
            outcome: res.outcome.label(),
            reward,
            advantage: 0.0,
        });
    }
    Ok(records)
}

/// Batch-normalized advantages: centered rewards over their population
/// standard deviation; single-step episodes, no discounting.
pub fn compute_advantages(records: &mut [TrajectoryRecord]) {
    assert!(!records.is_empty());
    let n = records.len() as f64;
    let mean = records.iter().map(|r| r.reward).sum::<f64>() / n;
    let var = records
        .iter()
        .map(|r| (r.reward - mean).powi(2))
        .sum::<f64>()
        / n;
    let std = var.sqrt();
    for r in records {
        r.advantage = (r.reward - mean) / (std + 1e-8);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dummy(reward: f64) -> TrajectoryRecord {
        TrajectoryRecord {
            task_id: "t".into(),
            encoding: encode_instance(
                &task_corpus::Instance {
                    task_id: "up_one_step".into(),
                    positives: vec![],
                    negatives: vec![],
                    corruption_rate: 0.0,
                },
                &EncodeConfig::mario(),
            )
            .unwrap(),
            old_probs: vec![0.5; 6],
            selection: vec![false; 6],
            old_log_prob: 0.0,
            outcome: "norule",
            reward,
            advantage: 0.0,
        }
    }

    #[test]
    fn equal_rewards_have_zero_advantage() {
        let mut recs: Vec<_> = (0..4).map(|_| dummy(16.0)).collect();
        compute_advantages(&mut recs);
        assert!(recs.iter().all(|r| r.advantage == 0.0));
    }

    #[test]
    fn binary_rewards_normalize_to_unit_advantages() {
        let mut recs = vec![dummy(0.0), dummy(16.0)];
        compute_advantages(&mut recs);
        assert!((recs[0].advantage + 1.0).abs() < 1e-7);
        assert!((recs[1].advantage - 1.0).abs() < 1e-7);
        let mean: f64 = recs.iter().map(|r| r.advantage).sum::<f64>() / 2.0;
        assert!(mean.abs() < 1e-9);
    }
}
