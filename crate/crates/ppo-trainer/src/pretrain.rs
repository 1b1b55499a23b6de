//! The pre-training loop: collect a batch of rollouts under the current
//! policy, normalize rewards into advantages, run the clipped update, and
//! record per-iteration statistics.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use logic_core::{MetaRuleId, MilLimits};
use policy_net::{
    forward, sample_selection, save_checkpoint, CheckpointMeta, PolicyConfig, PolicyParams,
};
use rand_chacha::ChaCha8Rng;
use task_corpus::{split_seed, stream_rng, EncodeConfig};

use crate::config::TrainConfig;
use crate::data::{mixture_domain, TaskBank};
use crate::error::TrainError;
use crate::reward::{compute_reward, run_mil, selected_ids};
use crate::trajectory::{collect_trajectory, compute_advantages, TrajectoryRecord};
use crate::update::{ppo_update, AdamState};

/// Aggregates from one training iteration.
#[derive(Clone, Debug)]
pub struct IterationStats {
    pub iteration: usize,
    pub mean_reward: f64,
    pub success_rate: f64,
    pub timeout_rate: f64,
    pub norule_rate: f64,
    /// Mean surrogate loss over the epochs of this iteration's update
    /// (zero when the update was skipped).
    pub mean_loss: f64,
    /// Mean pre-update selection probability per meta-rule, keyed by task.
    pub per_task_probs: BTreeMap<String, Vec<f64>>,
}

fn batch_stats(records: &[TrajectoryRecord]) -> (f64, f64, f64, f64) {
    let n = records.len() as f64;
    let mean_reward = records.iter().map(|r| r.reward).sum::<f64>() / n;
    let rate = |label: &str| {
        records.iter().filter(|r| r.outcome == label).count() as f64 / n
    };
    (mean_reward, rate("success"), rate("timeout"), rate("norule"))
}

fn per_task_probs(records: &[TrajectoryRecord], n_rules: usize) -> BTreeMap<String, Vec<f64>> {
    let mut sums: BTreeMap<String, (Vec<f64>, usize)> = BTreeMap::new();
    for rec in records {
        let entry = sums
            .entry(rec.task_id.clone())
            .or_insert_with(|| (vec![0.0; n_rules], 0));
        for (s, p) in entry.0.iter_mut().zip(&rec.old_probs) {
            *s += p;
        }
        entry.1 += 1;
    }
    sums.into_iter()
        .map(|(task, (sum, count))| {
            (task, sum.iter().map(|s| s / count as f64).collect())
        })
        .collect()
}

/// Pre-train a policy on a task mixture. Returns the final parameters and
/// one statistics row per iteration.
pub fn pretrain(
    cfg: &TrainConfig,
    banks: &[TaskBank],
) -> Result<(PolicyParams, Vec<IterationStats>), TrainError> {
    cfg.validate()?;
    let domain = mixture_domain(banks)?;
    let net_cfg = PolicyConfig::default();
    let mut params = PolicyParams::init(net_cfg, split_seed(cfg.seed, 0xA11CE));
    let mut adam = AdamState::new(params.data.len());
    let mut history = Vec::with_capacity(cfg.iterations);
    let trained_tasks: Vec<String> = banks.iter().map(|b| b.task.id.to_string()).collect();
    for it in 0..cfg.iterations {
        let mut rng = stream_rng(cfg.seed, (it + 1) as u64);
        let mut records = collect_trajectory(&params, banks, cfg, &mut rng)?;
        compute_advantages(&mut records);
        let stats = match ppo_update(&mut params, &records, cfg, &mut adam) {
            Ok(s) => s,
            // A non-finite loss rolls the parameters back; retry once on a
            // fresh batch before giving up.
            Err(TrainError::NonFiniteLoss) => {
                log::warn!("iteration {it}: non-finite loss, retrying with a fresh batch");
                let mut retry_rng = stream_rng(cfg.seed, u64::MAX - it as u64);
                records = collect_trajectory(&params, banks, cfg, &mut retry_rng)?;
                compute_advantages(&mut records);
                ppo_update(&mut params, &records, cfg, &mut adam)?
            }
            Err(e) => return Err(e),
        };
        let (mean_reward, success_rate, timeout_rate, norule_rate) = batch_stats(&records);
        let mean_loss = if stats.losses.is_empty() {
            0.0
        } else {
            stats.losses.iter().sum::<f64>() / stats.losses.len() as f64
        };
        log::info!(
            "iteration {it}: reward {mean_reward:.3} success {success_rate:.2} loss {mean_loss:.5}"
        );
        history.push(IterationStats {
            iteration: it,
            mean_reward,
            success_rate,
            timeout_rate,
            norule_rate,
            mean_loss,
            per_task_probs: per_task_probs(&records, net_cfg.n_rules),
        });
        if cfg.checkpoint_every > 0 && (it + 1) % cfg.checkpoint_every == 0 {
            if let Some(dir) = &cfg.checkpoint_dir {
                let meta = CheckpointMeta {
                    domain: domain.name().to_string(),
                    trained_tasks: trained_tasks.clone(),
                };
                save_checkpoint(&dir.join(format!("iter_{:04}.bin", it + 1)), &params, &meta)?;
            }
        }
    }
    Ok((params, history))
}

/// Write the history as long-format CSV: one row per (iteration, task,
/// meta-rule) carrying that iteration's batch aggregates.
pub fn write_history_csv(path: &Path, history: &[IterationStats]) -> Result<(), TrainError> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(
        w,
        "iteration,task,metarule,mean_prob,mean_reward,success_rate,timeout_rate,norule_rate"
    )?;
    for row in history {
        for (task, probs) in &row.per_task_probs {
            for (i, p) in probs.iter().enumerate() {
                writeln!(
                    w,
                    "{},{},{},{:.6},{:.6},{:.6},{:.6},{:.6}",
                    row.iteration,
                    task,
                    MetaRuleId::ALL[i].name(),
                    p,
                    row.mean_reward,
                    row.success_rate,
                    row.timeout_rate,
                    row.norule_rate,
                )?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

/// Mean reward and outcome rates of a policy over freshly sampled instances
/// from the mixture. `None` plays the uniform-0.5 random baseline.
#[derive(Clone, Copy, Debug, Default)]
pub struct MixtureEval {
    pub mean_reward: f64,
    pub success_rate: f64,
    pub timeout_rate: f64,
    pub norule_rate: f64,
    pub mean_selected: f64,
}

pub fn evaluate_mixture(
    policy: Option<&PolicyParams>,
    banks: &[TaskBank],
    trials: usize,
    mil: &MilLimits,
    seed: u64,
) -> Result<MixtureEval, TrainError> {
    let domain = mixture_domain(banks)?;
    let enc_cfg = EncodeConfig::for_domain(domain);
    let n_rules = MetaRuleId::ALL.len();
    let mut rng: ChaCha8Rng = stream_rng(seed, 0);
    let mut eval = MixtureEval::default();
    for _ in 0..trials {
        use rand::Rng;
        let bank = &banks[rng.gen_range(0..banks.len())];
        let inst = &bank.instances[rng.gen_range(0..bank.instances.len())];
        let probs = match policy {
            Some(p) => {
                let enc = task_corpus::encode_instance(inst, &enc_cfg)?;
                forward(&enc, p)?
            }
            None => vec![0.5; n_rules],
        };
        let action = sample_selection(&probs, &mut rng);
        let res = run_mil(inst, &bank.task, &action.selection, mil);
        eval.mean_reward +=
            compute_reward(&res.outcome, selected_ids(&action.selection).len(), n_rules);
        match res.outcome.label() {
            "success" => eval.success_rate += 1.0,
            "timeout" => eval.timeout_rate += 1.0,
            _ => eval.norule_rate += 1.0,
        }
        eval.mean_selected += action.selection.iter().filter(|&&s| s).count() as f64;
    }
    let n = trials as f64;
    eval.mean_reward /= n;
    eval.success_rate /= n;
    eval.timeout_rate /= n;
    eval.norule_rate /= n;
    eval.mean_selected /= n;
    Ok(eval)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn history_csv_has_one_line_per_task_rule_pair() {
        let mut per_task_probs = BTreeMap::new();
        per_task_probs.insert("right_priority".to_string(), vec![0.5; 6]);
        per_task_probs.insert("just_up".to_string(), vec![0.25; 6]);
        let history = vec![IterationStats {
            iteration: 0,
            mean_reward: 4.0,
            success_rate: 0.5,
            timeout_rate: 0.25,
            norule_rate: 0.25,
            mean_loss: -0.01,
            per_task_probs,
        }];
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("history.csv");
        write_history_csv(&path, &history).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 1 + 2 * 6);
        assert!(lines[0].starts_with("iteration,task,metarule,"));
        assert!(lines.iter().any(|l| l.starts_with("0,just_up,chain,")));
        assert!(lines.iter().any(|l| l.contains(",recursion,")));
    }

    #[test]
    fn per_task_probs_average_over_the_batch() {
        use crate::trajectory::TrajectoryRecord;
        use task_corpus::{encode_instance, EncodeConfig, Instance};
        let enc = encode_instance(
            &Instance {
                task_id: "up_one_step".to_string(),
                positives: Vec::new(),
                negatives: Vec::new(),
                corruption_rate: 0.0,
            },
            &EncodeConfig::mario(),
        )
        .unwrap();
        let rec = |p: f64| TrajectoryRecord {
            task_id: "t".to_string(),
            encoding: enc.clone(),
            old_probs: vec![p; 6],
            selection: vec![false; 6],
            old_log_prob: 0.0,
            outcome: "norule",
            reward: 0.0,
            advantage: 0.0,
        };
        let records = vec![rec(0.2), rec(0.6)];
        let probs = per_task_probs(&records, 6);
        assert_eq!(probs.len(), 1);
        for p in &probs["t"] {
            assert!((p - 0.4).abs() < 1e-12);
        }
    }
}
