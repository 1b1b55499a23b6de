//! Per-task instance banks the trainer mixes over. A bank is generated
//! once — case pools drawn from the task generator, then many instance
//! draws of varying size — or rebuilt from a dataset file.

use crate::error::TrainError;
use rand::Rng;
use task_corpus::{
    find_task, gen_cases, sample_instance, split_seed, stream_rng, Instance, TaskDomain, TaskSpec,
};

/// Positive-pool ceiling when generating banks; small task spaces use the
/// whole space.
const POOL_POS: usize = 120;
const POOL_NEG: usize = 150;

/// One task's share of the training mixture.
#[derive(Clone, Debug)]
pub struct TaskBank {
    pub task: TaskSpec,
    pub instances: Vec<Instance>,
}

impl TaskBank {
    /// Generate `n_instances` fresh instances: one large labeled case pool,
    /// then per-instance subsets with sizes uniform in `[2, cap]`.
    pub fn generate(task: &TaskSpec, n_instances: usize, seed: u64) -> Result<TaskBank, TrainError> {
        let space_len = task_corpus::positive_space(task)?.len();
        let n_pos = POOL_POS.min(space_len);
        let (pos_pool, neg_pool) = gen_cases(task, n_pos, POOL_NEG, split_seed(seed, 0))?;
        let mut instances = Vec::with_capacity(n_instances);
        for i in 0..n_instances {
            let line_seed = split_seed(seed, 1 + i as u64);
            let mut rng = stream_rng(line_seed, 0);
            let want_pos = rng.gen_range(2..=task.cap_pos().min(pos_pool.len()));
            let want_neg = rng.gen_range(2..=task.cap_neg().min(neg_pool.len()));
            instances.push(sample_instance(
                task,
                &pos_pool,
                &neg_pool,
                want_pos,
                want_neg,
                split_seed(line_seed, 1),
            )?);
        }
        Ok(TaskBank {
            task: task.clone(),
            instances,
        })
    }

    /// Wrap instances read from a dataset file; they must all belong to one
    /// registered task.
    pub fn from_instances(instances: Vec<Instance>) -> Result<TaskBank, TrainError> {
        let first = instances
            .first()
            .ok_or_else(|| TrainError::InvalidConfig("empty instance list".into()))?;
        let task = find_task(&first.task_id)?;
        if let Some(other) = instances.iter().find(|i| i.task_id != task.id) {
            return Err(TrainError::InvalidConfig(format!(
                "bank mixes tasks {} and {}",
                task.id, other.task_id
            )));
        }
        Ok(TaskBank { task, instances })
    }
}

/// The shared domain of a mixture, or an error if banks disagree.
pub fn mixture_domain(banks: &[TaskBank]) -> Result<TaskDomain, TrainError> {
    let first = banks.first().ok_or(TrainError::EmptyMixture)?;
    let domain = first.task.domain;
    if let Some(odd) = banks.iter().find(|b| b.task.domain != domain) {
        return Err(TrainError::MixedDomains(format!(
            "{} is {} but {} is {}",
            first.task.id,
            domain.name(),
            odd.task.id,
            odd.task.domain.name()
        )));
    }
    Ok(domain)
}
