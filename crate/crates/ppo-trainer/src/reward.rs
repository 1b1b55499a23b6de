//! The selection reward: exponential in how few meta-rules were chosen,
//! zero whenever induction fails, times out, or nothing was selected.

use logic_core::{mil_induce, MetaRuleId, MilLimits, MilOutcome, MilResult};
use std::time::Duration;
use task_corpus::{Instance, TaskSpec};

/// Meta-rule ids picked out of the pool by a boolean mask.
pub fn selected_ids(selection: &[bool]) -> Vec<MetaRuleId> {
    MetaRuleId::ALL
        .iter()
        .zip(selection)
        .filter(|(_, &s)| s)
        .map(|(&m, _)| m)
        .collect()
}

/// `2^(pool − selected)` on success, otherwise 0.
pub fn compute_reward(outcome: &MilOutcome, n_selected: usize, pool_size: usize) -> f64 {
    assert!(n_selected <= pool_size);
    match outcome {
        MilOutcome::Success(_) => (2.0f64).powi((pool_size - n_selected) as i32),
        MilOutcome::Timeout | MilOutcome::NoRule => 0.0,
    }
}

/// Run induction on an instance with the given selection mask. An empty
/// selection cannot induce anything and short-circuits to NoRule without
/// invoking the engine.
pub fn run_mil(
    inst: &Instance,
    task: &TaskSpec,
    selection: &[bool],
    limits: &MilLimits,
) -> MilResult {
    let subset = selected_ids(selection);
    if subset.is_empty() {
        return MilResult {
            outcome: MilOutcome::NoRule,
            steps: 0,
            elapsed: Duration::ZERO,
        };
    }
    mil_induce(
        &inst.positives,
        &inst.negatives,
        &subset,
        &task.domain.background(),
        limits,
    )
}
