//! PPO pre-training for the meta-rule selection policy.
//!
//! Each episode is a single decision: the policy reads an encoded instance,
//! samples an independent-Bernoulli subset of the six meta-rules, and the
//! MIL engine attempts induction restricted to that subset under a step
//! budget. The reward is `2^(6 − |subset|)` on success and 0 otherwise, so
//! the optimum is the smallest sufficient subset for the task at hand.
//! Rewards are normalized into batch advantages and the policy is updated
//! with the clipped surrogate objective over a few full-batch epochs.
//!
//! Entry points: [`TaskBank::generate`] builds per-task instance banks,
//! [`pretrain`] runs the loop and returns per-iteration history, and
//! [`evaluate_mixture`] scores a trained policy (or the uniform random
//! baseline) on fresh draws from the same mixture.

mod config;
mod data;
mod error;
mod pretrain;
mod reward;
mod trajectory;
mod update;

pub use config::{TrainConfig, TRAIN_MIL_STEPS};
pub use data::{mixture_domain, TaskBank};
pub use error::TrainError;
pub use pretrain::{evaluate_mixture, pretrain, write_history_csv, IterationStats, MixtureEval};
pub use reward::{compute_reward, run_mil, selected_ids};
pub use trajectory::{collect_trajectory, compute_advantages, TrajectoryRecord};
pub use update::{ppo_update, AdamState, UpdateStats};
