//! Attention-based meta-rule selection policy with exact analytic
//! gradients. An encoded bag of positive and negative cases passes through
//! per-case mean pooling, self-attention over each bag, self-attention over
//! their union, and cross-attention from learnable meta-rule queries; each
//! meta-rule vector maps to a clamped Bernoulli selection probability.
//!
//! Everything is plain `f64` on flat vectors: [`policy::forward`] produces
//! the probabilities, [`policy::backward`] their exact parameter gradient,
//! [`sample::sample_selection`] the subset draw, and [`checkpoint`] the
//! self-describing weight files.

pub mod attention;
pub mod checkpoint;
pub mod error;
mod num;
pub mod params;
pub mod policy;
pub mod sample;

pub use attention::{attention_block, AttnWeights};
pub use checkpoint::{load_checkpoint, save_checkpoint, CheckpointMeta};
pub use error::PolicyError;
pub use params::{Layout, PolicyConfig, PolicyParams};
pub use policy::{backward, forward};
pub use sample::{grad_log_prob_of, log_prob_of, sample_selection, PolicyOutput};
