//! Error type for the pre-training loop.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum TrainError {
    #[error("the task mixture is empty")]
    EmptyMixture,
    #[error("task mixture spans more than one domain: {0}")]
    MixedDomains(String),
    #[error("invalid training config: {0}")]
    InvalidConfig(String),
    #[error("non-finite loss; parameters rolled back")]
    NonFiniteLoss,
    #[error(transparent)]
    Corpus(#[from] task_corpus::CorpusError),
    #[error(transparent)]
    Policy(#[from] policy_net::PolicyError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
