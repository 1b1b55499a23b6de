//! Symbolic task corpus for the grid-walk and digit-list families: a task
//! registry with reference rules, deterministic positive/negative case
//! generation (half near-miss, half random negatives), instance sampling
//! with per-domain caps, symbol-level corruption, padded token encoding for
//! the selection policy, and JSON Lines dataset IO.
//!
//! Entry points: [`registry::registry`] lists the tasks, [`gen::gen_cases`]
//! draws labeled cases, [`instance::sample_instance`] bags them,
//! [`instance::corrupt_instance`] injects grounding noise, and
//! [`encode::encode_instance`] produces the fixed-shape token arrays.

pub mod case;
pub mod encode;
pub mod error;
pub mod gen;
pub mod instance;
pub mod io;
pub mod mario;
pub mod mnist;
pub mod registry;
pub mod seed;

pub use case::{edit_distance, CaseData, DigitCase, DigitLayout};
pub use encode::{decode_instance, encode_instance, EncodeConfig, InstanceEncoding, PAD};
pub use error::CorpusError;
pub use gen::{digit_layout, gen_cases, gen_cases_in_space, gen_cases_tagged, positive_space, NegCase};
pub use instance::{corrupt_instance, sample_instance, Instance};
pub use io::{read_instances, read_manifest, write_instances, write_manifest, Manifest, TaskCounts};
pub use registry::{
    find_task, priority_secondary, registry, train_task_ids, TaskDomain, TaskSpec,
    REGISTRY_VERSION,
};
pub use seed::{split_seed, stream_rng};
