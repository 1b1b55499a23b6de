//! Bernoulli subset selection over the per-meta-rule probabilities, plus
//! the log-likelihood helpers the surrogate objective differentiates.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// One sampled action: the probabilities it was drawn from, the chosen
/// subset, and its log-likelihood under those probabilities.
#[derive(Clone, Debug, PartialEq)]
pub struct PolicyOutput {
    pub probs: Vec<f64>,
    pub selection: Vec<bool>,
    pub log_prob: f64,
}

/// Joint Bernoulli log-likelihood of `selection` under `probs`; finite
/// whenever the probabilities are clamped away from 0 and 1.
pub fn log_prob_of(probs: &[f64], selection: &[bool]) -> f64 {
    assert_eq!(probs.len(), selection.len());
    probs
        .iter()
        .zip(selection)
        .map(|(p, &s)| if s { p.ln() } else { (1.0 - p).ln() })
        .sum()
}

/// d log_prob / d probs for a fixed selection.
pub fn grad_log_prob_of(probs: &[f64], selection: &[bool]) -> Vec<f64> {
    assert_eq!(probs.len(), selection.len());
    probs
        .iter()
        .zip(selection)
        .map(|(p, &s)| if s { 1.0 / p } else { -1.0 / (1.0 - p) })
        .collect()
}

/// Draw an independent Bernoulli per meta-rule.
pub fn sample_selection(probs: &[f64], rng: &mut ChaCha8Rng) -> PolicyOutput {
    let selection: Vec<bool> = probs.iter().map(|&p| rng.gen_bool(p)).collect();
    let log_prob = log_prob_of(probs, &selection);
    PolicyOutput {
        probs: probs.to_vec(),
        selection,
        log_prob,
    }
}
