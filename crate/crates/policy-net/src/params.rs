//! Parameter storage for the selection policy. All weights live in one
//! flat `f64` vector laid out by [`Layout`]; gradients use the same layout,
//! which keeps the optimizer, finite-difference checks, and checkpointing
//! uniform over every parameter group.

use rand::distributions::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::ops::Range;

/// Attention stages in layout order.
pub const POS_ATTN: usize = 0;
pub const NEG_ATTN: usize = 1;
pub const JOINT_ATTN: usize = 2;
pub const CROSS_ATTN: usize = 3;
pub const ATTN_STAGES: usize = 4;

/// Hyperparameters fixed at construction time.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PolicyConfig {
    pub d_model: usize,
    pub heads: usize,
    pub vocab: usize,
    pub n_rules: usize,
    /// Width of the learnable meta-rule table before projection to d_model.
    pub mr_dim: usize,
    /// Probability clamp: outputs live in [p_min, 1 − p_min].
    pub p_min: f64,
}

impl Default for PolicyConfig {
    fn default() -> Self {
        PolicyConfig {
            d_model: 64,
            heads: 8,
            vocab: 18,
            n_rules: 6,
            mr_dim: 16,
            p_min: 0.02,
        }
    }
}

impl PolicyConfig {
    pub fn validate(&self) {
        assert!(self.heads > 0 && self.d_model % self.heads == 0);
        assert!(self.vocab > 0 && self.n_rules > 0 && self.mr_dim > 0);
        assert!(self.p_min > 0.0 && self.p_min < 0.5);
    }
}

fn span(at: &mut usize, n: usize) -> Range<usize> {
    let r = *at..*at + n;
    *at += n;
    r
}

/// Offsets of every parameter group inside the flat vector, in declaration
/// order: token embeddings, four attention stages (query/key/value/output
/// projections each), the meta-rule table and its projection, the output
/// head weights and bias.
#[derive(Clone, Debug)]
pub struct Layout {
    pub embed: Range<usize>,
    pub attn: Vec<[Range<usize>; 4]>,
    pub mr_table: Range<usize>,
    pub mr_proj: Range<usize>,
    pub head_w: Range<usize>,
    pub head_b: Range<usize>,
    pub total: usize,
}

impl Layout {
    pub fn new(cfg: &PolicyConfig) -> Self {
        cfg.validate();
        let d = cfg.d_model;
        let mut at = 0;
        let embed = span(&mut at, cfg.vocab * d);
        let attn = (0..ATTN_STAGES)
            .map(|_| {
                [
                    span(&mut at, d * d),
                    span(&mut at, d * d),
                    span(&mut at, d * d),
                    span(&mut at, d * d),
                ]
            })
            .collect();
        let mr_table = span(&mut at, cfg.n_rules * cfg.mr_dim);
        let mr_proj = span(&mut at, cfg.mr_dim * d);
        let head_w = span(&mut at, d);
        let head_b = span(&mut at, 1);
        Layout {
            embed,
            attn,
            mr_table,
            mr_proj,
            head_w,
            head_b,
            total: at,
        }
    }
}

/// The full learnable state of one selection policy.
#[derive(Clone, Debug, PartialEq)]
pub struct PolicyParams {
    pub cfg: PolicyConfig,
    pub data: Vec<f64>,
}

impl PolicyParams {
    /// Fresh parameters, every weight uniform in (−0.05, 0.05).
    pub fn init(cfg: PolicyConfig, seed: u64) -> Self {
        let layout = Layout::new(&cfg);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dist = Uniform::new(-0.05, 0.05);
        let data = (0..layout.total).map(|_| dist.sample(&mut rng)).collect();
        PolicyParams { cfg, data }
    }

    pub fn layout(&self) -> Layout {
        Layout::new(&self.cfg)
    }

    /// A zeroed gradient buffer with the same layout.
    pub fn zero_grad(&self) -> Vec<f64> {
        vec![0.0; self.data.len()]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout_tiles_the_vector_exactly() {
        let cfg = PolicyConfig::default();
        let l = Layout::new(&cfg);
        assert_eq!(l.embed, 0..18 * 64);
        assert_eq!(l.attn.len(), ATTN_STAGES);
        let expected = 18 * 64 + 4 * 4 * 64 * 64 + 6 * 16 + 16 * 64 + 64 + 1;
        assert_eq!(l.total, expected);
        assert_eq!(l.head_b.end, expected);
    }

    #[test]
    fn init_is_seeded_and_bounded() {
        let a = PolicyParams::init(PolicyConfig::default(), 9);
        let b = PolicyParams::init(PolicyConfig::default(), 9);
        assert_eq!(a, b);
        let c = PolicyParams::init(PolicyConfig::default(), 10);
        assert_ne!(a, c);
        assert!(a.data.iter().all(|w| w.abs() < 0.05));
        assert_eq!(a.data.len(), a.layout().total);
    }

    #[test]
    #[should_panic]
    fn heads_must_divide_d_model() {
        PolicyConfig {
            d_model: 10,
            heads: 4,
            ..PolicyConfig::default()
        }
        .validate();
    }
}
