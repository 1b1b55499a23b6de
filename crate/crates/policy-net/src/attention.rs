//! Multi-head scaled softmax attention with a residual connection: one
//! associative update step. Masked key slots get −∞ scores; a query whose
//! keys are all masked passes through as its residual input. Backward is
//! exact manual differentiation of the same computation.

use crate::error::PolicyError;
use crate::num::{add_matmul, add_matmul_t, add_tmatmul};

/// Borrowed projection weights of one attention stage, each `[d × d]`.
#[derive(Clone, Copy)]
pub struct AttnWeights<'a> {
    pub wq: &'a [f64],
    pub wk: &'a [f64],
    pub wv: &'a [f64],
    pub wo: &'a [f64],
}

/// Intermediate activations reused by the backward pass.
pub(crate) struct AttnCache {
    pub q: Vec<f64>,
    pub k: Vec<f64>,
    pub v: Vec<f64>,
    /// Softmax weights, `[heads × nq × nk]`; zero in masked columns and in
    /// fully masked rows.
    pub probs: Vec<f64>,
    pub ctx: Vec<f64>,
}

/// Gradients produced by one attention stage.
pub(crate) struct AttnGrads {
    pub dwq: Vec<f64>,
    pub dwk: Vec<f64>,
    pub dwv: Vec<f64>,
    pub dwo: Vec<f64>,
    pub dxq: Vec<f64>,
    pub dxk: Vec<f64>,
    pub dxv: Vec<f64>,
}

pub(crate) fn attn_forward(
    xq: &[f64],
    nq: usize,
    xk: &[f64],
    xv: &[f64],
    nk: usize,
    key_mask: &[bool],
    w: AttnWeights,
    d: usize,
    heads: usize,
) -> (Vec<f64>, AttnCache) {
    let dh = d / heads;
    let beta = 1.0 / (dh as f64).sqrt();
    let mut q = vec![0.0; nq * d];
    let mut k = vec![0.0; nk * d];
    let mut v = vec![0.0; nk * d];
    add_matmul(xq, nq, d, w.wq, d, &mut q);
    add_matmul(xk, nk, d, w.wk, d, &mut k);
    add_matmul(xv, nk, d, w.wv, d, &mut v);

    let mut probs = vec![0.0; heads * nq * nk];
    let mut ctx = vec![0.0; nq * d];
    let mut scores = vec![0.0; nk];
    for h in 0..heads {
        let hoff = h * dh;
        for i in 0..nq {
            let mut best = f64::NEG_INFINITY;
            for j in 0..nk {
                if !key_mask[j] {
                    continue;
                }
                let mut s = 0.0;
                for t in 0..dh {
                    s += q[i * d + hoff + t] * k[j * d + hoff + t];
                }
                scores[j] = beta * s;
                best = best.max(scores[j]);
            }
            if best == f64::NEG_INFINITY {
                continue; // all keys masked: softmax row stays zero
            }
            let mut z = 0.0;
            for j in 0..nk {
                if key_mask[j] {
                    z += (scores[j] - best).exp();
                }
            }
            let p = &mut probs[(h * nq + i) * nk..(h * nq + i + 1) * nk];
            for j in 0..nk {
                if key_mask[j] {
                    p[j] = (scores[j] - best).exp() / z;
                }
            }
            for j in 0..nk {
                if p[j] == 0.0 {
                    continue;
                }
                for t in 0..dh {
                    ctx[i * d + hoff + t] += p[j] * v[j * d + hoff + t];
                }
            }
        }
    }

    let mut out = xq.to_vec(); // residual
    add_matmul(&ctx, nq, d, w.wo, d, &mut out);
    (out, AttnCache { q, k, v, probs, ctx })
}

pub(crate) fn attn_backward(
    dout: &[f64],
    xq: &[f64],
    nq: usize,
    xk: &[f64],
    xv: &[f64],
    nk: usize,
    w: AttnWeights,
    cache: &AttnCache,
    d: usize,
    heads: usize,
) -> AttnGrads {
    let dh = d / heads;
    let beta = 1.0 / (dh as f64).sqrt();

    let mut g = AttnGrads {
        dwq: vec![0.0; d * d],
        dwk: vec![0.0; d * d],
        dwv: vec![0.0; d * d],
        dwo: vec![0.0; d * d],
        dxq: dout.to_vec(), // residual path
        dxk: vec![0.0; nk * d],
        dxv: vec![0.0; nk * d],
    };

    // Output projection.
    add_tmatmul(&cache.ctx, nq, d, dout, d, &mut g.dwo);
    let mut dctx = vec![0.0; nq * d];
    add_matmul_t(dout, nq, d, w.wo, d, &mut dctx);

    // Through the softmax-weighted sum, per head.
    let mut dq = vec![0.0; nq * d];
    let mut dk = vec![0.0; nk * d];
    let mut dv = vec![0.0; nk * d];
    let mut dp = vec![0.0; nk];
    for h in 0..heads {
        let hoff = h * dh;
        for i in 0..nq {
            let p = &cache.probs[(h * nq + i) * nk..(h * nq + i + 1) * nk];
            let mut dot = 0.0;
            for j in 0..nk {
                if p[j] == 0.0 {
                    dp[j] = 0.0;
                    continue;
                }
                let mut s = 0.0;
                for t in 0..dh {
                    s += dctx[i * d + hoff + t] * cache.v[j * d + hoff + t];
                }
                dp[j] = s;
                dot += s * p[j];
                for t in 0..dh {
                    dv[j * d + hoff + t] += p[j] * dctx[i * d + hoff + t];
                }
            }
            for j in 0..nk {
                if p[j] == 0.0 {
                    continue;
                }
                let ds = beta * p[j] * (dp[j] - dot);
                for t in 0..dh {
                    dq[i * d + hoff + t] += ds * cache.k[j * d + hoff + t];
                    dk[j * d + hoff + t] += ds * cache.q[i * d + hoff + t];
                }
            }
        }
    }

    // Input projections.
    add_tmatmul(xq, nq, d, &dq, d, &mut g.dwq);
    add_tmatmul(xk, nk, d, &dk, d, &mut g.dwk);
    add_tmatmul(xv, nk, d, &dv, d, &mut g.dwv);
    add_matmul_t(&dq, nq, d, w.wq, d, &mut g.dxq);
    add_matmul_t(&dk, nk, d, w.wk, d, &mut g.dxk);
    add_matmul_t(&dv, nk, d, w.wv, d, &mut g.dxv);
    g
}

/// One attention update: project, masked softmax per head, recombine, add
/// the residual. `queries` is `[nq × d]`; `keys`/`values` are `[nk × d]`.
pub fn attention_block(
    queries: &[f64],
    keys: &[f64],
    values: &[f64],
    key_mask: &[bool],
    w: AttnWeights,
    d: usize,
    heads: usize,
) -> Result<Vec<f64>, PolicyError> {
    if d == 0 || heads == 0 || d % heads != 0 {
        return Err(PolicyError::ShapeMismatch(format!(
            "heads {heads} must divide d_model {d}"
        )));
    }
    if queries.len() % d != 0 || keys.len() % d != 0 {
        return Err(PolicyError::ShapeMismatch(format!(
            "rows not a multiple of d_model {d}"
        )));
    }
    if values.len() != keys.len() || key_mask.len() != keys.len() / d {
        return Err(PolicyError::ShapeMismatch(format!(
            "keys {} values {} mask {}",
            keys.len() / d,
            values.len() / d,
            key_mask.len()
        )));
    }
    for (name, m) in [("wq", w.wq), ("wk", w.wk), ("wv", w.wv), ("wo", w.wo)] {
        if m.len() != d * d {
            return Err(PolicyError::ShapeMismatch(format!(
                "{name} has {} entries, want {}",
                m.len(),
                d * d
            )));
        }
    }
    let nq = queries.len() / d;
    let nk = keys.len() / d;
    Ok(attn_forward(queries, nq, keys, values, nk, key_mask, w, d, heads).0)
}
