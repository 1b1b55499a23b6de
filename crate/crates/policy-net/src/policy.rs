//! The selection network: embed case tokens, mean-pool each case to one
//! vector, self-attend the positive bag and the negative bag, self-attend
//! their concatenation, cross-attend learnable meta-rule queries against
//! the combined cases, and map each meta-rule vector to a clamped sigmoid
//! probability. [`backward`] is the exact analytic gradient of the same
//! pipeline, chained with an upstream gradient on the probabilities.

use crate::attention::{attn_backward, attn_forward, AttnCache, AttnWeights};
use crate::error::PolicyError;
use crate::num::{add_matmul, add_matmul_t, add_tmatmul, sigmoid};
use crate::params::{Layout, PolicyParams, CROSS_ATTN, JOINT_ATTN, NEG_ATTN, POS_ATTN};
use std::ops::Range;
use task_corpus::InstanceEncoding;

struct Pooled {
    cases: Vec<f64>,
    mask: Vec<bool>,
    /// 1 / (token count) per case; zero for empty slots.
    inv: Vec<f64>,
}

fn pool_side(
    tokens: &[u32],
    mask: &[bool],
    cap: usize,
    rows: usize,
    fields: usize,
    embed: &[f64],
    d: usize,
    vocab: usize,
    what: &'static str,
) -> Result<Pooled, PolicyError> {
    if tokens.len() != cap * rows * fields || mask.len() != cap * rows {
        return Err(PolicyError::ShapeMismatch(format!(
            "{what}: {} tokens / {} mask flags for cap {cap} × {rows} rows × {fields} fields",
            tokens.len(),
            mask.len()
        )));
    }
    let mut cases = vec![0.0; cap * d];
    let mut case_mask = vec![false; cap];
    let mut inv = vec![0.0; cap];
    for c in 0..cap {
        let mut count = 0usize;
        for r in 0..rows {
            if !mask[c * rows + r] {
                continue;
            }
            for f in 0..fields {
                let tok = tokens[(c * rows + r) * fields + f] as usize;
                if tok >= vocab {
                    return Err(PolicyError::ShapeMismatch(format!(
                        "{what}: token {tok} outside vocabulary {vocab}"
                    )));
                }
                for t in 0..d {
                    cases[c * d + t] += embed[tok * d + t];
                }
                count += 1;
            }
        }
        if count > 0 {
            case_mask[c] = true;
            inv[c] = 1.0 / count as f64;
            for t in 0..d {
                cases[c * d + t] *= inv[c];
            }
        }
    }
    Ok(Pooled {
        cases,
        mask: case_mask,
        inv,
    })
}

fn pool_backward(
    dcases: &[f64],
    tokens: &[u32],
    mask: &[bool],
    cap: usize,
    rows: usize,
    fields: usize,
    inv: &[f64],
    d: usize,
    grad_embed: &mut [f64],
) {
    for c in 0..cap {
        if inv[c] == 0.0 {
            continue;
        }
        for r in 0..rows {
            if !mask[c * rows + r] {
                continue;
            }
            for f in 0..fields {
                let tok = tokens[(c * rows + r) * fields + f] as usize;
                for t in 0..d {
                    grad_embed[tok * d + t] += dcases[c * d + t] * inv[c];
                }
            }
        }
    }
}

struct Cache {
    pos: Pooled,
    neg: Pooled,
    pos_attn: AttnCache,
    neg_attn: AttnCache,
    /// Concatenated per-bag attention outputs, `[cap_pos + cap_neg  × d]`.
    joint_in: Vec<f64>,
    joint_out: Vec<f64>,
    joint_attn: AttnCache,
    mrq: Vec<f64>,
    cross_out: Vec<f64>,
    cross_attn: AttnCache,
    raw: Vec<f64>,
}

fn weights<'a>(p: &'a PolicyParams, l: &Layout, stage: usize) -> AttnWeights<'a> {
    let [q, k, v, o] = &l.attn[stage];
    AttnWeights {
        wq: &p.data[q.clone()],
        wk: &p.data[k.clone()],
        wv: &p.data[v.clone()],
        wo: &p.data[o.clone()],
    }
}

fn run(enc: &InstanceEncoding, p: &PolicyParams) -> Result<(Vec<f64>, Cache), PolicyError> {
    let l = p.layout();
    let cfg = &enc.cfg;
    let d = p.cfg.d_model;
    let heads = p.cfg.heads;
    let embed = &p.data[l.embed.clone()];
    let pos = pool_side(
        &enc.pos_tokens,
        &enc.pos_mask,
        cfg.cap_pos,
        cfg.max_case_len,
        cfg.fields,
        embed,
        d,
        p.cfg.vocab,
        "positives",
    )?;
    let neg = pool_side(
        &enc.neg_tokens,
        &enc.neg_mask,
        cfg.cap_neg,
        cfg.max_case_len,
        cfg.fields,
        embed,
        d,
        p.cfg.vocab,
        "negatives",
    )?;

    let np = cfg.cap_pos;
    let nn = cfg.cap_neg;
    let (pos_out, pos_attn) = attn_forward(
        &pos.cases,
        np,
        &pos.cases,
        &pos.cases,
        np,
        &pos.mask,
        weights(p, &l, POS_ATTN),
        d,
        heads,
    );
    let (neg_out, neg_attn) = attn_forward(
        &neg.cases,
        nn,
        &neg.cases,
        &neg.cases,
        nn,
        &neg.mask,
        weights(p, &l, NEG_ATTN),
        d,
        heads,
    );

    let mut joint_in = pos_out;
    joint_in.extend_from_slice(&neg_out);
    let mut joint_mask = pos.mask.clone();
    joint_mask.extend_from_slice(&neg.mask);
    let nj = np + nn;
    let (joint_out, joint_attn) = attn_forward(
        &joint_in,
        nj,
        &joint_in,
        &joint_in,
        nj,
        &joint_mask,
        weights(p, &l, JOINT_ATTN),
        d,
        heads,
    );

    let nr = p.cfg.n_rules;
    let mut mrq = vec![0.0; nr * d];
    add_matmul(
        &p.data[l.mr_table.clone()],
        nr,
        p.cfg.mr_dim,
        &p.data[l.mr_proj.clone()],
        d,
        &mut mrq,
    );
    let (cross_out, cross_attn) = attn_forward(
        &mrq,
        nr,
        &joint_out,
        &joint_out,
        nj,
        &joint_mask,
        weights(p, &l, CROSS_ATTN),
        d,
        heads,
    );

    let head_w = &p.data[l.head_w.clone()];
    let head_b = p.data[l.head_b.start];
    let mut raw = vec![0.0; nr];
    let mut probs = vec![0.0; nr];
    let lo = p.cfg.p_min;
    let hi = 1.0 - p.cfg.p_min;
    for i in 0..nr {
        let mut logit = head_b;
        for t in 0..d {
            logit += cross_out[i * d + t] * head_w[t];
        }
        raw[i] = sigmoid(logit);
        probs[i] = raw[i].clamp(lo, hi);
    }
    let cache = Cache {
        pos,
        neg,
        pos_attn,
        neg_attn,
        joint_in,
        joint_out,
        joint_attn,
        mrq,
        cross_out,
        cross_attn,
        raw,
    };
    Ok((probs, cache))
}

/// Selection probabilities for one encoded instance, one per meta-rule,
/// each within `[p_min, 1 − p_min]`. Deterministic.
pub fn forward(enc: &InstanceEncoding, p: &PolicyParams) -> Result<Vec<f64>, PolicyError> {
    run(enc, p).map(|(probs, _)| probs)
}

fn add_into(grads: &mut [f64], range: &Range<usize>, src: &[f64]) {
    for (g, s) in grads[range.clone()].iter_mut().zip(src) {
        *g += s;
    }
}

fn vsum3(a: Vec<f64>, b: &[f64], c: &[f64]) -> Vec<f64> {
    let mut out = a;
    for (o, (x, y)) in out.iter_mut().zip(b.iter().zip(c)) {
        *o += x + y;
    }
    out
}

/// Gradient of `dot(upstream, probs)` with respect to every parameter,
/// flat in the parameter layout. Saturated (clamped) outputs contribute
/// zero, as do padded token slots.
pub fn backward(
    enc: &InstanceEncoding,
    p: &PolicyParams,
    upstream: &[f64],
) -> Result<Vec<f64>, PolicyError> {
    let nr = p.cfg.n_rules;
    if upstream.len() != nr {
        return Err(PolicyError::ShapeMismatch(format!(
            "upstream gradient has {} entries, want {nr}",
            upstream.len()
        )));
    }
    let (_, cache) = run(enc, p)?;
    let l = p.layout();
    let d = p.cfg.d_model;
    let heads = p.cfg.heads;
    let cfg = &enc.cfg;
    let np = cfg.cap_pos;
    let nn = cfg.cap_neg;
    let nj = np + nn;
    let mut grads = p.zero_grad();

    // Output head and sigmoid with its clamp.
    let lo = p.cfg.p_min;
    let hi = 1.0 - p.cfg.p_min;
    let head_w = &p.data[l.head_w.clone()];
    let mut dcross = vec![0.0; nr * d];
    for i in 0..nr {
        let raw = cache.raw[i];
        if raw <= lo || raw >= hi {
            continue;
        }
        let dlogit = upstream[i] * raw * (1.0 - raw);
        grads[l.head_b.start] += dlogit;
        for t in 0..d {
            grads[l.head_w.start + t] += dlogit * cache.cross_out[i * d + t];
            dcross[i * d + t] = dlogit * head_w[t];
        }
    }

    // Cross-attention: meta-rule queries against combined cases.
    let g = attn_backward(
        &dcross,
        &cache.mrq,
        nr,
        &cache.joint_out,
        &cache.joint_out,
        nj,
        weights(p, &l, CROSS_ATTN),
        &cache.cross_attn,
        d,
        heads,
    );
    let [q, k, v, o] = &l.attn[CROSS_ATTN];
    add_into(&mut grads, q, &g.dwq);
    add_into(&mut grads, k, &g.dwk);
    add_into(&mut grads, v, &g.dwv);
    add_into(&mut grads, o, &g.dwo);
    let dmrq = g.dxq;
    let mut djoint_out = g.dxk;
    for (a, b) in djoint_out.iter_mut().zip(&g.dxv) {
        *a += b;
    }

    // Meta-rule table and its projection.
    {
        let mr_table = &p.data[l.mr_table.clone()];
        let mr_proj = &p.data[l.mr_proj.clone()];
        let mut dproj = vec![0.0; mr_proj.len()];
        add_tmatmul(mr_table, nr, p.cfg.mr_dim, &dmrq, d, &mut dproj);
        add_into(&mut grads, &l.mr_proj, &dproj);
        let mut dtable = vec![0.0; mr_table.len()];
        add_matmul_t(&dmrq, nr, d, mr_proj, p.cfg.mr_dim, &mut dtable);
        add_into(&mut grads, &l.mr_table, &dtable);
    }

    // Joint self-attention over the concatenated bags.
    let g = attn_backward(
        &djoint_out,
        &cache.joint_in,
        nj,
        &cache.joint_in,
        &cache.joint_in,
        nj,
        weights(p, &l, JOINT_ATTN),
        &cache.joint_attn,
        d,
        heads,
    );
    let [q, k, v, o] = &l.attn[JOINT_ATTN];
    add_into(&mut grads, q, &g.dwq);
    add_into(&mut grads, k, &g.dwk);
    add_into(&mut grads, v, &g.dwv);
    add_into(&mut grads, o, &g.dwo);
    let djoint_in = vsum3(g.dxq, &g.dxk, &g.dxv);
    let (dpos_out, dneg_out) = djoint_in.split_at(np * d);

    // Per-bag self-attention.
    let g = attn_backward(
        dpos_out,
        &cache.pos.cases,
        np,
        &cache.pos.cases,
        &cache.pos.cases,
        np,
        weights(p, &l, POS_ATTN),
        &cache.pos_attn,
        d,
        heads,
    );
    let [q, k, v, o] = &l.attn[POS_ATTN];
    add_into(&mut grads, q, &g.dwq);
    add_into(&mut grads, k, &g.dwk);
    add_into(&mut grads, v, &g.dwv);
    add_into(&mut grads, o, &g.dwo);
    let dpos_cases = vsum3(g.dxq, &g.dxk, &g.dxv);

    let g = attn_backward(
        dneg_out,
        &cache.neg.cases,
        nn,
        &cache.neg.cases,
        &cache.neg.cases,
        nn,
        weights(p, &l, NEG_ATTN),
        &cache.neg_attn,
        d,
        heads,
    );
    let [q, k, v, o] = &l.attn[NEG_ATTN];
    add_into(&mut grads, q, &g.dwq);
    add_into(&mut grads, k, &g.dwk);
    add_into(&mut grads, v, &g.dwv);
    add_into(&mut grads, o, &g.dwo);
    let dneg_cases = vsum3(g.dxq, &g.dxk, &g.dxv);

    // Pooling back to the token embeddings of unpadded slots.
    let grad_embed = &mut grads[l.embed.clone()];
    pool_backward(
        &dpos_cases,
        &enc.pos_tokens,
        &enc.pos_mask,
        np,
        cfg.max_case_len,
        cfg.fields,
        &cache.pos.inv,
        d,
        grad_embed,
    );
    pool_backward(
        &dneg_cases,
        &enc.neg_tokens,
        &enc.neg_mask,
        nn,
        cfg.max_case_len,
        cfg.fields,
        &cache.neg.inv,
        d,
        grad_embed,
    );
    Ok(grads)
}
