//! Small dense-matrix helpers over flat row-major `f64` slices. All
//! product routines accumulate into `out` so callers can sum gradient
//! contributions without temporaries.

/// out[n×p] += x[n×m] · w[m×p]
pub(crate) fn add_matmul(x: &[f64], n: usize, m: usize, w: &[f64], p: usize, out: &mut [f64]) {
    debug_assert_eq!(x.len(), n * m);
    debug_assert_eq!(w.len(), m * p);
    debug_assert_eq!(out.len(), n * p);
    for i in 0..n {
        for t in 0..m {
            let xv = x[i * m + t];
            if xv == 0.0 {
                continue;
            }
            let wr = &w[t * p..(t + 1) * p];
            let or = &mut out[i * p..(i + 1) * p];
            for c in 0..p {
                or[c] += xv * wr[c];
            }
        }
    }
}

/// out[n×m] += x[n×p] · wᵀ where w is [m×p]
pub(crate) fn add_matmul_t(x: &[f64], n: usize, p: usize, w: &[f64], m: usize, out: &mut [f64]) {
    debug_assert_eq!(x.len(), n * p);
    debug_assert_eq!(w.len(), m * p);
    debug_assert_eq!(out.len(), n * m);
    for i in 0..n {
        let xr = &x[i * p..(i + 1) * p];
        for t in 0..m {
            let wr = &w[t * p..(t + 1) * p];
            let mut s = 0.0;
            for c in 0..p {
                s += xr[c] * wr[c];
            }
            out[i * m + t] += s;
        }
    }
}

/// out[m×p] += xᵀ · y where x is [n×m], y is [n×p]
pub(crate) fn add_tmatmul(x: &[f64], n: usize, m: usize, y: &[f64], p: usize, out: &mut [f64]) {
    debug_assert_eq!(x.len(), n * m);
    debug_assert_eq!(y.len(), n * p);
    debug_assert_eq!(out.len(), m * p);
    for i in 0..n {
        let yr = &y[i * p..(i + 1) * p];
        for t in 0..m {
            let xv = x[i * m + t];
            if xv == 0.0 {
                continue;
            }
            let or = &mut out[t * p..(t + 1) * p];
            for c in 0..p {
                or[c] += xv * yr[c];
            }
        }
    }
}

pub(crate) fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}
