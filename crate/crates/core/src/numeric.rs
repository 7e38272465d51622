//! Reduction helpers.
//!
//! Every reduction goes through pairwise summation so that results depend
//! only on the data, never on how a caller splits the work.

const PAIRWISE_BLOCK: usize = 64;

/// Pairwise sum of `f(i)` for `i` in `0..n`.
pub(crate) fn pairwise<F: Fn(usize) -> f64 + Copy>(start: usize, n: usize, f: F) -> f64 {
    if n <= PAIRWISE_BLOCK {
        let mut acc = 0.0;
        for i in start..start + n {
            acc += f(i);
        }
        acc
    } else {
        let half = n / 2;
        pairwise(start, half, f) + pairwise(start + half, n - half, f)
    }
}

pub fn sum(x: &[f64]) -> f64 {
    pairwise(0, x.len(), |i| x[i])
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    pairwise(0, a.len().min(b.len()), |i| a[i] * b[i])
}

pub fn energy(x: &[f64]) -> f64 {
    dot(x, x)
}

pub fn mean(x: &[f64]) -> f64 {
    if x.is_empty() {
        0.0
    } else {
        sum(x) / x.len() as f64
    }
}

/// Biased (1/N) variance.
pub fn variance(x: &[f64]) -> f64 {
    let m = mean(x);
    pairwise(0, x.len(), |i| (x[i] - m) * (x[i] - m)) / x.len() as f64
}
