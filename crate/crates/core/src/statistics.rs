//! Kurtosis, whitening, and maximum-kurtosis node selection.

use alloc::format;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::error::{Error, Result};
use crate::filterbank::{NodeCoefficients, NodeId};
use crate::linalg::Mat2;
use crate::numeric::{self, pairwise};

/// Excess kurtosis `E[z⁴] - 3` of `y` after normalizing it to zero mean and
/// unit variance, with biased (1/N) moments.
pub fn kurtosis(y: &[f64]) -> Result<f64> {
    if y.len() < 4 {
        return Err(Error::Length(format!(
            "kurtosis needs 4 samples, got {}",
            y.len()
        )));
    }
    let n = y.len() as f64;
    let m = numeric::mean(y);
    let m2 = pairwise(0, y.len(), |i| {
        let d = y[i] - m;
        d * d
    }) / n;
    let scale = y.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    if !(m2 > 1e-24 * scale * scale) || !m2.is_finite() {
        return Err(Error::Degenerate(
            "zero-variance sequence has no kurtosis".into(),
        ));
    }
    let m4 = pairwise(0, y.len(), |i| {
        let d = (y[i] - m) * (y[i] - m);
        d * d
    }) / n;
    Ok(m4 / (m2 * m2) - 3.0)
}

/// Kurtosis of one packet node on both mixture channels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodeScore {
    pub node: NodeId,
    pub kurtosis: [f64; 2],
    /// `min(kurtosis[0], kurtosis[1])`.
    pub combined: f64,
}

impl NodeScore {
    pub fn new(node: NodeId, k1: f64, k2: f64) -> Self {
        NodeScore {
            node,
            kurtosis: [k1, k2],
            combined: k1.min(k2),
        }
    }
}

/// How a node is chosen from the scores of the two mixtures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SelectionRule {
    /// One common node maximizing the smaller of the two kurtoses.
    #[default]
    CommonMin,
    /// Each mixture picks its own maximum-kurtosis node.
    PerChannel,
}

/// Scores every node present in both decompositions. Nodes whose coefficients
/// are degenerate on either channel are skipped.
pub fn score_nodes(ch1: &[NodeCoefficients], ch2: &[NodeCoefficients]) -> Vec<NodeScore> {
    ch1.iter()
        .filter_map(|a| {
            let b = ch2.iter().find(|b| b.node == a.node)?;
            let k1 = kurtosis(&a.coeffs).ok().filter(|k| k.is_finite())?;
            let k2 = kurtosis(&b.coeffs).ok().filter(|k| k.is_finite())?;
            Some(NodeScore::new(a.node, k1, k2))
        })
        .collect()
}

/// Lower band edge first, then shallower node.
fn frequency_order(a: NodeId, b: NodeId) -> Ordering {
    // position / 2^level compared without division
    let lhs = (a.position as u64) << b.level;
    let rhs = (b.position as u64) << a.level;
    lhs.cmp(&rhs).then(a.level.cmp(&b.level))
}

fn best_by<F: Fn(&NodeScore) -> f64>(scores: &[NodeScore], key: F) -> Option<NodeScore> {
    scores
        .iter()
        .copied()
        .reduce(|best, s| match key(&s).total_cmp(&key(&best)) {
            Ordering::Greater => s,
            Ordering::Less => best,
            Ordering::Equal => {
                if frequency_order(s.node, best.node) == Ordering::Less {
                    s
                } else {
                    best
                }
            }
        })
}

/// Picks the node with the highest combined score. Ties go to the lower
/// frequency band, then to the shallower node.
pub fn select_best_node(scores: &[NodeScore]) -> Result<NodeScore> {
    best_by(scores, |s| s.combined)
        .ok_or_else(|| Error::Selection("no node has finite kurtosis on both channels".into()))
}

/// Independent per-mixture choice: the maximum-kurtosis node for each channel.
pub fn select_per_channel(scores: &[NodeScore]) -> Result<[NodeScore; 2]> {
    let err = || Error::Selection("no node has finite kurtosis on both channels".into());
    let first = best_by(scores, |s| s.kurtosis[0]).ok_or_else(err)?;
    let second = best_by(scores, |s| s.kurtosis[1]).ok_or_else(err)?;
    Ok([first, second])
}

/// Affine map `x ↦ matrix · (x - mean)` giving identity sample covariance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WhiteningModel {
    pub mean: [f64; 2],
    pub matrix: Mat2,
}

impl WhiteningModel {
    pub fn identity() -> Self {
        WhiteningModel {
            mean: [0.0, 0.0],
            matrix: Mat2::IDENTITY,
        }
    }

    pub fn transform(&self, x: [&[f64]; 2]) -> [Vec<f64>; 2] {
        let [a, b] = x;
        let mut out = [Vec::with_capacity(a.len()), Vec::with_capacity(a.len())];
        for (&u, &v) in a.iter().zip(b) {
            let y = self.matrix.apply([u - self.mean[0], v - self.mean[1]]);
            out[0].push(y[0]);
            out[1].push(y[1]);
        }
        out
    }
}

/// Sample mean and biased covariance of two equally long channels.
pub fn covariance(x: [&[f64]; 2]) -> ([f64; 2], Mat2) {
    let [a, b] = x;
    let n = a.len() as f64;
    let mean = [numeric::mean(a), numeric::mean(b)];
    let caa = pairwise(0, a.len(), |i| (a[i] - mean[0]) * (a[i] - mean[0])) / n;
    let cbb = pairwise(0, a.len(), |i| (b[i] - mean[1]) * (b[i] - mean[1])) / n;
    let cab = pairwise(0, a.len(), |i| (a[i] - mean[0]) * (b[i] - mean[1])) / n;
    (mean, Mat2::new(caa, cab, cab, cbb))
}

/// Fits `D^(-1/2) Eᵀ` from the eigendecomposition `C = E D Eᵀ` of the sample
/// covariance, with eigenvalues in decreasing order.
pub fn fit_whitening(x: [&[f64]; 2]) -> Result<WhiteningModel> {
    let [a, b] = x;
    if a.len() != b.len() {
        return Err(Error::Dimension(format!(
            "channel lengths differ: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    if a.len() < 2 {
        return Err(Error::Length("whitening needs at least 2 samples".into()));
    }
    let (mean, cov) = covariance(x);
    let eig = cov.symmetric_eigen();
    let (hi, lo) = if eig.values[0] >= eig.values[1] {
        (0, 1)
    } else {
        (1, 0)
    };
    let (l_hi, l_lo) = (eig.values[hi], eig.values[lo]);
    if !(l_hi > 0.0) || !l_hi.is_finite() || !(l_lo > 1e-12 * l_hi) {
        return Err(Error::SingularData(format!(
            "covariance eigenvalues {l_hi:e} and {l_lo:e} are rank deficient"
        )));
    }
    let e = eig.vectors;
    let s_hi = 1.0 / libm::sqrt(l_hi);
    let s_lo = 1.0 / libm::sqrt(l_lo);
    let matrix = Mat2::new(
        e.get(0, hi) * s_hi,
        e.get(1, hi) * s_hi,
        e.get(0, lo) * s_lo,
        e.get(1, lo) * s_lo,
    );
    Ok(WhiteningModel { mean, matrix })
}
