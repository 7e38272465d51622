//! Undecimated (à trous) wavelet packet decomposition over the critical-band tree.

mod tree;

pub use tree::{
    build_cb_tree, critical_bandwidth_at, default_cb_tree, CbLeaf, CbTree, CriticalBand, NodeId,
    CRITICAL_BANDS, MAX_LEVEL, TREE_RATE_HZ,
};

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::signal::Signal;

/// Orthonormal analysis pair: low-pass `h` and its quadrature mirror `g`.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterPair {
    pub h: Vec<f64>,
    pub g: Vec<f64>,
}

impl FilterPair {
    /// Builds the pair from a low-pass filter using `g[k] = (-1)^k h[L-1-k]`.
    pub fn from_lowpass(h: Vec<f64>) -> Self {
        let l = h.len();
        let g = (0..l)
            .map(|k| {
                if k % 2 == 0 {
                    h[l - 1 - k]
                } else {
                    -h[l - 1 - k]
                }
            })
            .collect();
        FilterPair { h, g }
    }
}

/// Daubechies scaling filter with four vanishing moments (8 taps), `Σh = √2`.
const DB4_LOWPASS: [f64; 8] = [
    0.230_377_813_308_896_5,
    0.714_846_570_552_915_4,
    0.630_880_767_929_858_7,
    -0.027_983_769_416_859_854,
    -0.187_034_811_719_093_1,
    0.030_841_381_835_560_764,
    0.032_883_011_666_885_2,
    -0.010_597_401_785_069_032,
];

pub fn db4_filters() -> FilterPair {
    FilterPair::from_lowpass(DB4_LOWPASS.to_vec())
}

/// One undecimated analysis step at `level` (≥ 1).
///
/// Both filters are dilated by inserting `2^(level-1) - 1` zeros between taps
/// and applied by circular convolution, so the outputs keep the input length.
pub fn uwpd_step(coeffs: &[f64], filters: &FilterPair, level: u8) -> Result<(Vec<f64>, Vec<f64>)> {
    if coeffs.is_empty() {
        return Err(Error::Dimension("cannot filter an empty sequence".into()));
    }
    if level == 0 || level > 31 {
        return Err(Error::Parameter(format!("level {level} must be in 1..=31")));
    }
    let n = coeffs.len();
    let stride = (1usize << (level - 1)) % n;
    let mut approx = vec![0.0; n];
    let mut detail = vec![0.0; n];
    for t in 0..n {
        let mut a = 0.0;
        let mut d = 0.0;
        // index of x[t - k·2^(level-1)] modulo n
        let mut idx = t;
        for (hk, gk) in filters.h.iter().zip(&filters.g) {
            let x = coeffs[idx];
            a += hk * x;
            d += gk * x;
            idx = if idx >= stride {
                idx - stride
            } else {
                idx + n - stride
            };
        }
        approx[t] = a;
        detail[t] = d;
    }
    Ok((approx, detail))
}

/// Coefficients of one packet node; same length as the analysed signal.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeCoefficients {
    pub node: NodeId,
    pub is_leaf: bool,
    pub coeffs: Vec<f64>,
}

/// Coefficients of a leaf of the critical-band tree.
#[derive(Debug, Clone, PartialEq)]
pub struct LeafCoefficients {
    pub node: NodeId,
    pub coeffs: Vec<f64>,
}

/// Decomposes `signal` over `tree` and returns one sequence per leaf, in
/// increasing frequency order.
pub fn decompose(
    signal: &Signal,
    tree: &CbTree,
    filters: &FilterPair,
) -> Result<Vec<LeafCoefficients>> {
    let mut nodes = decompose_nodes(signal, tree, filters)?;
    nodes.retain(|n| n.is_leaf);
    nodes.sort_by_key(|n| leaf_order(tree, n.node));
    Ok(nodes
        .into_iter()
        .map(|n| LeafCoefficients {
            node: n.node,
            coeffs: n.coeffs,
        })
        .collect())
}

fn leaf_order(tree: &CbTree, node: NodeId) -> usize {
    tree.leaves()
        .iter()
        .position(|l| l.node == node)
        .unwrap_or(usize::MAX)
}

/// Decomposes `signal` and returns every node below the root, internal and
/// leaf, in pre-order.
///
/// The children of a node at natural position `p` are `2p` and `2p+1`. For
/// even `p` the low-pass output is the lower child; for odd `p` the roles
/// swap, which keeps positions in frequency order.
pub fn decompose_nodes(
    signal: &Signal,
    tree: &CbTree,
    filters: &FilterPair,
) -> Result<Vec<NodeCoefficients>> {
    if signal.sample_rate_hz() != tree.fs_hz() {
        return Err(Error::UnsupportedRate(signal.sample_rate_hz()));
    }
    let mut out = Vec::new();
    if tree.is_leaf(NodeId::ROOT) {
        return Ok(out);
    }
    split(tree, filters, NodeId::ROOT, signal.samples(), &mut out)?;
    Ok(out)
}

fn split(
    tree: &CbTree,
    filters: &FilterPair,
    node: NodeId,
    coeffs: &[f64],
    out: &mut Vec<NodeCoefficients>,
) -> Result<()> {
    let (low, high) = uwpd_step(coeffs, filters, node.level + 1)?;
    let [first, second] = node.children();
    let (first_coeffs, second_coeffs) = if node.position.is_multiple_of(2) {
        (low, high)
    } else {
        (high, low)
    };
    for (child, c) in [(first, first_coeffs), (second, second_coeffs)] {
        let is_leaf = tree.is_leaf(child);
        let idx = out.len();
        out.push(NodeCoefficients {
            node: child,
            is_leaf,
            coeffs: c,
        });
        if !is_leaf {
            let parent = core::mem::take(&mut out[idx].coeffs);
            split(tree, filters, child, &parent, out)?;
            out[idx].coeffs = parent;
        }
    }
    Ok(())
}
